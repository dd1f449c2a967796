#include <chrono>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "collapselab/errors.hpp"
#include "collapselab/protocols.hpp"
#include "collapselab/scenario.hpp"
#include "collapselab/version.hpp"

namespace collapselab {

namespace {

constexpr double pi = 3.14159265358979323846;

ResultTable distribution_table(const OutcomeDistribution& direct,
                               const OutcomeDistribution& post,
                               const std::vector<double>& residual) {
    ResultTable table;
    table.name = "distributions";
    table.columns = {"label", "p_direct", "p_post", "residual"};
    for (std::size_t m = 0; m < direct.size(); ++m)
        table.rows.push_back({direct.label(m), direct.prob(m), post.prob(m), residual[m]});
    return table;
}

void run_two_measurement(const ScenarioConfig& config, RunReport& report) {
    const DensityMatrix& rho = *config.state;
    const Observable& x = *config.first;
    const Observable& y = *config.second;

    const OutcomeDistribution direct = direct_distribution(rho, y);
    const OutcomeDistribution post = post_measurement_distribution(rho, x, y);
    const std::vector<double> residual = total_probability_residual(rho, x, y);
    report.tables.push_back(distribution_table(direct, post, residual));

    std::vector<MeasurementStep> steps;
    steps.emplace_back(x);
    steps.emplace_back(y);
    const MeasurementRecord record = sample_records(rho, steps, config.seed, config.shots);

    ResultTable joint;
    joint.name = "empirical_joint";
    joint.columns = {"x_label", "y_label", "count", "frequency"};
    for (const auto& [key, count] : record.empirical_joint)
        joint.rows.push_back({key[0], key[1], static_cast<double>(count),
                              static_cast<double>(count) / static_cast<double>(record.shots)});
    report.tables.push_back(std::move(joint));

    ResultTable marginal;
    marginal.name = "empirical_second_marginal";
    marginal.columns = {"label", "frequency", "exact", "deviation"};
    const auto freq = record.marginal(1, steps.size());
    for (std::size_t m = 0; m < post.size(); ++m) {
        const auto it = freq.find(post.label(m));
        const double f = it == freq.end() ? 0.0 : it->second;
        marginal.rows.push_back({post.label(m), f, post.prob(m), f - post.prob(m)});
    }
    report.tables.push_back(std::move(marginal));
}

void run_cmo_probe(const ScenarioConfig& config, RunReport& report) {
    const std::vector<double> grid = config.t_grid ? *config.t_grid : default_t_grid();
    const CmoProbeResult result =
        cmo_limit_probe(*config.state, *config.first, *config.hamiltonian, grid);

    const std::size_t d = config.first->dim();
    ResultTable matrix;
    matrix.name = "conditional_matrix";
    matrix.columns = {"t", "n", "m", "probability"};
    for (std::size_t i = 0; i < result.t_grid.size(); ++i)
        for (std::size_t n = 0; n < d; ++n)
            for (std::size_t m = 0; m < d; ++m)
                matrix.rows.push_back({result.t_grid[i], static_cast<double>(n),
                                       static_cast<double>(m), result.matrices[i][n][m]});
    report.tables.push_back(std::move(matrix));

    ResultTable fit;
    fit.name = "exponent_fit";
    fit.columns = {"n", "m", "exponent"};
    for (std::size_t n = 0; n < d; ++n)
        for (std::size_t m = 0; m < d; ++m) {
            if (n == m) continue;
            fit.rows.push_back(
                {static_cast<double>(n), static_cast<double>(m), result.exponents[n][m]});
        }
    report.tables.push_back(std::move(fit));
}

void run_classical_check(const ScenarioConfig& config, RunReport& report) {
    const ClassicalSystem& sys = *config.classical;
    const std::vector<double> grid = config.t_grid ? *config.t_grid : default_t_grid();
    const ClassicalCmoResult cmo = classical_cmo_check(sys, grid);

    const std::size_t cells = sys.x_labels().size();
    ResultTable matrix;
    matrix.name = "cmo_matrix";
    matrix.columns = {"t", "n", "m", "probability"};
    for (std::size_t i = 0; i < cmo.t_grid.size(); ++i)
        for (std::size_t n = 0; n < cells; ++n)
            for (std::size_t m = 0; m < cells; ++m)
                matrix.rows.push_back({cmo.t_grid[i], static_cast<double>(n),
                                       static_cast<double>(m), cmo.matrices[i][n][m]});
    report.tables.push_back(std::move(matrix));

    ResultTable limit;
    limit.name = "cmo_limit_matrix";
    limit.columns = {"n", "m", "probability"};
    for (std::size_t n = 0; n < cells; ++n)
        for (std::size_t m = 0; m < cells; ++m)
            limit.rows.push_back(
                {static_cast<double>(n), static_cast<double>(m), cmo.limit_matrix[n][m]});
    report.tables.push_back(std::move(limit));

    const std::vector<double> residual = total_probability_check(sys);
    ResultTable prob;
    prob.name = "total_probability";
    prob.columns = {"y_label", "residual"};
    for (std::size_t m = 0; m < residual.size(); ++m)
        prob.rows.push_back({sys.y_labels()[m], residual[m]});
    report.tables.push_back(std::move(prob));

    const TotalVarianceResult variance = total_variance_check(sys);
    ResultTable var;
    var.name = "total_variance";
    var.columns = {"lhs", "rhs", "residual"};
    var.rows.push_back({variance.lhs, variance.rhs, variance.residual});
    report.tables.push_back(std::move(var));
}

void run_coherence_audit(const ScenarioConfig& config, RunReport& report) {
    const CoherenceReport coherence = certify_coherence(*config.state, *config.first,
                                                        config.second,
                                                        config.coherence_tolerance);
    report.coherence = coherence;

    ResultTable table;
    table.name = "coherence_report";
    table.columns = {"variance_lhs", "variance_rhs",  "variance_gap",
                     "trace_distance", "max_total_prob_violation", "incoherent",
                     "tolerance_used"};
    table.rows.push_back({coherence.variance_lhs, coherence.variance_rhs,
                          coherence.variance_gap, coherence.trace_distance,
                          coherence.max_total_prob_violation,
                          coherence.incoherent ? 1.0 : 0.0, coherence.tolerance_used});
    report.tables.push_back(std::move(table));
}

void run_qubit_sweep(const ScenarioConfig& config, RunReport& report) {
    const Observable x = qubit_observable_x();

    ResultTable table;
    table.name = "sweep";
    table.columns = {"p",
                     "gamma_abs",
                     "gamma_arg",
                     "theta",
                     "phi",
                     "p_direct_plus",
                     "p_direct_plus_ref",
                     "p_post_plus",
                     "p_post_plus_ref",
                     "residual_plus",
                     "residual_plus_ref",
                     "trace_distance",
                     "trace_distance_ref",
                     "variance_gap_opt",
                     "variance_gap_opt_ref"};

    double max_direct = 0.0, max_post = 0.0, max_residual = 0.0, max_trace = 0.0, max_gap = 0.0;
    for (double p : config.sweep.p) {
        for (double ga : config.sweep.gamma_abs) {
            for (double arg : config.sweep.gamma_arg) {
                QubitParams base;
                base.p = p;
                base.gamma = std::polar(ga, arg);
                const DensityMatrix rho = qubit_state(base);
                const double trace = trace_distance_to_dephased(rho, x);

                const Observable y_opt = qubit_observable_y(pi / 2.0, -arg);
                const double gap_opt = variance_gap(rho, x, y_opt).gap;

                for (double theta : config.sweep.theta) {
                    for (double phi : config.sweep.phi) {
                        QubitParams params = base;
                        params.theta = theta;
                        params.phi = phi;
                        const QubitOracleValues ref = qubit_oracle(params);

                        const Observable y = qubit_observable_y(theta, phi);
                        const OutcomeDistribution direct = direct_distribution(rho, y);
                        const OutcomeDistribution post =
                            post_measurement_distribution(rho, x, y);
                        const std::vector<double> residual =
                            total_probability_residual(rho, x, y);

                        table.rows.push_back({p, ga, arg, theta, phi, direct.prob(1),
                                              ref.p_direct_plus, post.prob(1), ref.p_post_plus,
                                              residual[1], ref.residual, trace,
                                              ref.trace_distance, gap_opt,
                                              ref.variance_gap_at_optimum});

                        max_direct = std::max(max_direct,
                                              std::abs(direct.prob(1) - ref.p_direct_plus));
                        max_post =
                            std::max(max_post, std::abs(post.prob(1) - ref.p_post_plus));
                        max_residual =
                            std::max(max_residual, std::abs(residual[1] - ref.residual));
                        max_trace = std::max(max_trace, std::abs(trace - ref.trace_distance));
                        max_gap = std::max(max_gap,
                                           std::abs(gap_opt - ref.variance_gap_at_optimum));
                    }
                }
            }
        }
    }
    report.tables.push_back(std::move(table));

    ResultTable summary;
    summary.name = "summary";
    summary.columns = {"max_abs_dev_direct", "max_abs_dev_post", "max_abs_dev_residual",
                       "max_abs_dev_trace_distance", "max_abs_dev_variance_gap"};
    summary.rows.push_back({max_direct, max_post, max_residual, max_trace, max_gap});
    report.tables.push_back(std::move(summary));
}

}  // namespace

RunReport run(const ScenarioConfig& config) {
    const auto start = std::chrono::steady_clock::now();

    RunReport report;
    report.kind = to_string(config.kind);
    report.seed = config.seed;
    report.shots = config.shots;
    report.scenario = config.echo;

    switch (config.kind) {
        case ScenarioKind::cmo_probe:
            run_cmo_probe(config, report);
            break;
        case ScenarioKind::two_measurement:
            run_two_measurement(config, report);
            break;
        case ScenarioKind::classical_check:
            run_classical_check(config, report);
            break;
        case ScenarioKind::coherence_audit:
            run_coherence_audit(config, report);
            break;
        case ScenarioKind::qubit_sweep:
            run_qubit_sweep(config, report);
            break;
    }

    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace collapselab
