#include "collapselab/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <utility>

#include "collapselab/errors.hpp"
#include "collapselab/hermitian.hpp"
#include "collapselab/parallel.hpp"
#include "collapselab/rng.hpp"
#include "collapselab/tolerances.hpp"

namespace collapselab {

namespace {

void require_matching_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimMismatchError(std::string(what) + ": dimensions " + std::to_string(a) +
                               " and " + std::to_string(b) + " differ");
    }
}

void require_descending_positive(const std::vector<double>& t_grid, const char* what) {
    if (t_grid.empty()) {
        throw EmptyGridError(std::string(what) + ": time grid is empty");
    }
    double prev = std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw InvalidParamsError(std::string(what) +
                                     ": time grid entries must be finite and positive");
        }
        if (t >= prev) {
            throw InvalidParamsError(std::string(what) +
                                     ": time grid must be strictly descending");
        }
        prev = t;
    }
}

}  // namespace

MeasurementStep::MeasurementStep(Observable obs, double wait, std::optional<ComplexMatrix> h)
    : observable(std::move(obs)), wait_before(wait), hamiltonian(std::move(h)) {
    if (!(wait_before >= 0.0) || !std::isfinite(wait_before)) {
        throw InvalidParamsError("measurement step: wait must be finite and >= 0");
    }
    if (wait_before > 0.0 && !hamiltonian.has_value()) {
        throw InvalidParamsError("measurement step: positive wait requires a hamiltonian");
    }
    if (wait_before == 0.0 && hamiltonian.has_value()) {
        throw InvalidParamsError("measurement step: hamiltonian given but wait is zero");
    }
    if (hamiltonian.has_value()) {
        require_matching_dim(observable.dim(), hamiltonian->dim(), "measurement step");
        if (!hamiltonian->is_hermitian(tol::hermitian)) {
            throw NotHermitianError("measurement step: hamiltonian fails hermitian check");
        }
    }
}

std::map<double, double> MeasurementRecord::marginal(std::size_t step,
                                                     std::size_t step_count) const {
    if (step >= step_count) {
        throw IndexOutOfRangeError("record marginal: step " + std::to_string(step) +
                                   " out of range for " + std::to_string(step_count) + " steps");
    }
    std::map<double, double> freq;
    for (std::size_t s = 0; s < shots; ++s)
        freq[outcomes[s * step_count + step].label] += 1.0;
    for (auto& [label, count] : freq) count /= static_cast<double>(shots);
    return freq;
}

OutcomeDistribution conditional_second_distribution(const Observable& x, const Observable& y,
                                                    std::size_t n) {
    require_matching_dim(x.dim(), y.dim(), "conditional_second_distribution");
    if (n >= x.dim()) {
        throw IndexOutOfRangeError("conditioning outcome index " + std::to_string(n) +
                                   " out of range for dimension " + std::to_string(x.dim()));
    }
    const std::size_t d = x.dim();
    const ComplexMatrix& vx = x.spectral().vectors;
    const ComplexMatrix& vy = y.spectral().vectors;
    std::vector<double> probs(d, 0.0);
    for (std::size_t m = 0; m < d; ++m) {
        cplx overlap = 0.0;
        for (std::size_t i = 0; i < d; ++i) overlap += std::conj(vy(i, m)) * vx(i, n);
        probs[m] = std::norm(overlap);
    }
    return OutcomeDistribution(y.labels(), std::move(probs));
}

OutcomeDistribution post_measurement_distribution(const DensityMatrix& rho, const Observable& x,
                                                  const Observable& y) {
    require_matching_dim(rho.dim(), x.dim(), "post_measurement_distribution");
    require_matching_dim(x.dim(), y.dim(), "post_measurement_distribution");
    const std::size_t d = rho.dim();
    const OutcomeDistribution first = born_distribution(rho, x);
    std::vector<double> probs(d, 0.0);
    for (std::size_t n = 0; n < d; ++n) {
        const OutcomeDistribution cond = conditional_second_distribution(x, y, n);
        for (std::size_t m = 0; m < d; ++m) probs[m] += first.prob(n) * cond.prob(m);
    }
    return OutcomeDistribution(y.labels(), std::move(probs));
}

OutcomeDistribution direct_distribution(const DensityMatrix& rho, const Observable& y) {
    require_matching_dim(rho.dim(), y.dim(), "direct_distribution");
    return born_distribution(rho, y);
}

std::vector<double> total_probability_residual(const DensityMatrix& rho, const Observable& x,
                                               const Observable& y) {
    const OutcomeDistribution direct = direct_distribution(rho, y);
    const OutcomeDistribution post = post_measurement_distribution(rho, x, y);
    std::vector<double> residual(direct.size(), 0.0);
    for (std::size_t m = 0; m < direct.size(); ++m)
        residual[m] = direct.prob(m) - post.prob(m);
    return residual;
}

CmoProbeResult cmo_limit_probe(const DensityMatrix& rho, const Observable& x,
                               const ComplexMatrix& hamiltonian,
                               const std::vector<double>& t_grid) {
    require_matching_dim(rho.dim(), x.dim(), "cmo_limit_probe");
    require_matching_dim(x.dim(), hamiltonian.dim(), "cmo_limit_probe");
    require_descending_positive(t_grid, "cmo_limit_probe");

    const std::size_t d = x.dim();
    const ComplexMatrix& v = x.spectral().vectors;

    CmoProbeResult result;
    result.t_grid = t_grid;
    result.matrices.reserve(t_grid.size());
    for (double t : t_grid) {
        const ComplexMatrix overlap = v.adjoint() * unitary_exp(hamiltonian, t) * v;
        std::vector<std::vector<double>> matrix(d, std::vector<double>(d, 0.0));
        for (std::size_t n = 0; n < d; ++n) {
            double row_sum = 0.0;
            for (std::size_t m = 0; m < d; ++m) {
                matrix[n][m] = std::norm(overlap(m, n));
                row_sum += matrix[n][m];
            }
            for (std::size_t m = 0; m < d; ++m) matrix[n][m] /= row_sum;
        }
        result.matrices.push_back(std::move(matrix));
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double floor = 1e-14;
    result.exponents.assign(d, std::vector<double>(d, nan));
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t m = 0; m < d; ++m) {
            if (m == n) continue;
            double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
            std::size_t count = 0;
            for (std::size_t i = 0; i < t_grid.size(); ++i) {
                const double p = result.matrices[i][n][m];
                if (p < floor) continue;
                const double lx = std::log(t_grid[i]);
                const double ly = std::log(p);
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
                ++count;
            }
            if (count < 2) continue;
            const double denom = count * sxx - sx * sx;
            if (denom == 0.0) continue;
            result.exponents[n][m] = (count * sxy - sx * sy) / denom;
        }
    }
    return result;
}

namespace {

// Transition kernel between consecutive steps, and the first-step
// distribution: sampling then reduces to inverse-CDF walks over
// precomputed cumulative tables.
struct SamplingPlan {
    std::size_t step_count = 0;
    std::vector<std::vector<double>> labels;  // per step, indexed by outcome
    std::vector<double> first_cdf;
    // cdf[k][n] = cumulative distribution over outcomes m of step k+1 given
    // outcome n of step k, laid out as d consecutive blocks of size d.
    std::vector<std::vector<double>> transition_cdf;
    std::size_t dim = 0;
};

SamplingPlan build_plan(const DensityMatrix& rho, const std::vector<MeasurementStep>& steps) {
    SamplingPlan plan;
    plan.step_count = steps.size();
    plan.dim = rho.dim();

    DensityMatrix initial = rho;
    if (steps[0].wait_before > 0.0)
        initial = evolve(initial, *steps[0].hamiltonian, steps[0].wait_before);
    const OutcomeDistribution first = born_distribution(initial, steps[0].observable);

    plan.first_cdf.resize(plan.dim);
    double cum = 0.0;
    for (std::size_t n = 0; n < plan.dim; ++n) {
        cum += first.prob(n);
        plan.first_cdf[n] = cum;
    }

    for (const MeasurementStep& step : steps) plan.labels.push_back(step.observable.labels());

    const std::size_t d = plan.dim;
    for (std::size_t k = 1; k < steps.size(); ++k) {
        require_matching_dim(d, steps[k].observable.dim(), "sample_records");
        ComplexMatrix bridge = steps[k].observable.spectral().vectors.adjoint();
        if (steps[k].wait_before > 0.0)
            bridge = bridge * unitary_exp(*steps[k].hamiltonian, steps[k].wait_before);
        bridge = bridge * steps[k - 1].observable.spectral().vectors;

        std::vector<double> cdf(d * d, 0.0);
        for (std::size_t n = 0; n < d; ++n) {
            double acc = 0.0;
            for (std::size_t m = 0; m < d; ++m) {
                acc += std::norm(bridge(m, n));
                cdf[n * d + m] = acc;
            }
        }
        plan.transition_cdf.push_back(std::move(cdf));
    }
    return plan;
}

std::size_t draw(const double* cdf, std::size_t d, double u) {
    for (std::size_t i = 0; i < d; ++i)
        if (u < cdf[i]) return i;
    return d - 1;
}

void run_shots(const SamplingPlan& plan, std::uint64_t seed, std::uint64_t begin,
               std::uint64_t end, MeasurementRecord::Event* events,
               std::map<std::vector<double>, std::uint64_t>& joint) {
    const std::size_t k = plan.step_count;
    std::vector<double> key(k, 0.0);
    for (std::uint64_t shot = begin; shot < end; ++shot) {
        SplitMix64 rng = SplitMix64::substream(seed, shot);
        std::size_t outcome = draw(plan.first_cdf.data(), plan.dim, rng.next_double());
        MeasurementRecord::Event* slot = events + (shot - begin) * k;
        slot[0] = {0, plan.labels[0][outcome]};
        key[0] = plan.labels[0][outcome];
        for (std::size_t step = 1; step < k; ++step) {
            const double* cdf = plan.transition_cdf[step - 1].data() + outcome * plan.dim;
            outcome = draw(cdf, plan.dim, rng.next_double());
            slot[step] = {step, plan.labels[step][outcome]};
            key[step] = plan.labels[step][outcome];
        }
        ++joint[key];
    }
}

}  // namespace

MeasurementRecord sample_records(const DensityMatrix& rho,
                                 const std::vector<MeasurementStep>& steps, std::uint64_t seed,
                                 std::uint64_t shots) {
    if (steps.empty()) {
        throw InvalidParamsError("sample_records: need at least one measurement step");
    }
    if (shots < 1) {
        throw InvalidParamsError("sample_records: shots must be >= 1");
    }
    require_matching_dim(rho.dim(), steps[0].observable.dim(), "sample_records");

    const SamplingPlan plan = build_plan(rho, steps);
    const std::size_t k = plan.step_count;

    MeasurementRecord record;
    record.shots = shots;
    record.outcomes.resize(shots * k);

    const std::size_t workers =
        static_cast<std::size_t>(std::min<std::uint64_t>(worker_count(), shots));
    if (workers <= 1) {
        run_shots(plan, seed, 0, shots, record.outcomes.data(), record.empirical_joint);
        return record;
    }

    std::vector<std::map<std::vector<double>, std::uint64_t>> partial(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (shots + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::uint64_t begin = w * chunk;
        const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, shots);
        if (begin >= end) break;
        pool.emplace_back([&, w, begin, end] {
            run_shots(plan, seed, begin, end, record.outcomes.data() + begin * k, partial[w]);
        });
    }
    for (std::thread& t : pool) t.join();
    for (const auto& map : partial)
        for (const auto& [key, count] : map) record.empirical_joint[key] += count;
    return record;
}

}  // namespace collapselab
