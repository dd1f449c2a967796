#include "collapselab/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "collapselab/errors.hpp"
#include "collapselab/hermitian.hpp"
#include "collapselab/protocols.hpp"
#include "collapselab/tolerances.hpp"

namespace collapselab {

namespace {

constexpr double pi = 3.14159265358979323846;

void validate_params(const QubitParams& params) {
    if (!(params.p >= 0.0 && params.p <= 1.0)) {
        throw InvalidParamsError("qubit params: p must lie in [0, 1]");
    }
    if (!(std::abs(params.gamma) <= 1.0 + 1e-12)) {
        throw InvalidParamsError("qubit params: |gamma| must be <= 1");
    }
    if (!std::isfinite(params.theta) || !std::isfinite(params.phi)) {
        throw InvalidParamsError("qubit params: angles must be finite");
    }
}

void require_matching_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimMismatchError(std::string(what) + ": dimensions " + std::to_string(a) +
                               " and " + std::to_string(b) + " differ");
    }
}

}  // namespace

DensityMatrix qubit_state(const QubitParams& params) {
    validate_params(params);
    const double c = std::sqrt(params.p * (1.0 - params.p));
    ComplexMatrix m(2);
    m(0, 0) = 1.0 - params.p;
    m(0, 1) = c * params.gamma;
    m(1, 0) = c * std::conj(params.gamma);
    m(1, 1) = params.p;
    return DensityMatrix(std::move(m));
}

Observable qubit_observable_x() {
    ComplexMatrix m(2);
    m(0, 0) = -1.0;
    m(1, 1) = 1.0;
    return Observable(std::move(m));
}

Observable qubit_observable_y(double theta, double phi) {
    ComplexMatrix m(2);
    m(0, 0) = -std::cos(theta);
    m(1, 1) = std::cos(theta);
    m(0, 1) = std::sin(theta) * std::exp(cplx{0.0, -phi});
    m(1, 0) = std::sin(theta) * std::exp(cplx{0.0, phi});
    return Observable(std::move(m));
}

ComplexMatrix rotated_observable_matrix(const Observable& x, double theta, double phi) {
    if (x.dim() != 2) {
        throw UnsupportedDimensionError("rotated observable: defined for qubits only, got d = " +
                                        std::to_string(x.dim()));
    }
    const ComplexMatrix& v = x.spectral().vectors;
    ComplexMatrix core(2);
    core(0, 0) = -std::cos(theta);
    core(1, 1) = std::cos(theta);
    core(0, 1) = std::sin(theta) * std::exp(cplx{0.0, -phi});
    core(1, 0) = std::sin(theta) * std::exp(cplx{0.0, phi});
    return v * core * v.adjoint();
}

VarianceGapResult variance_gap(const DensityMatrix& rho, const Observable& x,
                               const Observable& y) {
    require_matching_dim(rho.dim(), x.dim(), "variance_gap");
    require_matching_dim(x.dim(), y.dim(), "variance_gap");
    const std::size_t d = rho.dim();

    const OutcomeDistribution first = born_distribution(rho, x);
    double expected_cond_var = 0.0;
    double mean_cond_mean = 0.0;
    double second_cond_mean = 0.0;
    for (std::size_t n = 0; n < d; ++n) {
        const OutcomeDistribution cond = conditional_second_distribution(x, y, n);
        const double mean = cond.mean();
        expected_cond_var += first.prob(n) * cond.variance();
        mean_cond_mean += first.prob(n) * mean;
        second_cond_mean += first.prob(n) * mean * mean;
    }
    const double lhs = expected_cond_var + (second_cond_mean - mean_cond_mean * mean_cond_mean);

    // Bridge check: the conditional decomposition must equal the variance
    // of y on the dephased state.
    const DensityMatrix sigma = dephase(rho, x);
    const ComplexMatrix& ym = y.matrix();
    const double sigma_mean = (sigma.matrix() * ym).trace().real();
    const double sigma_second = (sigma.matrix() * ym * ym).trace().real();
    const double sigma_var = sigma_second - sigma_mean * sigma_mean;
    if (std::abs(lhs - sigma_var) > 1e-10) {
        throw Error("variance_gap: conditional decomposition " + std::to_string(lhs) +
                    " disagrees with dephased-state variance " + std::to_string(sigma_var));
    }

    VarianceGapResult result;
    result.lhs = lhs;
    result.rhs = direct_distribution(rho, y).variance();
    result.gap = result.lhs - result.rhs;
    return result;
}

double trace_distance_to_dephased(const DensityMatrix& rho, const Observable& x) {
    require_matching_dim(rho.dim(), x.dim(), "trace_distance_to_dephased");
    // The difference of two Hermitian matrices is Hermitian; symmetrize so
    // that a near-zero difference survives the relative symmetry check.
    ComplexMatrix diff = rho.matrix() - dephase(rho, x).matrix();
    diff += diff.adjoint();
    diff *= 0.5;
    return trace_norm(diff);
}

namespace {

// Objective of the variational search at a single observable orientation,
// evaluated from Born probabilities via the +/- spectral projectors
// (I +/- M)/2; no eigensolver involved, keeping this route independent of
// the spectral trace-norm formula.
class ViolationObjective {
public:
    ViolationObjective(const DensityMatrix& rho, const Observable& x) {
        const ComplexMatrix& v = x.spectral().vectors;
        const ComplexMatrix in_basis = v.adjoint() * rho.matrix() * v;
        diag_gap_ = in_basis(1, 1).real() - in_basis(0, 0).real();
        offdiag_ = in_basis(0, 1);
    }

    double operator()(double theta, double phi) const {
        // tr(rho M) for M = cos(theta) diag(-1,1) + sin(theta) offdiag(e^{-+i phi}).
        const cplx offphase = std::exp(cplx{0.0, phi});
        const double rho_expect = std::cos(theta) * diag_gap_ +
                                  2.0 * std::sin(theta) * (offdiag_ * offphase).real();
        const double sigma_expect = std::cos(theta) * diag_gap_;
        const double p_plus = 0.5 * (1.0 + rho_expect);
        const double q_plus = 0.5 * (1.0 + sigma_expect);
        return std::abs(p_plus - q_plus) + std::abs((1.0 - p_plus) - (1.0 - q_plus));
    }

private:
    double diag_gap_ = 0.0;
    cplx offdiag_{0.0, 0.0};
};

// Golden-section maximization over [lo, hi], tolerance on the argument.
double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol,
                  double& best_arg) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if (fc > fd) {
        best_arg = c;
        return fc;
    }
    best_arg = d;
    return fd;
}

}  // namespace

VariationalResult variational_trace_distance(const DensityMatrix& rho, const Observable& x,
                                             const VariationalOptions& options) {
    require_matching_dim(rho.dim(), x.dim(), "variational_trace_distance");
    if (rho.dim() != 2) {
        throw UnsupportedDimensionError(
            "variational_trace_distance: defined for qubits only, got d = " +
            std::to_string(rho.dim()));
    }
    if (options.phi_points < 2 || options.theta_points < 2) {
        throw InvalidParamsError("variational_trace_distance: need at least 2 grid points");
    }

    const ViolationObjective objective(rho, x);
    const double phi_step = 2.0 * pi / static_cast<double>(options.phi_points);
    const double theta_step = pi / static_cast<double>(options.theta_points - 1);

    VariationalResult best;
    best.value = -1.0;
    for (std::size_t j = 0; j < options.theta_points; ++j) {
        const double theta = static_cast<double>(j) * theta_step;
        for (std::size_t k = 0; k < options.phi_points; ++k) {
            const double phi = static_cast<double>(k) * phi_step;
            const double value = objective(theta, phi);
            if (value > best.value) {
                best.value = value;
                best.theta_star = theta;
                best.phi_star = phi;
            }
        }
    }

    double refined_theta = best.theta_star;
    const double theta_lo = std::max(0.0, best.theta_star - theta_step);
    const double theta_hi = std::min(pi, best.theta_star + theta_step);
    const double theta_value = golden_max(
        [&](double theta) { return objective(theta, best.phi_star); }, theta_lo, theta_hi,
        options.refine_tol, refined_theta);
    if (theta_value > best.value) {
        best.value = theta_value;
        best.theta_star = refined_theta;
    }

    double refined_phi = best.phi_star;
    const double phi_value = golden_max(
        [&](double phi) { return objective(best.theta_star, phi); },
        best.phi_star - phi_step, best.phi_star + phi_step, options.refine_tol, refined_phi);
    if (phi_value > best.value) {
        best.value = phi_value;
        best.phi_star = std::fmod(refined_phi + 2.0 * pi, 2.0 * pi);
    }
    return best;
}

bool is_incoherent(const DensityMatrix& rho, const Observable& x, double tol) {
    require_matching_dim(rho.dim(), x.dim(), "is_incoherent");
    if (!(tol >= 0.0)) {
        throw InvalidParamsError("is_incoherent: tolerance must be >= 0");
    }
    const ComplexMatrix& v = x.spectral().vectors;
    const ComplexMatrix in_basis = v.adjoint() * rho.matrix() * v;
    for (std::size_t i = 0; i < in_basis.dim(); ++i)
        for (std::size_t j = 0; j < in_basis.dim(); ++j)
            if (i != j && std::abs(in_basis(i, j)) > tol) return false;
    return true;
}

QubitOracleValues qubit_oracle(const QubitParams& params) {
    validate_params(params);
    const double c = std::sqrt(params.p * (1.0 - params.p));
    const double interference =
        (params.gamma * std::exp(cplx{0.0, params.phi})).real() * c * std::sin(params.theta);
    const double bias = (2.0 * params.p - 1.0) * std::cos(params.theta);

    QubitOracleValues values;
    values.p_post_plus = 0.5 * (1.0 + bias);
    values.p_post_minus = 0.5 * (1.0 - bias);
    values.p_direct_plus = values.p_post_plus + interference;
    values.p_direct_minus = values.p_post_minus - interference;
    values.residual = interference;
    values.trace_distance = 2.0 * std::abs(params.gamma) * c;
    values.variance_gap_at_optimum = 4.0 * std::norm(params.gamma) * params.p * (1.0 - params.p);
    return values;
}

CoherenceReport certify_coherence(const DensityMatrix& rho, const Observable& x,
                                  const std::optional<Observable>& y, double tol,
                                  const VariationalOptions& options) {
    require_matching_dim(rho.dim(), x.dim(), "certify_coherence");
    if (!(tol >= 0.0)) {
        throw InvalidParamsError("certify_coherence: tolerance must be >= 0");
    }

    CoherenceReport report;
    report.tolerance_used = tol;
    report.trace_distance = trace_distance_to_dephased(rho, x);

    std::optional<Observable> second = y;
    if (rho.dim() == 2) {
        const VariationalResult var = variational_trace_distance(rho, x, options);
        report.max_total_prob_violation = var.value;
        if (!second.has_value()) {
            second.emplace(rotated_observable_matrix(x, var.theta_star, var.phi_star));
        }
    } else {
        if (!second.has_value()) {
            throw ValidationError(
                "certify_coherence: a second observable is required for d > 2");
        }
        const std::vector<double> residual = total_probability_residual(rho, x, *second);
        double sum = 0.0;
        for (double r : residual) sum += std::abs(r);
        report.max_total_prob_violation = sum;
    }

    const VarianceGapResult gap = variance_gap(rho, x, *second);
    report.variance_lhs = gap.lhs;
    report.variance_rhs = gap.rhs;
    report.variance_gap = gap.gap;

    report.incoherent = std::abs(report.variance_gap) <= tol && report.trace_distance <= tol &&
                        report.max_total_prob_violation <= tol;
    return report;
}

}  // namespace collapselab
