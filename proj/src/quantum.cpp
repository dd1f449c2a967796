#include "collapselab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "collapselab/errors.hpp"
#include "collapselab/tolerances.hpp"

namespace collapselab {

namespace {

void require_matching_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimMismatchError(std::string(what) + ": dimensions " + std::to_string(a) +
                               " and " + std::to_string(b) + " differ");
    }
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {
    if (matrix_.dim() == 0) {
        throw ValidationError("state dimension must be at least 1");
    }
    if (!matrix_.is_hermitian(tol::hermitian)) {
        throw NotHermitianError("state matrix fails hermitian check, defect " +
                                std::to_string(matrix_.hermiticity_defect()));
    }
    const double trace_dev = std::abs(matrix_.trace() - cplx{1.0, 0.0});
    if (trace_dev > tol::trace_one) {
        throw ValidationError("state trace deviates from 1 by " + std::to_string(trace_dev));
    }
    const SpectralDecomposition dec = eigh(matrix_);
    if (dec.values.front() < -tol::psd) {
        throw ValidationError("state has negative eigenvalue " +
                              std::to_string(dec.values.front()) + " below -" +
                              std::to_string(tol::psd));
    }
}

double DensityMatrix::purity() const {
    return (matrix_ * matrix_).trace().real();
}

Observable::Observable(ComplexMatrix m) : matrix_(std::move(m)) {
    if (matrix_.dim() == 0) {
        throw ValidationError("observable dimension must be at least 1");
    }
    if (!matrix_.is_hermitian(tol::hermitian)) {
        throw NotHermitianError("observable matrix fails hermitian check, defect " +
                                std::to_string(matrix_.hermiticity_defect()));
    }
    spectral_ = eigh(matrix_);
    if (spectral_.min_gap() <= tol::degeneracy * spectral_.spectral_scale()) {
        throw ValidationError("degenerate observable: smallest eigenvalue gap " +
                              std::to_string(spectral_.min_gap()) + " within " +
                              std::to_string(tol::degeneracy) + " of the spectral scale");
    }
}

double Observable::label(std::size_t n) const {
    if (n >= dim()) {
        throw IndexOutOfRangeError("observable outcome index " + std::to_string(n) +
                                   " out of range for dimension " + std::to_string(dim()));
    }
    return spectral_.values[n];
}

ComplexMatrix Observable::projector(std::size_t n) const {
    if (n >= dim()) {
        throw IndexOutOfRangeError("observable outcome index " + std::to_string(n) +
                                   " out of range for dimension " + std::to_string(dim()));
    }
    const std::size_t d = dim();
    ComplexMatrix proj(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            proj(i, j) = spectral_.vectors(i, n) * std::conj(spectral_.vectors(j, n));
    return proj;
}

OutcomeDistribution::OutcomeDistribution(std::vector<double> labels, std::vector<double> probs)
    : labels_(std::move(labels)), probs_(std::move(probs)) {
    if (labels_.size() != probs_.size()) {
        throw DimMismatchError("distribution: " + std::to_string(labels_.size()) +
                               " labels vs " + std::to_string(probs_.size()) + " probabilities");
    }
    if (labels_.empty()) {
        throw ValidationError("distribution: must have at least one outcome");
    }
    double sum = 0.0;
    for (double& p : probs_) {
        if (p < -tol::prob_entry) {
            throw ValidationError("distribution: probability " + std::to_string(p) +
                                  " below -" + std::to_string(tol::prob_entry));
        }
        if (p < 0.0) p = 0.0;
        sum += p;
    }
    if (std::abs(sum - 1.0) > tol::prob_sum) {
        throw ValidationError("distribution: probabilities sum to " + std::to_string(sum));
    }
    for (double& p : probs_) p /= sum;
}

double OutcomeDistribution::label(std::size_t i) const {
    if (i >= labels_.size()) {
        throw IndexOutOfRangeError("distribution index " + std::to_string(i) +
                                   " out of range for size " + std::to_string(labels_.size()));
    }
    return labels_[i];
}

double OutcomeDistribution::prob(std::size_t i) const {
    if (i >= probs_.size()) {
        throw IndexOutOfRangeError("distribution index " + std::to_string(i) +
                                   " out of range for size " + std::to_string(probs_.size()));
    }
    return probs_[i];
}

double OutcomeDistribution::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < labels_.size(); ++i) m += probs_[i] * labels_[i];
    return m;
}

double OutcomeDistribution::variance() const {
    const double m = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        const double d = labels_[i] - m;
        v += probs_[i] * d * d;
    }
    return v;
}

std::size_t OutcomeDistribution::sample_index(double u) const {
    double cum = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        cum += probs_[i];
        if (u < cum) return i;
    }
    return probs_.size() - 1;
}

OutcomeDistribution born_distribution(const DensityMatrix& rho, const Observable& x) {
    require_matching_dim(rho.dim(), x.dim(), "born_distribution");
    const std::size_t d = rho.dim();
    const ComplexMatrix& v = x.spectral().vectors;
    std::vector<double> probs(d, 0.0);
    for (std::size_t n = 0; n < d; ++n) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            cplx row = 0.0;
            for (std::size_t j = 0; j < d; ++j) row += rho.matrix()(i, j) * v(j, n);
            acc += std::conj(v(i, n)) * row;
        }
        probs[n] = acc.real();
    }
    return OutcomeDistribution(x.labels(), std::move(probs));
}

DensityMatrix collapse(const Observable& x, std::size_t n) {
    return DensityMatrix(x.projector(n));
}

DensityMatrix dephase(const DensityMatrix& rho, const Observable& x) {
    require_matching_dim(rho.dim(), x.dim(), "dephase");
    const std::size_t d = rho.dim();
    const ComplexMatrix& v = x.spectral().vectors;

    // Raw diagonal weights <x_n|rho|x_n>; kept unclipped so that tiny
    // negative eigenvalues within tolerance survive the round trip.
    std::vector<double> weights(d, 0.0);
    for (std::size_t n = 0; n < d; ++n) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            cplx row = 0.0;
            for (std::size_t j = 0; j < d; ++j) row += rho.matrix()(i, j) * v(j, n);
            acc += std::conj(v(i, n)) * row;
        }
        weights[n] = acc.real();
    }

    ComplexMatrix sigma(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            cplx acc = 0.0;
            for (std::size_t n = 0; n < d; ++n)
                acc += weights[n] * v(i, n) * std::conj(v(j, n));
            sigma(i, j) = acc;
        }
    return DensityMatrix(std::move(sigma));
}

DensityMatrix evolve(const DensityMatrix& rho, const ComplexMatrix& hamiltonian, double t) {
    require_matching_dim(rho.dim(), hamiltonian.dim(), "evolve");
    if (!std::isfinite(t)) {
        throw InvalidParamsError("evolve: time must be finite");
    }
    const ComplexMatrix u = unitary_exp(hamiltonian, t);
    return DensityMatrix(u * rho.matrix() * u.adjoint());
}

CmoCollapseReport verify_cmo_implies_collapse(const DensityMatrix& rho_prime,
                                              const Observable& x, std::size_t n, double delta) {
    require_matching_dim(rho_prime.dim(), x.dim(), "verify_cmo_implies_collapse");
    if (n >= x.dim()) {
        throw IndexOutOfRangeError("outcome index " + std::to_string(n) +
                                   " out of range for dimension " + std::to_string(x.dim()));
    }
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw InvalidParamsError("verify_cmo_implies_collapse: delta must be finite and >= 0");
    }

    const std::size_t d = x.dim();
    const ComplexMatrix& v = x.spectral().vectors;
    const ComplexMatrix in_basis = v.adjoint() * rho_prime.matrix() * v;

    CmoCollapseReport report;
    report.diag_deficit = 1.0 - in_basis(n, n).real();
    for (std::size_t k = 0; k < d; ++k) {
        if (k == n) continue;
        report.max_offdiag = std::max(report.max_offdiag, std::abs(in_basis(n, k)));
    }
    ComplexMatrix diff = rho_prime.matrix() - x.projector(n);
    diff += diff.adjoint();
    diff *= 0.5;
    report.trace_dist_to_projector = trace_norm(diff);

    const double root = std::sqrt(delta);
    report.passes_bound = report.diag_deficit <= delta && report.max_offdiag <= root &&
                          report.trace_dist_to_projector <= 2.0 * root + delta;
    return report;
}

}  // namespace collapselab
