#pragma once

#include <cstddef>
#include <vector>

#include "collapselab/complex_matrix.hpp"
#include "collapselab/hermitian.hpp"

namespace collapselab {

// Hermitian, PSD (within tolerance), unit-trace quantum state.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m);

    std::size_t dim() const { return matrix_.dim(); }
    const ComplexMatrix& matrix() const { return matrix_; }

    // Re tr(rho^2); 1 for pure states.
    double purity() const;

private:
    ComplexMatrix matrix_;
};

// Hermitian operator with a non-degenerate spectrum; eigenvalues are the
// outcome labels, eigenvectors the post-measurement states.
class Observable {
public:
    explicit Observable(ComplexMatrix m);

    std::size_t dim() const { return matrix_.dim(); }
    const ComplexMatrix& matrix() const { return matrix_; }
    const SpectralDecomposition& spectral() const { return spectral_; }
    const std::vector<double>& labels() const { return spectral_.values; }

    double label(std::size_t n) const;

    // Rank-one projector onto the n-th eigenvector.
    ComplexMatrix projector(std::size_t n) const;

private:
    ComplexMatrix matrix_;
    SpectralDecomposition spectral_;
};

// Probability vector over real outcome labels.
class OutcomeDistribution {
public:
    OutcomeDistribution(std::vector<double> labels, std::vector<double> probs);

    std::size_t size() const { return labels_.size(); }
    const std::vector<double>& labels() const { return labels_; }
    const std::vector<double>& probs() const { return probs_; }

    double label(std::size_t i) const;
    double prob(std::size_t i) const;

    double mean() const;
    double variance() const;

    // Inverse-CDF draw: smallest index whose cumulative probability
    // exceeds u in [0, 1).
    std::size_t sample_index(double u) const;

private:
    std::vector<double> labels_;
    std::vector<double> probs_;
};

OutcomeDistribution born_distribution(const DensityMatrix& rho, const Observable& x);

DensityMatrix collapse(const Observable& x, std::size_t n);

DensityMatrix dephase(const DensityMatrix& rho, const Observable& x);

DensityMatrix evolve(const DensityMatrix& rho, const ComplexMatrix& hamiltonian, double t);

struct CmoCollapseReport {
    double diag_deficit = 0.0;
    double max_offdiag = 0.0;
    double trace_dist_to_projector = 0.0;
    bool passes_bound = false;
};

// Checks the reconstruction argument: if the repeat-measurement probability
// is 1 - delta, positivity forces the off-diagonals of rho_prime in the
// measurement basis below sqrt(delta) and the trace distance to the
// projector below 2 sqrt(delta) + delta.
CmoCollapseReport verify_cmo_implies_collapse(const DensityMatrix& rho_prime,
                                              const Observable& x, std::size_t n, double delta);

}  // namespace collapselab
