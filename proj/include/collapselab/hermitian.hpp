#pragma once

#include <vector>

#include "collapselab/complex_matrix.hpp"

namespace collapselab {

// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending;
// eigenvectors are the columns of `vectors`, unit norm, phase fixed so the
// largest-magnitude component of each column is real and positive (lowest
// row index wins magnitude ties).
struct SpectralDecomposition {
    std::vector<double> values;
    ComplexMatrix vectors;

    std::size_t dim() const { return values.size(); }

    // lambda_max - lambda_min.
    double spectral_range() const;

    // max |lambda_i|.
    double spectral_scale() const;

    // Smallest gap between adjacent sorted eigenvalues.
    double min_gap() const;

    // Sum_i values[i] * v_i v_i^dag; should reproduce the input.
    ComplexMatrix reconstruct() const;
};

// Cyclic complex Jacobi diagonalization. Throws NotHermitianError if the
// input fails the symmetry check, NoConvergenceError if the off-diagonal
// mass does not shrink below tolerance within 100 * dim^2 sweeps.
SpectralDecomposition eigh(const ComplexMatrix& m);

// exp(-i * H * t) for Hermitian H, via the spectral decomposition.
ComplexMatrix unitary_exp(const ComplexMatrix& hamiltonian, double t);

// Sum of singular values; for Hermitian input this is sum |lambda_i|.
double trace_norm(const ComplexMatrix& m);

}  // namespace collapselab
