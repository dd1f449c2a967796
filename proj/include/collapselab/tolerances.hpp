#pragma once

namespace collapselab {
namespace tol {

// Hermitian symmetry check, relative to the largest entry magnitude.
inline constexpr double hermitian = 1e-10;

// Unitarity check, Frobenius norm of U U^dag - I.
inline constexpr double unitary = 1e-10;

// Spectral reconstruction check, relative Frobenius norm.
inline constexpr double reconstruct = 1e-9;

// Degenerate-spectrum guard, scaled by the spectral magnitude max|lambda_i|.
inline constexpr double degeneracy = 1e-8;

// Trace-one check for density matrices.
inline constexpr double trace_one = 1e-10;

// Positive-semidefiniteness slack on eigenvalues.
inline constexpr double psd = 1e-10;

// Probability vectors: per-entry clamp window and sum-to-one check.
inline constexpr double prob_entry = 1e-12;
inline constexpr double prob_sum = 1e-10;

// Jacobi sweep termination, relative off-diagonal Frobenius norm.
inline constexpr double jacobi_off = 1e-14;

}  // namespace tol
}  // namespace collapselab
