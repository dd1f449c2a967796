#pragma once

#include <complex>
#include <cstddef>
#include <optional>

#include "collapselab/complex_matrix.hpp"
#include "collapselab/quantum.hpp"

namespace collapselab {

// Qubit family: state [[1-p, c*gamma], [c*conj(gamma), p]] with
// c = sqrt(p(1-p)), first observable diag(-1, 1), second observable at
// angles (theta, phi).
struct QubitParams {
    double p = 0.5;
    cplx gamma{0.0, 0.0};
    double theta = 0.0;
    double phi = 0.0;
};

DensityMatrix qubit_state(const QubitParams& params);
Observable qubit_observable_x();
Observable qubit_observable_y(double theta, double phi);

// cos(theta) diag(-1,1) + sin(theta) offdiag(e^{-i phi}, e^{i phi}),
// expressed in the eigenbasis of x; raw matrix form for building the
// Observable.
ComplexMatrix rotated_observable_matrix(const Observable& x, double theta, double phi);

struct VarianceGapResult {
    double lhs = 0.0;  // variance after the first measurement (dephased route)
    double rhs = 0.0;  // variance of the direct measurement
    double gap = 0.0;  // lhs - rhs; nonzero certifies coherence
};

VarianceGapResult variance_gap(const DensityMatrix& rho, const Observable& x,
                               const Observable& y);

double trace_distance_to_dephased(const DensityMatrix& rho, const Observable& x);

struct VariationalOptions {
    std::size_t phi_points = 181;
    std::size_t theta_points = 91;
    double refine_tol = 1e-6;
};

struct VariationalResult {
    double value = 0.0;
    double phi_star = 0.0;
    double theta_star = 0.0;
};

// Grid search plus golden-section refinement of
// max_{phi, theta} sum_y |P(y) - P'(y)| over qubit observables, in the
// eigenbasis of x. Qubits only.
VariationalResult variational_trace_distance(const DensityMatrix& rho, const Observable& x,
                                             const VariationalOptions& options = {});

// True iff all off-diagonals of rho in x's eigenbasis are <= tol.
bool is_incoherent(const DensityMatrix& rho, const Observable& x, double tol);

struct QubitOracleValues {
    double p_direct_plus = 0.0;
    double p_direct_minus = 0.0;
    double p_post_plus = 0.0;
    double p_post_minus = 0.0;
    double residual = 0.0;
    double trace_distance = 0.0;
    double variance_gap_at_optimum = 0.0;
};

// Closed forms for the qubit family; the reference every pipeline result is
// checked against.
QubitOracleValues qubit_oracle(const QubitParams& params);

struct CoherenceReport {
    double variance_lhs = 0.0;
    double variance_rhs = 0.0;
    double variance_gap = 0.0;
    double trace_distance = 0.0;
    double max_total_prob_violation = 0.0;
    bool incoherent = false;
    double tolerance_used = 0.0;
};

inline constexpr double default_gap_threshold = 1e-8;

// Full audit: trace distance (spectral), maximal total-probability
// violation (variational for qubits, the supplied y otherwise), and the
// variance gap. y is optional for qubits (the variational argmax observable
// is used); required for d > 2.
CoherenceReport certify_coherence(const DensityMatrix& rho, const Observable& x,
                                  const std::optional<Observable>& y = {},
                                  double tol = default_gap_threshold,
                                  const VariationalOptions& options = {});

}  // namespace collapselab
