#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "collapselab/complex_matrix.hpp"
#include "collapselab/quantum.hpp"

namespace collapselab {

// One measurement in a sequence: optional unitary evolution during the
// waiting period, then a projective measurement of the observable.
struct MeasurementStep {
    Observable observable;
    double wait_before = 0.0;
    std::optional<ComplexMatrix> hamiltonian;

    MeasurementStep(Observable obs, double wait, std::optional<ComplexMatrix> h);
    explicit MeasurementStep(Observable obs) : MeasurementStep(std::move(obs), 0.0, {}) {}
};

struct MeasurementRecord {
    struct Event {
        std::size_t step;
        double label;
    };

    // Shot-major: shot s occupies outcomes[s*k .. (s+1)*k) for k steps.
    std::vector<Event> outcomes;
    std::map<std::vector<double>, std::uint64_t> empirical_joint;
    std::uint64_t shots = 0;

    // Empirical marginal of one step's outcome labels.
    std::map<double, double> marginal(std::size_t step, std::size_t step_count) const;
};

// P'(y_m | x_n) = |<y_m|x_n>|^2.
OutcomeDistribution conditional_second_distribution(const Observable& x, const Observable& y,
                                                    std::size_t n);

// P'(y_m) = sum_n P(x_n) P'(y_m|x_n): distribution of the second
// measurement after a first, unrecorded measurement of x.
OutcomeDistribution post_measurement_distribution(const DensityMatrix& rho, const Observable& x,
                                                  const Observable& y);

// P(y_m) = <y_m|rho|y_m>: distribution of y without the first measurement.
OutcomeDistribution direct_distribution(const DensityMatrix& rho, const Observable& y);

// residual[m] = P(y_m) - P'(y_m); nonzero only in the presence of coherence
// between non-commuting measurements.
std::vector<double> total_probability_residual(const DensityMatrix& rho, const Observable& x,
                                               const Observable& y);

struct CmoProbeResult {
    std::vector<double> t_grid;
    // matrices[i][n][m] = P^(t_i)(x_m | x_n); each row over m is normalized.
    std::vector<std::vector<std::vector<double>>> matrices;
    // exponents[n][m]: least-squares log-log slope of entry (n, m) over the
    // grid; NaN on the diagonal and where fewer than two points survive the
    // noise floor.
    std::vector<std::vector<double>> exponents;
};

// Repeat-measurement conditionals P^(t)(x_m|x_n) = |<x_m|e^{-iHt}|x_n>|^2
// over a descending time grid, with power-law fits of the off-diagonal
// decay. rho fixes the dimension context of the scenario.
CmoProbeResult cmo_limit_probe(const DensityMatrix& rho, const Observable& x,
                               const ComplexMatrix& hamiltonian,
                               const std::vector<double>& t_grid);

// Seeded Monte Carlo of the evolve/measure/collapse cycle. Deterministic in
// (seed, shots, steps) and independent of worker count.
MeasurementRecord sample_records(const DensityMatrix& rho,
                                 const std::vector<MeasurementStep>& steps, std::uint64_t seed,
                                 std::uint64_t shots);

}  // namespace collapselab
