#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace collapselab {

// Piecewise-constant permutation schedule: identity below the first
// threshold, then the permutation of the last threshold <= t. flow(0) is
// always the identity.
class FlowSchedule {
public:
    FlowSchedule() = default;
    explicit FlowSchedule(std::size_t size,
                          std::vector<std::pair<double, std::vector<std::size_t>>> schedule);

    std::size_t size() const { return size_; }
    const std::vector<std::pair<double, std::vector<std::size_t>>>& schedule() const {
        return schedule_;
    }

    // Permutation at time t: point i moves to permutation[i].
    std::vector<std::size_t> at(double t) const;

private:
    std::size_t size_ = 0;
    std::vector<std::pair<double, std::vector<std::size_t>>> schedule_;
};

// Finite configuration space with a probability distribution, two outcome
// partitions (by real label), and a deterministic flow.
class ClassicalSystem {
public:
    ClassicalSystem(std::vector<double> distribution, std::vector<double> partition_x,
                    std::vector<double> partition_y, FlowSchedule flow);

    std::size_t size() const { return distribution_.size(); }
    const std::vector<double>& distribution() const { return distribution_; }
    const std::vector<double>& partition_x() const { return partition_x_; }
    const std::vector<double>& partition_y() const { return partition_y_; }
    const FlowSchedule& flow() const { return flow_; }

    // Distinct labels, ascending.
    const std::vector<double>& x_labels() const { return x_labels_; }
    const std::vector<double>& y_labels() const { return y_labels_; }

    // Point indices carrying the given label.
    std::vector<std::size_t> x_cell(std::size_t cell) const;
    std::vector<std::size_t> y_cell(std::size_t cell) const;

private:
    std::vector<double> distribution_;
    std::vector<double> partition_x_;
    std::vector<double> partition_y_;
    FlowSchedule flow_;
    std::vector<double> x_labels_;
    std::vector<double> y_labels_;
};

// Deterministic generator: dyadic distribution (multiples of 1/256, every
// point positive), integer cell labels with every cell populated, and a
// random permutation flow switching on at t = 1.
ClassicalSystem random_classical_system(std::uint64_t seed, std::size_t size,
                                        std::size_t x_cells, std::size_t y_cells);

// P(A|B) = P(A and B) / P(B) over point-index sets.
double conditional_probability(const ClassicalSystem& sys, const std::vector<std::size_t>& a,
                               const std::vector<std::size_t>& b);

struct ClassicalCmoResult {
    std::vector<double> t_grid;
    // matrices[i][n][m] = P(X_m | X_n evolved to time t_i).
    std::vector<std::vector<std::vector<double>>> matrices;
    // Matrix at t = 0; exactly the identity by the flow(0) = id premise.
    std::vector<std::vector<double>> limit_matrix;
};

ClassicalCmoResult classical_cmo_check(const ClassicalSystem& sys,
                                       const std::vector<double>& t_grid);

// residual[m] = P(Y_m) - sum_n P(X_n) P(Y_m|X_n); zero for every valid
// system up to rounding.
std::vector<double> total_probability_check(const ClassicalSystem& sys);

struct TotalVarianceResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
};

// lhs = V[Y]; rhs = E[V[Y|X]] + V[E[Y|X]].
TotalVarianceResult total_variance_check(const ClassicalSystem& sys);

}  // namespace collapselab
