#include "collapselab/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "collapselab/errors.hpp"
#include "collapselab/rng.hpp"

namespace collapselab {

namespace {

constexpr double zero_event_tol = 1e-15;

std::vector<double> distinct_sorted(const std::vector<double>& labels) {
    std::vector<double> out(labels);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t label_index(const std::vector<double>& sorted_labels, double value) {
    const auto it = std::lower_bound(sorted_labels.begin(), sorted_labels.end(), value);
    return static_cast<std::size_t>(it - sorted_labels.begin());
}

void validate_permutation(const std::vector<std::size_t>& perm, std::size_t size,
                          const char* what) {
    if (perm.size() != size) {
        throw ValidationError(std::string(what) + ": permutation length " +
                              std::to_string(perm.size()) + " does not match space size " +
                              std::to_string(size));
    }
    std::vector<bool> seen(size, false);
    for (std::size_t target : perm) {
        if (target >= size || seen[target]) {
            throw ValidationError(std::string(what) + ": not a permutation of 0.." +
                                  std::to_string(size - 1));
        }
        seen[target] = true;
    }
}

}  // namespace

FlowSchedule::FlowSchedule(std::size_t size,
                           std::vector<std::pair<double, std::vector<std::size_t>>> schedule)
    : size_(size), schedule_(std::move(schedule)) {
    double prev = 0.0;
    for (const auto& [threshold, perm] : schedule_) {
        if (!(threshold > 0.0) || !std::isfinite(threshold)) {
            throw ValidationError("flow: thresholds must be finite and positive");
        }
        if (threshold <= prev) {
            throw ValidationError("flow: thresholds must be strictly ascending");
        }
        prev = threshold;
        validate_permutation(perm, size_, "flow");
    }
}

std::vector<std::size_t> FlowSchedule::at(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw InvalidParamsError("flow: time must be finite and >= 0");
    }
    const std::vector<std::size_t>* current = nullptr;
    for (const auto& [threshold, perm] : schedule_) {
        if (t < threshold) break;
        current = &perm;
    }
    if (current) return *current;
    std::vector<std::size_t> id(size_);
    std::iota(id.begin(), id.end(), std::size_t{0});
    return id;
}

ClassicalSystem::ClassicalSystem(std::vector<double> distribution,
                                 std::vector<double> partition_x,
                                 std::vector<double> partition_y, FlowSchedule flow)
    : distribution_(std::move(distribution)),
      partition_x_(std::move(partition_x)),
      partition_y_(std::move(partition_y)),
      flow_(std::move(flow)) {
    const std::size_t n = distribution_.size();
    if (n == 0) {
        throw ValidationError("space must have at least one point");
    }
    if (partition_x_.size() != n || partition_y_.size() != n) {
        throw ValidationError("partition labels must cover all " +
                              std::to_string(n) + " points");
    }
    if (flow_.size() != n) {
        throw ValidationError("flow size " + std::to_string(flow_.size()) +
                              " does not match space size " + std::to_string(n));
    }
    double sum = 0.0;
    for (double p : distribution_) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw ValidationError("distribution entries must be >= 0 and finite");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw ValidationError("distribution sums to " + std::to_string(sum));
    }
    for (double label : partition_x_)
        if (!std::isfinite(label))
            throw ValidationError("partition labels must be finite");
    for (double label : partition_y_)
        if (!std::isfinite(label))
            throw ValidationError("partition labels must be finite");

    x_labels_ = distinct_sorted(partition_x_);
    y_labels_ = distinct_sorted(partition_y_);
}

std::vector<std::size_t> ClassicalSystem::x_cell(std::size_t cell) const {
    if (cell >= x_labels_.size()) {
        throw IndexOutOfRangeError("x cell " + std::to_string(cell) + " out of range for " +
                                   std::to_string(x_labels_.size()) + " cells");
    }
    std::vector<std::size_t> points;
    for (std::size_t i = 0; i < partition_x_.size(); ++i)
        if (partition_x_[i] == x_labels_[cell]) points.push_back(i);
    return points;
}

std::vector<std::size_t> ClassicalSystem::y_cell(std::size_t cell) const {
    if (cell >= y_labels_.size()) {
        throw IndexOutOfRangeError("y cell " + std::to_string(cell) + " out of range for " +
                                   std::to_string(y_labels_.size()) + " cells");
    }
    std::vector<std::size_t> points;
    for (std::size_t i = 0; i < partition_y_.size(); ++i)
        if (partition_y_[i] == y_labels_[cell]) points.push_back(i);
    return points;
}

ClassicalSystem random_classical_system(std::uint64_t seed, std::size_t size,
                                        std::size_t x_cells, std::size_t y_cells) {
    if (size < 1) {
        throw InvalidParamsError("space must have at least one point");
    }
    if (x_cells < 1 || x_cells > size || y_cells < 1 || y_cells > size) {
        throw InvalidParamsError("cell counts must lie in 1.." + std::to_string(size));
    }
    SplitMix64 rng = SplitMix64::substream(seed, 0x636c617373ULL);

    // Dyadic weights k_i/units with every k_i >= 1: sums stay exact in
    // floating point, so the classical identities hold to full precision.
    std::uint64_t units = 256;
    while (units < size) units *= 2;
    std::vector<std::uint64_t> weights(size, 1);
    for (std::uint64_t u = size; u < units; ++u)
        ++weights[static_cast<std::size_t>(rng.next() % size)];
    std::vector<double> distribution(size, 0.0);
    for (std::size_t i = 0; i < size; ++i)
        distribution[i] = static_cast<double>(weights[i]) / static_cast<double>(units);

    std::vector<double> px(size, 0.0);
    std::vector<double> py(size, 0.0);
    for (std::size_t i = 0; i < size; ++i) {
        px[i] = static_cast<double>(i < x_cells ? i : rng.next() % x_cells);
        py[i] = static_cast<double>(i < y_cells ? i : rng.next() % y_cells);
    }

    std::vector<std::size_t> perm(size);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = size; i > 1; --i)
        std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng.next() % i)]);

    return ClassicalSystem(std::move(distribution), std::move(px), std::move(py),
                           FlowSchedule(size, {{1.0, std::move(perm)}}));
}

double conditional_probability(const ClassicalSystem& sys, const std::vector<std::size_t>& a,
                               const std::vector<std::size_t>& b) {
    const std::size_t n = sys.size();
    std::vector<bool> in_a(n, false);
    for (std::size_t i : a) {
        if (i >= n)
            throw IndexOutOfRangeError("set point " + std::to_string(i) +
                                       " out of range for space size " + std::to_string(n));
        in_a[i] = true;
    }
    double p_b = 0.0;
    double p_ab = 0.0;
    std::vector<bool> in_b(n, false);
    for (std::size_t i : b) {
        if (i >= n)
            throw IndexOutOfRangeError("set point " + std::to_string(i) +
                                       " out of range for space size " + std::to_string(n));
        if (in_b[i]) continue;
        in_b[i] = true;
        p_b += sys.distribution()[i];
        if (in_a[i]) p_ab += sys.distribution()[i];
    }
    if (p_b <= zero_event_tol) {
        throw ZeroConditioningError("conditioning event has probability " + std::to_string(p_b));
    }
    return p_ab / p_b;
}

namespace {

// Conditional matrix under the flowed measure: row n is the distribution of
// the second outcome given that the first measurement selected cell n. Both
// the numerators and the denominator accumulate the same terms in the same
// point order, so at the identity permutation each diagonal ratio is
// exactly 1.0 and off-diagonals are exactly 0.0.
std::vector<std::vector<double>> conditional_matrix(const ClassicalSystem& sys,
                                                    const std::vector<std::size_t>& perm) {
    const std::size_t cells_x = sys.x_labels().size();
    const std::size_t n_points = sys.size();
    std::vector<std::vector<double>> matrix(cells_x,
                                            std::vector<double>(cells_x, 0.0));
    for (std::size_t n = 0; n < cells_x; ++n) {
        double denom = 0.0;
        std::vector<double> numer(cells_x, 0.0);
        for (std::size_t i = 0; i < n_points; ++i) {
            if (sys.partition_x()[i] != sys.x_labels()[n]) continue;
            denom += sys.distribution()[i];
            const std::size_t moved = perm[i];
            const std::size_t m = label_index(sys.x_labels(), sys.partition_x()[moved]);
            numer[m] += sys.distribution()[i];
        }
        if (denom <= zero_event_tol) {
            throw ZeroConditioningError("x cell " + std::to_string(n) +
                                        " has probability " + std::to_string(denom));
        }
        for (std::size_t m = 0; m < cells_x; ++m) matrix[n][m] = numer[m] / denom;
    }
    return matrix;
}

}  // namespace

ClassicalCmoResult classical_cmo_check(const ClassicalSystem& sys,
                                       const std::vector<double>& t_grid) {
    if (t_grid.empty()) {
        throw EmptyGridError("classical_cmo_check: time grid is empty");
    }
    double prev = std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw InvalidParamsError(
                "classical_cmo_check: time grid entries must be finite and positive");
        }
        if (t >= prev) {
            throw InvalidParamsError("classical_cmo_check: time grid must be strictly descending");
        }
        prev = t;
    }

    ClassicalCmoResult result;
    result.t_grid = t_grid;
    for (double t : t_grid) result.matrices.push_back(conditional_matrix(sys, sys.flow().at(t)));
    result.limit_matrix = conditional_matrix(sys, sys.flow().at(0.0));
    return result;
}

std::vector<double> total_probability_check(const ClassicalSystem& sys) {
    const std::size_t cells_x = sys.x_labels().size();
    const std::size_t cells_y = sys.y_labels().size();
    const std::size_t n_points = sys.size();

    std::vector<double> p_y(cells_y, 0.0);
    for (std::size_t i = 0; i < n_points; ++i)
        p_y[label_index(sys.y_labels(), sys.partition_y()[i])] += sys.distribution()[i];

    std::vector<double> residual = p_y;
    for (std::size_t n = 0; n < cells_x; ++n) {
        double p_x = 0.0;
        std::vector<double> joint(cells_y, 0.0);
        for (std::size_t i = 0; i < n_points; ++i) {
            if (sys.partition_x()[i] != sys.x_labels()[n]) continue;
            p_x += sys.distribution()[i];
            joint[label_index(sys.y_labels(), sys.partition_y()[i])] += sys.distribution()[i];
        }
        if (p_x <= zero_event_tol) {
            throw ZeroConditioningError("x cell " + std::to_string(n) + " has probability " +
                                        std::to_string(p_x));
        }
        for (std::size_t m = 0; m < cells_y; ++m) residual[m] -= p_x * (joint[m] / p_x);
    }
    return residual;
}

TotalVarianceResult total_variance_check(const ClassicalSystem& sys) {
    const std::size_t cells_x = sys.x_labels().size();
    const std::size_t cells_y = sys.y_labels().size();
    const std::size_t n_points = sys.size();

    std::vector<double> p_y(cells_y, 0.0);
    for (std::size_t i = 0; i < n_points; ++i)
        p_y[label_index(sys.y_labels(), sys.partition_y()[i])] += sys.distribution()[i];
    double mean_y = 0.0;
    for (std::size_t m = 0; m < cells_y; ++m) mean_y += p_y[m] * sys.y_labels()[m];
    double var_y = 0.0;
    for (std::size_t m = 0; m < cells_y; ++m) {
        const double d = sys.y_labels()[m] - mean_y;
        var_y += p_y[m] * d * d;
    }

    double expected_cond_var = 0.0;
    double mean_cond_mean = 0.0;
    double second_cond_mean = 0.0;
    for (std::size_t n = 0; n < cells_x; ++n) {
        double p_x = 0.0;
        std::vector<double> joint(cells_y, 0.0);
        for (std::size_t i = 0; i < n_points; ++i) {
            if (sys.partition_x()[i] != sys.x_labels()[n]) continue;
            p_x += sys.distribution()[i];
            joint[label_index(sys.y_labels(), sys.partition_y()[i])] += sys.distribution()[i];
        }
        if (p_x <= zero_event_tol) {
            throw ZeroConditioningError("x cell " + std::to_string(n) + " has probability " +
                                        std::to_string(p_x));
        }
        double cond_mean = 0.0;
        for (std::size_t m = 0; m < cells_y; ++m)
            cond_mean += (joint[m] / p_x) * sys.y_labels()[m];
        double cond_var = 0.0;
        for (std::size_t m = 0; m < cells_y; ++m) {
            const double d = sys.y_labels()[m] - cond_mean;
            cond_var += (joint[m] / p_x) * d * d;
        }
        expected_cond_var += p_x * cond_var;
        mean_cond_mean += p_x * cond_mean;
        second_cond_mean += p_x * cond_mean * cond_mean;
    }
    const double var_cond_mean = second_cond_mean - mean_cond_mean * mean_cond_mean;

    TotalVarianceResult result;
    result.lhs = var_y;
    result.rhs = expected_cond_var + var_cond_mean;
    result.residual = result.lhs - result.rhs;
    return result;
}

}  // namespace collapselab
