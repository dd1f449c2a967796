#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "doctest.h"

#include "collapselab/classical.hpp"
#include "collapselab/errors.hpp"
#include "collapselab/rng.hpp"
#include "oracles.hpp"

using collapselab::ClassicalSystem;
using collapselab::conditional_probability;
using collapselab::FlowSchedule;
using collapselab::random_classical_system;
using collapselab::SplitMix64;

namespace {

ClassicalSystem uniform_four() {
    return ClassicalSystem({0.25, 0.25, 0.25, 0.25}, {0.0, 0.0, 1.0, 1.0}, {0.0, 1.0, 0.0, 1.0},
                           FlowSchedule(4, {}));
}

// Six points, x cells {0,1} {2,3} {4,5}, y cells splitting even/odd, and a
// cyclic shift by one switching on at t = 1.
ClassicalSystem six_point_cycle() {
    return ClassicalSystem({0.125, 0.125, 0.25, 0.125, 0.25, 0.125},
                           {0.0, 0.0, 1.0, 1.0, 2.0, 2.0}, {0.0, 1.0, 0.0, 1.0, 0.0, 1.0},
                           FlowSchedule(6, {{1.0, {1, 2, 3, 4, 5, 0}}}));
}

}  // namespace

TEST_CASE("flow schedules are the identity before their first threshold") {
    const FlowSchedule flow(3, {{1.0, {1, 2, 0}}, {2.0, {2, 0, 1}}});
    CHECK(flow.at(0.0) == std::vector<std::size_t>{0, 1, 2});
    CHECK(flow.at(0.999) == std::vector<std::size_t>{0, 1, 2});
    CHECK(flow.at(1.0) == std::vector<std::size_t>{1, 2, 0});
    CHECK(flow.at(1.5) == std::vector<std::size_t>{1, 2, 0});
    CHECK(flow.at(2.0) == std::vector<std::size_t>{2, 0, 1});
    CHECK(flow.at(100.0) == std::vector<std::size_t>{2, 0, 1});

    CHECK_THROWS_AS(flow.at(-0.1), collapselab::InvalidParamsError);
    CHECK_THROWS_AS(FlowSchedule(3, {{1.0, {0, 0, 1}}}), collapselab::ValidationError);
    CHECK_THROWS_AS(FlowSchedule(3, {{1.0, {0, 1}}}), collapselab::ValidationError);
    CHECK_THROWS_AS(FlowSchedule(3, {{2.0, {1, 2, 0}}, {1.0, {2, 0, 1}}}),
                    collapselab::ValidationError);
    CHECK_THROWS_AS(FlowSchedule(3, {{0.0, {1, 2, 0}}}), collapselab::ValidationError);
}

TEST_CASE("classical systems validate their distribution and partitions") {
    CHECK_THROWS_AS(ClassicalSystem({0.5, 0.6}, {0, 1}, {0, 1}, FlowSchedule(2, {})),
                    collapselab::ValidationError);
    CHECK_THROWS_AS(ClassicalSystem({0.5, -0.5}, {0, 1}, {0, 1}, FlowSchedule(2, {})),
                    collapselab::ValidationError);
    CHECK_THROWS_AS(ClassicalSystem({0.5, 0.5}, {0}, {0, 1}, FlowSchedule(2, {})),
                    collapselab::ValidationError);
    CHECK_THROWS_AS(ClassicalSystem({0.5, 0.5}, {0, 1}, {0, 1}, FlowSchedule(3, {})),
                    collapselab::ValidationError);

    const ClassicalSystem sys = six_point_cycle();
    CHECK(sys.x_labels() == std::vector<double>{0.0, 1.0, 2.0});
    CHECK(sys.y_labels() == std::vector<double>{0.0, 1.0});
    CHECK(sys.x_cell(1) == std::vector<std::size_t>{2, 3});
    CHECK(sys.y_cell(0) == std::vector<std::size_t>{0, 2, 4});
}

TEST_CASE("conditional probability reduces to the ratio of masses") {
    const ClassicalSystem sys = uniform_four();
    CHECK(conditional_probability(sys, {0, 1}, {0, 1}) == 1.0);
    CHECK(conditional_probability(sys, {0, 1}, {2, 3}) == 0.0);
    CHECK(conditional_probability(sys, {0, 1}, {1, 2}) == doctest::Approx(0.5));

    CHECK_THROWS_AS(conditional_probability(sys, {0}, {}), collapselab::ZeroConditioningError);
    CHECK_THROWS_AS(conditional_probability(sys, {0}, {7}), collapselab::IndexOutOfRangeError);
}

TEST_CASE("conditioning tolerates repeated indices in the event sets") {
    const ClassicalSystem sys = uniform_four();
    CHECK(conditional_probability(sys, {0, 1}, {1, 1, 2, 2}) == doctest::Approx(0.5));
}

TEST_CASE("the frozen-flow conditional matrix is exactly the identity") {
    SplitMix64 rng(SplitMix64::substream(59, 0));
    for (int rep = 0; rep < 40; ++rep) {
        const ClassicalSystem sys = oracles::random_system(rng, 64);
        const auto result = collapselab::classical_cmo_check(sys, {0.5, 0.25});
        const std::size_t cells = sys.x_labels().size();
        for (std::size_t n = 0; n < cells; ++n) {
            for (std::size_t m = 0; m < cells; ++m) {
                CHECK(result.limit_matrix[n][m] == (n == m ? 1.0 : 0.0));
            }
        }
        // The flow only switches on at t = 1, so the grid matrices coincide.
        for (const auto& matrix : result.matrices) CHECK(matrix == result.limit_matrix);
    }
}

TEST_CASE("a cyclic shift mixes cells with hand-computed weights") {
    const ClassicalSystem sys = six_point_cycle();
    const auto result = collapselab::classical_cmo_check(sys, {2.0, 0.5});

    // At t = 0.5 the flow is still frozen.
    for (std::size_t n = 0; n < 3; ++n) {
        for (std::size_t m = 0; m < 3; ++m) {
            CHECK(result.matrices[1][n][m] == (n == m ? 1.0 : 0.0));
        }
    }

    // At t = 2 each point i has moved to i+1 mod 6. Cell {0,1} with masses
    // (1/8, 1/8) lands on points {1, 2}: mass 1/8 stays in cell 0, mass 1/8
    // crosses into cell 1, and so on around the cycle.
    const auto& moved = result.matrices[0];
    CHECK(moved[0][0] == doctest::Approx(0.5));
    CHECK(moved[0][1] == doctest::Approx(0.5));
    CHECK(moved[0][2] == doctest::Approx(0.0));
    CHECK(moved[1][0] == doctest::Approx(0.0));
    CHECK(moved[1][1] == doctest::Approx(2.0 / 3.0));
    CHECK(moved[1][2] == doctest::Approx(1.0 / 3.0));
    CHECK(moved[2][0] == doctest::Approx(1.0 / 3.0));
    CHECK(moved[2][1] == doctest::Approx(0.0));
    CHECK(moved[2][2] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("a single-cell partition conditions to the trivial matrix") {
    const ClassicalSystem sys({0.5, 0.5}, {3.0, 3.0}, {0.0, 1.0}, FlowSchedule(2, {}));
    const auto result = collapselab::classical_cmo_check(sys, {1.0});
    CHECK(result.limit_matrix == std::vector<std::vector<double>>{{1.0}});
}

TEST_CASE("the probe rejects an invalid grid") {
    const ClassicalSystem sys = uniform_four();
    CHECK_THROWS_AS(collapselab::classical_cmo_check(sys, {}), collapselab::EmptyGridError);
    CHECK_THROWS_AS(collapselab::classical_cmo_check(sys, {-1.0}),
                    collapselab::InvalidParamsError);
}

TEST_CASE("total probability holds on random systems to rounding") {
    SplitMix64 rng(SplitMix64::substream(59, 1));
    for (int rep = 0; rep < 64; ++rep) {
        const ClassicalSystem sys = oracles::random_system(rng, 64);
        for (double r : collapselab::total_probability_check(sys)) {
            CHECK(std::abs(r) < 1e-12);
        }
    }
}

TEST_CASE("total probability over identical partitions cancels exactly") {
    SplitMix64 rng(SplitMix64::substream(59, 2));
    for (int rep = 0; rep < 10; ++rep) {
        const ClassicalSystem base = oracles::random_system(rng, 32);
        const ClassicalSystem sys(base.distribution(), base.partition_x(), base.partition_x(),
                                  base.flow());
        for (double r : collapselab::total_probability_check(sys)) {
            CHECK(r == 0.0);
        }
    }
}

TEST_CASE("total variance holds on random systems to rounding") {
    SplitMix64 rng(SplitMix64::substream(59, 3));
    for (int rep = 0; rep < 64; ++rep) {
        const ClassicalSystem sys = oracles::random_system(rng, 64);
        const auto result = collapselab::total_variance_check(sys);
        CHECK(std::abs(result.residual) < 1e-12);
        CHECK(result.residual == doctest::Approx(result.lhs - result.rhs));
    }
}

TEST_CASE("both classical laws are exact zeros in rational arithmetic") {
    SplitMix64 rng(SplitMix64::substream(59, 4));
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t size = 4 + rng.next() % 9;
        oracles::ExactClassicalSystem sys;
        for (std::size_t i = 0; i < size; ++i) {
            sys.weights.push_back(1 + static_cast<long long>(rng.next() % 20));
            sys.x_labels.push_back(static_cast<long long>(rng.next() % 3));
            sys.y_labels.push_back(static_cast<long long>(rng.next() % 4) - 2);
        }
        for (const auto& r : oracles::exact_total_probability_residual(sys)) {
            CHECK(r.is_zero());
        }
        CHECK(oracles::exact_total_variance_residual(sys).is_zero());

        // The same system pushed through the floating-point pipeline.
        boost::multiprecision::cpp_int total = 0;
        for (long long w : sys.weights) total += w;
        std::vector<double> dist, px, py;
        for (std::size_t i = 0; i < size; ++i) {
            dist.push_back(static_cast<double>(sys.weights[i]) / total.convert_to<double>());
            px.push_back(static_cast<double>(sys.x_labels[i]));
            py.push_back(static_cast<double>(sys.y_labels[i]));
        }
        const double drift = 1.0 - std::accumulate(dist.begin(), dist.end(), 0.0);
        dist[0] += drift;
        const ClassicalSystem doubled(dist, px, py, FlowSchedule(size, {}));
        for (double r : collapselab::total_probability_check(doubled)) {
            CHECK(std::abs(r) < 1e-12);
        }
        CHECK(std::abs(collapselab::total_variance_check(doubled).residual) < 1e-12);
    }
}

TEST_CASE("the generator is deterministic and covers every cell") {
    const ClassicalSystem a = random_classical_system(7, 12, 3, 4);
    const ClassicalSystem b = random_classical_system(7, 12, 3, 4);
    CHECK(a.distribution() == b.distribution());
    CHECK(a.partition_x() == b.partition_x());
    CHECK(a.partition_y() == b.partition_y());
    CHECK(a.flow().schedule() == b.flow().schedule());

    CHECK(a.x_labels().size() == 3);
    CHECK(a.y_labels().size() == 4);
    double sum = 0.0;
    for (double w : a.distribution()) {
        CHECK(w > 0.0);
        sum += w;
    }
    CHECK(sum == 1.0);

    const ClassicalSystem c = random_classical_system(8, 12, 3, 4);
    CHECK(a.distribution() != c.distribution());
}

TEST_CASE("conditioning on a zero-mass cell is reported, not silently divided") {
    // Second x cell exists in the labels but carries zero probability. The
    // constructor accepts it; the checks must refuse to condition on it.
    const ClassicalSystem sys({0.5, 0.5, 0.0}, {0.0, 0.0, 1.0}, {0.0, 1.0, 1.0},
                              FlowSchedule(3, {}));
    CHECK_THROWS_AS(collapselab::total_probability_check(sys),
                    collapselab::ZeroConditioningError);
    CHECK_THROWS_AS(collapselab::classical_cmo_check(sys, {1.0}),
                    collapselab::ZeroConditioningError);
}
