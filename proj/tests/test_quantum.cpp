#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "doctest.h"

#include "collapselab/coherence.hpp"
#include "collapselab/complex_matrix.hpp"
#include "collapselab/errors.hpp"
#include "collapselab/quantum.hpp"
#include "collapselab/rng.hpp"
#include "collapselab/tolerances.hpp"
#include "oracles.hpp"

using collapselab::born_distribution;
using collapselab::collapse;
using collapselab::ComplexMatrix;
using collapselab::cplx;
using collapselab::DensityMatrix;
using collapselab::dephase;
using collapselab::evolve;
using collapselab::Observable;
using collapselab::OutcomeDistribution;
using collapselab::SplitMix64;

namespace {

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double worst = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r) {
        for (std::size_t c = 0; c < a.dim(); ++c) {
            worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
        }
    }
    return worst;
}

DensityMatrix qubit(double p, cplx gamma) {
    return collapselab::qubit_state({p, gamma, 0.0, 0.0});
}

}  // namespace

TEST_CASE("density matrix constructor enforces state axioms") {
    CHECK_THROWS_AS(DensityMatrix(ComplexMatrix(2, {cplx(1, 0), cplx(1, 0), cplx(0, 0),
                                                    cplx(0, 0)})),
                    collapselab::NotHermitianError);

    CHECK_THROWS_WITH_AS(
        DensityMatrix(ComplexMatrix(2, {cplx(0.5, 0), cplx(0, 0), cplx(0, 0), cplx(0.4, 0)})),
        doctest::Contains("trace"), collapselab::ValidationError);

    // Hermitian and unit trace but indefinite.
    CHECK_THROWS_WITH_AS(
        DensityMatrix(ComplexMatrix(2, {cplx(1.1, 0), cplx(0, 0), cplx(0, 0), cplx(-0.1, 0)})),
        doctest::Contains("eigenvalue"), collapselab::ValidationError);

    const DensityMatrix pure(ComplexMatrix(2, {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(0, 0)}));
    CHECK(pure.purity() == doctest::Approx(1.0));

    const DensityMatrix mixed(
        ComplexMatrix(2, {cplx(0.5, 0), cplx(0, 0), cplx(0, 0), cplx(0.5, 0)}));
    CHECK(mixed.purity() == doctest::Approx(0.5));
}

TEST_CASE("observable rejects a nearly degenerate spectrum") {
    CHECK_THROWS_WITH_AS(
        Observable(ComplexMatrix(2, {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(1 + 1e-12, 0)})),
        doctest::Contains("degenerate observable"), collapselab::ValidationError);

    const Observable x(ComplexMatrix(2, {cplx(-1, 0), cplx(0, 0), cplx(0, 0), cplx(1, 0)}));
    CHECK(x.label(0) == -1.0);
    CHECK(x.label(1) == 1.0);
    CHECK_THROWS_AS(x.label(2), collapselab::IndexOutOfRangeError);
    CHECK_THROWS_AS(x.projector(2), collapselab::IndexOutOfRangeError);

    const ComplexMatrix p1 = x.projector(1);
    CHECK(p1(1, 1) == cplx(1, 0));
    CHECK(max_abs_diff(p1 * p1, p1) < 1e-15);
}

TEST_CASE("outcome distribution validates, clamps, and summarizes") {
    CHECK_THROWS_AS(OutcomeDistribution({-1.0, 1.0}, {0.5}), collapselab::DimMismatchError);
    CHECK_THROWS_AS(OutcomeDistribution({-1.0, 1.0}, {0.6, 0.6}), collapselab::ValidationError);
    CHECK_THROWS_AS(OutcomeDistribution({-1.0, 1.0}, {1.1, -0.1}), collapselab::ValidationError);
    CHECK_THROWS_AS(OutcomeDistribution({}, {}), collapselab::ValidationError);

    // A tiny negative from rounding is treated as zero.
    const OutcomeDistribution clamped({-1.0, 1.0}, {1.0 + 1e-13, -1e-13});
    CHECK(clamped.prob(1) == 0.0);
    CHECK(clamped.prob(0) == doctest::Approx(1.0));

    const OutcomeDistribution d({-1.0, 1.0}, {0.25, 0.75});
    CHECK(d.mean() == doctest::Approx(0.5));
    CHECK(d.variance() == doctest::Approx(1.0 - 0.25));
    CHECK(d.sample_index(0.0) == 0);
    CHECK(d.sample_index(0.2) == 0);
    CHECK(d.sample_index(0.3) == 1);
    CHECK(d.sample_index(0.999999) == 1);
}

TEST_CASE("born rule on the qubit family returns p at the +1 outcome") {
    const Observable x = collapselab::qubit_observable_x();
    for (double p : {0.0, 0.25, 0.5, 0.9}) {
        const auto dist = born_distribution(qubit(p, cplx(0.3, 0.4)), x);
        CHECK(dist.label(1) == 1.0);
        CHECK(std::abs(dist.prob(1) - p) < 1e-12);
        CHECK(dist.prob(0) == doctest::Approx(1.0 - p));
    }
}

TEST_CASE("born rule on the maximally mixed state is uniform") {
    SplitMix64 rng(SplitMix64::substream(31, 0));
    for (std::size_t dim : {2ul, 3ul, 5ul}) {
        ComplexMatrix m = ComplexMatrix::identity(dim);
        m *= 1.0 / static_cast<double>(dim);
        const auto dist = born_distribution(DensityMatrix(m), oracles::random_observable(rng, dim));
        for (std::size_t i = 0; i < dim; ++i) {
            CHECK(dist.prob(i) == doctest::Approx(1.0 / static_cast<double>(dim)));
        }
    }
}

TEST_CASE("born rule matches the explicit contraction on random states") {
    SplitMix64 rng(SplitMix64::substream(31, 1));
    for (int rep = 0; rep < 25; ++rep) {
        const DensityMatrix rho = oracles::random_density(rng, 4);
        const Observable x = oracles::random_observable(rng, 4);
        const auto dist = born_distribution(rho, x);
        double sum = 0.0;
        for (std::size_t n = 0; n < 4; ++n) {
            const double expected =
                oracles::contraction_probability(rho.matrix(), x.spectral().vectors, n);
            CHECK(std::abs(dist.prob(n) - expected) < 1e-13);
            sum += dist.prob(n);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("born rule rejects mismatched dimensions") {
    SplitMix64 rng(SplitMix64::substream(31, 2));
    CHECK_THROWS_AS(born_distribution(oracles::random_density(rng, 3),
                                      collapselab::qubit_observable_x()),
                    collapselab::DimMismatchError);
}

TEST_CASE("collapse onto a diagonal observable is exact") {
    const Observable x = collapselab::qubit_observable_x();
    const DensityMatrix after = collapse(x, 1);
    CHECK(after.matrix()(0, 0) == cplx(0, 0));
    CHECK(after.matrix()(0, 1) == cplx(0, 0));
    CHECK(after.matrix()(1, 0) == cplx(0, 0));
    CHECK(after.matrix()(1, 1) == cplx(1, 0));
}

TEST_CASE("collapse onto a rotated observable spreads coherently") {
    const Observable y = collapselab::qubit_observable_y(M_PI / 2.0, 0.0);
    const DensityMatrix after = collapse(y, 1);
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            CHECK(std::abs(after.matrix()(r, c) - cplx(0.5, 0)) < 1e-12);
        }
    }
}

TEST_CASE("collapse always produces a pure projector state") {
    SplitMix64 rng(SplitMix64::substream(31, 3));
    for (std::size_t dim = 2; dim <= 5; ++dim) {
        const Observable x = oracles::random_observable(rng, dim);
        for (std::size_t n = 0; n < dim; ++n) {
            const DensityMatrix after = collapse(x, n);
            CHECK(after.purity() == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(max_abs_diff(after.matrix() * after.matrix(), after.matrix()) < 1e-12);
        }
        CHECK_THROWS_AS(collapse(x, dim), collapselab::IndexOutOfRangeError);
    }
}

TEST_CASE("dephasing a qubit keeps the populations and kills the coherences") {
    const Observable x = collapselab::qubit_observable_x();
    const DensityMatrix sigma = dephase(qubit(0.3, cplx(0.8, -0.2)), x);
    CHECK(sigma.matrix()(0, 0).real() == doctest::Approx(0.7));
    CHECK(sigma.matrix()(1, 1).real() == doctest::Approx(0.3));
    CHECK(std::abs(sigma.matrix()(0, 1)) < 1e-15);
    CHECK(std::abs(sigma.matrix()(1, 0)) < 1e-15);
}

TEST_CASE("dephasing fixes states diagonal in the measurement basis") {
    const Observable x = collapselab::qubit_observable_x();
    const DensityMatrix diag = qubit(0.3, cplx(0, 0));
    CHECK(max_abs_diff(dephase(diag, x).matrix(), diag.matrix()) < 1e-15);
}

TEST_CASE("dephasing matches the projector-sum route on random states") {
    SplitMix64 rng(SplitMix64::substream(31, 4));
    for (int rep = 0; rep < 25; ++rep) {
        const DensityMatrix rho = oracles::random_density(rng, 4);
        const Observable x = oracles::random_observable(rng, 4);
        const ComplexMatrix expected =
            oracles::projector_sum_dephase(rho.matrix(), x.spectral().vectors);
        CHECK(max_abs_diff(dephase(rho, x).matrix(), expected) < 1e-12);
    }
}

TEST_CASE("dephasing is idempotent and preserves the diagonal") {
    SplitMix64 rng(SplitMix64::substream(31, 5));
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t dim = 2 + rep % 4;
        const DensityMatrix rho = oracles::random_density(rng, dim);
        const Observable x = oracles::random_observable(rng, dim);
        const DensityMatrix once = dephase(rho, x);
        const DensityMatrix twice = dephase(once, x);
        CHECK(max_abs_diff(once.matrix(), twice.matrix()) < 1e-12);

        const auto before = born_distribution(rho, x);
        const auto after = born_distribution(once, x);
        for (std::size_t n = 0; n < dim; ++n) {
            CHECK(std::abs(before.prob(n) - after.prob(n)) < 1e-12);
        }
    }
}

TEST_CASE("evolution at t = 0 returns the state unchanged") {
    SplitMix64 rng(SplitMix64::substream(31, 6));
    const DensityMatrix rho = oracles::random_density(rng, 3);
    const ComplexMatrix h = oracles::random_hermitian(rng, 3);
    CHECK(max_abs_diff(evolve(rho, h, 0.0).matrix(), rho.matrix()) < 1e-14);
}

TEST_CASE("evolution under a commuting hamiltonian fixes the state") {
    const DensityMatrix rho(
        ComplexMatrix(2, {cplx(0.7, 0), cplx(0, 0), cplx(0, 0), cplx(0.3, 0)}));
    const ComplexMatrix h(2, {cplx(0.4, 0), cplx(0, 0), cplx(0, 0), cplx(1.9, 0)});
    CHECK(max_abs_diff(evolve(rho, h, 2.5).matrix(), rho.matrix()) < 1e-12);
}

TEST_CASE("evolution agrees with the truncated series") {
    SplitMix64 rng(SplitMix64::substream(31, 7));
    const ComplexMatrix h(2, {cplx(0, 0), cplx(1, 0), cplx(1, 0), cplx(0, 0)});
    for (int rep = 0; rep < 10; ++rep) {
        const DensityMatrix rho = oracles::random_density(rng, 2);
        const ComplexMatrix u = oracles::taylor_unitary(h, 0.3, 16);
        const ComplexMatrix expected = u * rho.matrix() * u.adjoint();
        CHECK(max_abs_diff(evolve(rho, h, 0.3).matrix(), expected) < 1e-9);
    }
}

TEST_CASE("evolution preserves purity") {
    SplitMix64 rng(SplitMix64::substream(31, 8));
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t dim = 2 + rep % 4;
        const DensityMatrix rho = oracles::random_density(rng, dim);
        const ComplexMatrix h = oracles::random_hermitian(rng, dim);
        const DensityMatrix moved = evolve(rho, h, 1.3);
        CHECK(std::abs(moved.purity() - rho.purity()) < 1e-9);
    }
}

TEST_CASE("evolution rejects a non-finite time") {
    SplitMix64 rng(SplitMix64::substream(31, 9));
    const DensityMatrix rho = oracles::random_density(rng, 2);
    const ComplexMatrix h = oracles::random_hermitian(rng, 2);
    CHECK_THROWS_AS(evolve(rho, h, std::nan("")), collapselab::InvalidParamsError);
}

TEST_CASE("a state already collapsed passes the reconstruction check exactly") {
    const Observable x = collapselab::qubit_observable_x();
    const auto report = collapselab::verify_cmo_implies_collapse(collapse(x, 1), x, 1, 0.0);
    CHECK(report.diag_deficit < 1e-14);
    CHECK(report.max_offdiag < 1e-14);
    CHECK(report.trace_dist_to_projector < 1e-12);
    CHECK(report.passes_bound);
}

TEST_CASE("a maximally mixed state fails the zero-deficit bound") {
    const Observable x = collapselab::qubit_observable_x();
    const DensityMatrix mixed(
        ComplexMatrix(2, {cplx(0.5, 0), cplx(0, 0), cplx(0, 0), cplx(0.5, 0)}));
    const auto strict = collapselab::verify_cmo_implies_collapse(mixed, x, 1, 0.0);
    CHECK(strict.diag_deficit == doctest::Approx(0.5));
    CHECK_FALSE(strict.passes_bound);

    // With the deficit declared, the positivity bound is satisfied.
    const auto declared = collapselab::verify_cmo_implies_collapse(mixed, x, 1, 0.5);
    CHECK(declared.trace_dist_to_projector == doctest::Approx(1.0));
    CHECK(declared.passes_bound);
}

TEST_CASE("small-deficit states sit within the positivity envelope") {
    SplitMix64 rng(SplitMix64::substream(31, 10));
    const double delta = 1e-6;
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t dim = 2 + rep % 3;
        const Observable x = oracles::random_observable(rng, dim);
        const std::size_t n = rng.next() % dim;

        // Mix the target projector with a random state at weight <= delta.
        const double eps = delta * rng.next_double();
        ComplexMatrix m = collapse(x, n).matrix();
        m *= (1.0 - eps);
        ComplexMatrix noise = oracles::random_density(rng, dim).matrix();
        noise *= eps;
        m += noise;
        const DensityMatrix rho_prime{m};

        const auto report = collapselab::verify_cmo_implies_collapse(rho_prime, x, n, delta);
        CHECK(report.diag_deficit <= delta * (1.0 + 1e-9));
        CHECK(report.max_offdiag <= std::sqrt(delta));
        CHECK(report.trace_dist_to_projector <= 2.0 * std::sqrt(delta) + delta);
        CHECK(report.passes_bound);
    }
}

TEST_CASE("the reconstruction check rejects a negative deficit") {
    const Observable x = collapselab::qubit_observable_x();
    CHECK_THROWS_AS(collapselab::verify_cmo_implies_collapse(collapse(x, 0), x, 0, -1e-3),
                    collapselab::InvalidParamsError);
}
