#include "collapselab/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "collapselab/errors.hpp"
#include "collapselab/tolerances.hpp"

namespace collapselab {

double SpectralDecomposition::spectral_range() const {
    if (values.empty()) return 0.0;
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

double SpectralDecomposition::spectral_scale() const {
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    return scale;
}

double SpectralDecomposition::min_gap() const {
    if (values.size() < 2) return std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < values.size(); ++i)
        gap = std::min(gap, values[i] - values[i - 1]);
    return gap;
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
    const std::size_t n = values.size();
    ComplexMatrix scaled = vectors;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= values[j];
    return scaled * vectors.adjoint();
}

namespace {

double offdiag_norm(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) sum += std::norm(a(i, j));
    return std::sqrt(sum);
}

// One Jacobi rotation zeroing the (p, q) pivot of the Hermitian working
// matrix, accumulating the rotation into v.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cplx g = a(p, q);
    const double mag = std::abs(g);
    if (mag == 0.0) return;

    const cplx w = g / mag;
    const double alpha = a(p, p).real();
    const double beta = a(q, q).real();
    const double tau = (beta - alpha) / (2.0 * mag);

    double t;
    if (std::abs(tau) > 1e150) {
        t = 1.0 / (2.0 * tau);
    } else if (tau >= 0.0) {
        t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
    } else {
        t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    }
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    a(p, p) = alpha - t * mag;
    a(q, q) = beta + t * mag;
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    const std::size_t n = a.dim();
    for (std::size_t k = 0; k < n; ++k) {
        if (k == p || k == q) continue;
        const cplx akp = a(k, p);
        const cplx akq = a(k, q);
        a(k, p) = akp * (w * c) - akq * s;
        a(k, q) = akp * (w * s) + akq * c;
        a(p, k) = std::conj(a(k, p));
        a(q, k) = std::conj(a(k, q));
    }
    for (std::size_t k = 0; k < n; ++k) {
        const cplx vkp = v(k, p);
        const cplx vkq = v(k, q);
        v(k, p) = vkp * (w * c) - vkq * s;
        v(k, q) = vkp * (w * s) + vkq * c;
    }
}

// Sort eigenvalues ascending, permute columns to match, and fix each
// column's global phase: largest-magnitude component real positive, lowest
// row index breaking ties.
void canonicalize(SpectralDecomposition& dec) {
    const std::size_t n = dec.values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return dec.values[i] < dec.values[j]; });

    std::vector<double> sorted_values(n);
    ComplexMatrix sorted_vectors(n);
    for (std::size_t j = 0; j < n; ++j) {
        sorted_values[j] = dec.values[order[j]];
        for (std::size_t i = 0; i < n; ++i) sorted_vectors(i, j) = dec.vectors(i, order[j]);
    }

    for (std::size_t j = 0; j < n; ++j) {
        std::size_t anchor = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::abs(sorted_vectors(i, j));
            if (m > best) {
                best = m;
                anchor = i;
            }
        }
        if (best <= 0.0) continue;
        const cplx phase = std::conj(sorted_vectors(anchor, j)) / best;
        for (std::size_t i = 0; i < n; ++i) sorted_vectors(i, j) *= phase;
        sorted_vectors(anchor, j) = best;
    }

    dec.values = std::move(sorted_values);
    dec.vectors = std::move(sorted_vectors);
}

}  // namespace

SpectralDecomposition eigh(const ComplexMatrix& m) {
    if (!m.is_hermitian(tol::hermitian)) {
        throw NotHermitianError("matrix fails hermitian check: defect " +
                                std::to_string(m.hermiticity_defect()) + " exceeds " +
                                std::to_string(tol::hermitian) + " * max entry");
    }

    const std::size_t n = m.dim();
    SpectralDecomposition dec;
    dec.values.assign(n, 0.0);
    dec.vectors = ComplexMatrix::identity(n);
    if (n == 0) return dec;
    if (n == 1) {
        dec.values[0] = m(0, 0).real();
        return dec;
    }

    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    const double total_norm = a.frobenius_norm();
    const double target = tol::jacobi_off * total_norm;
    const std::size_t max_sweeps = 100 * n * n;

    bool converged = (total_norm == 0.0) || (offdiag_norm(a) <= target);
    for (std::size_t sweep = 0; !converged && sweep < max_sweeps; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(a, dec.vectors, p, q);
        converged = offdiag_norm(a) <= target;
    }
    if (!converged) {
        throw NoConvergenceError("jacobi eigensolver did not converge within " +
                                 std::to_string(max_sweeps) + " sweeps for dimension " +
                                 std::to_string(n));
    }

    for (std::size_t i = 0; i < n; ++i) dec.values[i] = a(i, i).real();
    canonicalize(dec);
    return dec;
}

ComplexMatrix unitary_exp(const ComplexMatrix& hamiltonian, double t) {
    const SpectralDecomposition dec = eigh(hamiltonian);
    const std::size_t n = dec.dim();
    ComplexMatrix scaled = dec.vectors;
    for (std::size_t j = 0; j < n; ++j) {
        const cplx phase = std::exp(cplx{0.0, -dec.values[j] * t});
        for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= phase;
    }
    return scaled * dec.vectors.adjoint();
}

double trace_norm(const ComplexMatrix& m) {
    const SpectralDecomposition dec = eigh(m);
    double sum = 0.0;
    for (double v : dec.values) sum += std::abs(v);
    return sum;
}

}  // namespace collapselab
