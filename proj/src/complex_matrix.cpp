#include "collapselab/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "collapselab/errors.hpp"

namespace collapselab {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), data_(std::move(entries)) {
    if (data_.size() != dim * dim) {
        throw DimMismatchError("entry count " + std::to_string(data_.size()) +
                               " does not match dimension " + std::to_string(dim));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

cplx& ComplexMatrix::operator()(std::size_t row, std::size_t col) {
    return data_[row * dim_ + col];
}

const cplx& ComplexMatrix::operator()(std::size_t row, std::size_t col) const {
    return data_[row * dim_ + col];
}

cplx ComplexMatrix::at(std::size_t row, std::size_t col) const {
    if (row >= dim_ || col >= dim_) {
        throw IndexOutOfRangeError("matrix index (" + std::to_string(row) + ", " +
                                   std::to_string(col) + ") out of range for dimension " +
                                   std::to_string(dim_));
    }
    return (*this)(row, col);
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix result(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) result(j, i) = std::conj((*this)(i, j));
    return result;
}

cplx ComplexMatrix::trace() const {
    cplx sum = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) sum += (*this)(i, i);
    return sum;
}

double ComplexMatrix::frobenius_norm() const {
    double sum = 0.0;
    for (const cplx& v : data_) sum += std::norm(v);
    return std::sqrt(sum);
}

double ComplexMatrix::max_abs_entry() const {
    double best = 0.0;
    for (const cplx& v : data_) best = std::max(best, std::abs(v));
    return best;
}

double ComplexMatrix::hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
}

bool ComplexMatrix::is_hermitian(double rel_tol) const {
    const double scale = max_abs_entry();
    if (scale == 0.0) return true;
    return hermiticity_defect() <= rel_tol * scale;
}

void ComplexMatrix::require_same_dim(const ComplexMatrix& other) const {
    if (dim_ != other.dim_) {
        throw DimMismatchError("dimension mismatch: " + std::to_string(dim_) + " vs " +
                               std::to_string(other.dim_));
    }
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_dim(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_dim(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scalar) {
    for (cplx& v : data_) v *= scalar;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    lhs.require_same_dim(rhs);
    const std::size_t n = lhs.dim_;
    ComplexMatrix result(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx a = lhs(i, k);
            if (a == cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < n; ++j) result(i, j) += a * rhs(k, j);
        }
    }
    return result;
}

}  // namespace collapselab
