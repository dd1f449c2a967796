#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace collapselab {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major, value semantics.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<cplx> entries);

    static ComplexMatrix identity(std::size_t dim);

    std::size_t dim() const { return dim_; }

    cplx& operator()(std::size_t row, std::size_t col);
    const cplx& operator()(std::size_t row, std::size_t col) const;

    // Checked element access.
    cplx at(std::size_t row, std::size_t col) const;

    ComplexMatrix adjoint() const;
    cplx trace() const;
    double frobenius_norm() const;
    double max_abs_entry() const;

    // Largest |a_ij - conj(a_ji)| over all pairs.
    double hermiticity_defect() const;
    bool is_hermitian(double rel_tol) const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx scalar);

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
        lhs += rhs;
        return lhs;
    }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
        lhs -= rhs;
        return lhs;
    }
    friend ComplexMatrix operator*(cplx scalar, ComplexMatrix m) {
        m *= scalar;
        return m;
    }
    friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

    const std::vector<cplx>& data() const { return data_; }

private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;

    void require_same_dim(const ComplexMatrix& other) const;
};

}  // namespace collapselab
