#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mwk::numerics {

/// Row-major dense real matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> data() const noexcept { return data_; }

    double max_abs() const noexcept;
    DenseMatrix transposed() const;

    /// Submatrix keeping the listed rows and columns, in the given order.
    DenseMatrix select(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
    friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Determinant by partial-pivoted Gaussian elimination. Singular input gives 0;
/// the empty matrix gives 1. Throws DomainError for non-square input.
double det(const DenseMatrix& m);

struct LduFactors {
    DenseMatrix lower;              // unit lower triangular
    std::vector<double> diagonal;   // pivots D_kk
    DenseMatrix upper;              // unit upper triangular
};

/// Unpivoted factorization M = L * diag(D) * U. Throws DegeneracyError naming
/// the first k with |D_kk| <= pivot_tol * max|M_ij|.
LduFactors ldu_biorthogonalize(const DenseMatrix& m, double pivot_tol = 1e-12);

/// Eigenvalues of a real symmetric matrix, ascending. Rejects (DomainError)
/// input whose asymmetry exceeds 1e-12 * max|M_ij|.
std::vector<double> sym_eigenvalues(const DenseMatrix& m);

}  // namespace mwk::numerics
