#include "mwk/dense.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "mwk/errors.hpp"

namespace mwk::numerics {

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DomainError("DenseMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double DenseMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix DenseMatrix::select(std::span<const std::size_t> rows,
                                std::span<const std::size_t> cols) const {
    DenseMatrix s(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
    return s;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("DenseMatrix: shape mismatch in product");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
        throw DomainError("DenseMatrix: shape mismatch in difference");
    }
    DenseMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
    return c;
}

double det(const DenseMatrix& m) {
    if (!m.square()) throw DomainError("det: matrix must be square");
    const std::size_t n = m.rows();
    DenseMatrix a = m;
    double d = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (a(p, k) == 0.0) return 0.0;
        if (p != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(p, j));
            d = -d;
        }
        const double pivot = a(k, k);
        d *= pivot;
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / pivot;
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return d;
}

LduFactors ldu_biorthogonalize(const DenseMatrix& m, double pivot_tol) {
    if (!m.square()) throw DomainError("ldu_biorthogonalize: matrix must be square");
    const std::size_t n = m.rows();
    LduFactors f{DenseMatrix::identity(n), std::vector<double>(n, 0.0), DenseMatrix::identity(n)};
    const double threshold = pivot_tol * m.max_abs();
    auto& L = f.lower;
    auto& U = f.upper;
    auto& D = f.diagonal;
    for (std::size_t k = 0; k < n; ++k) {
        double dk = m(k, k);
        for (std::size_t j = 0; j < k; ++j) dk -= L(k, j) * D[j] * U(j, k);
        if (!(std::abs(dk) > threshold)) {
            std::ostringstream os;
            os << "degenerate pairing: leading minor of order " << (k + 1)
               << " vanishes (pivot " << k << " = " << dk << ", tolerance " << threshold << ")";
            throw DegeneracyError(os.str(), k);
        }
        D[k] = dk;
        for (std::size_t i = k + 1; i < n; ++i) {
            double u = m(k, i);
            double l = m(i, k);
            for (std::size_t j = 0; j < k; ++j) {
                u -= L(k, j) * D[j] * U(j, i);
                l -= L(i, j) * D[j] * U(j, k);
            }
            U(k, i) = u / dk;
            L(i, k) = l / dk;
        }
    }
    return f;
}

std::vector<double> sym_eigenvalues(const DenseMatrix& m) {
    if (!m.square()) throw DomainError("sym_eigenvalues: matrix must be square");
    const std::size_t n = m.rows();
    const double tol = 1e-12 * m.max_abs();
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > tol) {
                throw DomainError("sym_eigenvalues: matrix is not symmetric");
            }
            a(i, j) = m(i, j);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("sym_eigenvalues: eigensolver failed to converge");
    }
    const auto& ev = solver.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace mwk::numerics
