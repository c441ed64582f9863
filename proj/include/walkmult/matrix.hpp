#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "walkmult/scalar.hpp"

namespace walkmult {

/// Dense row-major matrix over an exact or floating scalar.
template <Scalar T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
        if (rows.empty()) return {};
        Matrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_) throw std::invalid_argument("Matrix::from_rows: ragged rows");
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    [[nodiscard]] std::vector<T> column(std::size_t j) const {
        std::vector<T> c;
        c.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
        return c;
    }

    [[nodiscard]] Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    template <Scalar U, class F>
    [[nodiscard]] Matrix<U> map(F&& f) const {
        Matrix<U> out(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(i, j) = f((*this)(i, j));
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b);
        Matrix c = a;
        for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
        return c;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b);
        Matrix c = a;
        for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
        return c;
    }

    friend Matrix operator*(const T& s, const Matrix& a) {
        Matrix c = a;
        for (auto& x : c.data_) x = s * x;
        return c;
    }

    // i-k-j order; zero entries of the left factor are skipped, which matters
    // for sparse adjacency matrices in exact arithmetic.
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("Matrix product: inner dimensions differ (" + std::to_string(a.cols_) +
                                        " vs " + std::to_string(b.rows_) + ")");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (is_zero_exact(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const T& bkj = b(k, j);
                    if (is_zero_exact(bkj)) continue;
                    c(i, j) += aik * bkj;
                }
            }
        return c;
    }

    [[nodiscard]] std::vector<T> operator*(std::span<const T> v) const {
        if (v.size() != cols_) throw std::invalid_argument("Matrix-vector product: size mismatch");
        std::vector<T> out(rows_, T(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            T acc(0);
            for (std::size_t j = 0; j < cols_; ++j) {
                const T& a = (*this)(i, j);
                if (is_zero_exact(a) || is_zero_exact(v[j])) continue;
                acc += a * v[j];
            }
            out[i] = std::move(acc);
        }
        return out;
    }

    [[nodiscard]] T trace() const {
        if (!is_square()) throw std::invalid_argument("trace of non-square matrix");
        T t(0);
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    /// Maximum absolute row sum, as double.
    [[nodiscard]] double norm_inf() const {
        double best = 0;
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0;
            for (std::size_t j = 0; j < cols_; ++j) s += std::abs(scalar_traits<T>::to_double((*this)(i, j)));
            best = std::max(best, s);
        }
        return best;
    }

    /// Largest absolute entry, as double.
    [[nodiscard]] double max_abs() const {
        double best = 0;
        for (const auto& x : data_) best = std::max(best, std::abs(scalar_traits<T>::to_double(x)));
        return best;
    }

    /// Exact symmetry for rationals; |a_ij - a_ji| <= tol_sym * max(1, max|a|) for floats.
    [[nodiscard]] bool is_symmetric(const Tolerance& tol = {}) const {
        if (!is_square()) return false;
        const double scale = scalar_traits<T>::exact ? 0.0 : std::max(1.0, max_abs());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j) {
                if constexpr (scalar_traits<T>::exact) {
                    if (!((*this)(i, j) == (*this)(j, i))) return false;
                } else {
                    if (std::abs((*this)(i, j) - (*this)(j, i)) > tol.tol_sym * scale) return false;
                }
            }
        return true;
    }

    [[nodiscard]] const std::vector<T>& data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;

    static void check_same_shape(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix: shape mismatch");
    }
};

template <Scalar T>
Matrix<double> to_double_matrix(const Matrix<T>& m) {
    return m.template map<double>([](const T& x) { return scalar_traits<T>::to_double(x); });
}

template <Scalar T>
T dot(std::span<const T> a, std::span<const T> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    T acc(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (is_zero_exact(a[i]) || is_zero_exact(b[i])) continue;
        acc += a[i] * b[i];
    }
    return acc;
}

}  // namespace walkmult
