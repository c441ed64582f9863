#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "walkmult/matrix.hpp"

namespace walkmult {

using Vector = std::vector<double>;

template <Scalar T>
std::vector<Matrix<T>> power_sequence(const Matrix<T>& m, std::size_t k_max) {
    if (!m.is_square()) throw std::invalid_argument("power_sequence: matrix is not square");
    std::vector<Matrix<T>> out;
    out.reserve(k_max + 1);
    out.push_back(Matrix<T>::identity(m.rows()));
    for (std::size_t k = 1; k <= k_max; ++k) out.push_back(out.back() * m);
    return out;
}

/// Characteristic polynomial det(x I - M), highest degree first: {1, c_1, ..., c_N}.
///
/// Exact matrices use the Faddeev-LeVerrier recurrence (the divisions by k are
/// exact over the rationals). Symmetric floating matrices expand the product
/// of (x - lambda_i) over eigenvalues; other floating matrices fall back to
/// the recurrence in double precision.
template <Scalar T>
std::vector<T> char_poly(const Matrix<T>& m);

namespace detail {

template <Scalar T>
std::vector<T> faddeev_leverrier(const Matrix<T>& a) {
    const std::size_t n = a.rows();
    std::vector<T> coeff(n + 1, T(0));
    coeff[0] = T(1);
    Matrix<T> mk(n, n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{k-1} I ; c_k = -tr(A M_k) / k
        Matrix<T> next = a * mk;
        for (std::size_t i = 0; i < n; ++i) next(i, i) += coeff[k - 1];
        mk = std::move(next);
        const Matrix<T> amk = a * mk;
        coeff[k] = -amk.trace() / T(static_cast<int>(k));
    }
    return coeff;
}

inline std::vector<double> poly_from_roots(const std::vector<double>& roots) {
    std::vector<double> c{1.0};
    for (double r : roots) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];
            next[i + 1] -= r * c[i];
        }
        c = std::move(next);
    }
    return c;
}

inline Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

inline Matrix<double> from_eigen(const Eigen::MatrixXd& e) {
    Matrix<double> m(e.rows(), e.cols());
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
    return m;
}

}  // namespace detail

template <Scalar T>
std::vector<T> char_poly(const Matrix<T>& m) {
    if (!m.is_square()) throw std::invalid_argument("char_poly: matrix is not square");
    if (m.rows() == 0) return {T(1)};
    if constexpr (scalar_traits<T>::exact) {
        return detail::faddeev_leverrier(m);
    } else {
        if (!m.is_symmetric()) return detail::faddeev_leverrier(m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::to_eigen(m), Eigen::EigenvaluesOnly);
        std::vector<double> roots(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        return detail::poly_from_roots(roots);
    }
}

/// Reduced row echelon form computed in place; returns pivot columns.
/// Exact for rationals; floats use partial pivoting with an absolute threshold.
template <Scalar T>
std::vector<std::size_t> rref_in_place(Matrix<T>& a, double float_threshold = 0.0) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
        std::size_t p = a.rows();
        if constexpr (scalar_traits<T>::exact) {
            for (std::size_t i = r; i < a.rows(); ++i)
                if (!a(i, col).is_zero()) {
                    p = i;
                    break;
                }
        } else {
            double best = float_threshold;
            for (std::size_t i = r; i < a.rows(); ++i)
                if (std::abs(a(i, col)) > best) {
                    best = std::abs(a(i, col));
                    p = i;
                }
        }
        if (p == a.rows()) {
            if constexpr (!scalar_traits<T>::exact)
                for (std::size_t i = r; i < a.rows(); ++i) a(i, col) = 0.0;
            continue;
        }
        if (p != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
        const T inv = T(1) / a(r, col);
        for (std::size_t j = col; j < a.cols(); ++j) a(r, j) = a(r, j) * inv;
        a(r, col) = T(1);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || is_zero_exact(a(i, col))) continue;
            const T f = a(i, col);
            for (std::size_t j = col; j < a.cols(); ++j) {
                if (is_zero_exact(a(r, j))) continue;
                a(i, j) -= f * a(r, j);
            }
            a(i, col) = T(0);
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

namespace detail {

// Fraction-free (Bareiss) forward elimination on an integer-valued matrix.
// Returns pivot columns; rows [0, pivots.size()) hold the echelon form.
inline std::vector<std::size_t> bareiss_echelon(Matrix<Rational>& a) {
    std::vector<std::size_t> pivots;
    Rational prev(1);
    std::size_t r = 0;
    for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
        std::size_t p = r;
        while (p < a.rows() && a(p, col).is_zero()) ++p;
        if (p == a.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
        const Rational piv = a(r, col);
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            const Rational f = a(i, col);
            for (std::size_t j = col + 1; j < a.cols(); ++j) {
                a(i, j) = (piv * a(i, j) - f * a(r, j)) / prev;
            }
            a(i, col) = Rational(0);
        }
        prev = piv;
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

inline Matrix<Rational> clear_row_denominators(const Matrix<Rational>& m) {
    Matrix<Rational> a = m;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_integer()) {
                const mpz_class d = a(i, j).to_mpq().get_den();
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
            }
        if (l == 1) continue;
        const Rational scale{mpq_class(l)};
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = a(i, j) * scale;
    }
    return a;
}

template <Scalar T>
std::vector<std::vector<T>> basis_from_rref(const Matrix<T>& r, const std::vector<std::size_t>& pivots) {
    const std::size_t n = r.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<T>> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<T> v(n, T(0));
        v[f] = T(1);
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace detail

/// Brings a list of linearly independent vectors to canonical form: the
/// matrix with these vectors as columns is in reduced column echelon form
/// (each vector's first nonzero entry is 1, leading positions increase, and
/// every other vector vanishes at each leading position).
template <Scalar T>
std::vector<std::vector<T>> canonical_basis(const std::vector<std::vector<T>>& vectors, double float_threshold = 0.0) {
    if (vectors.empty()) return {};
    Matrix<T> rows = Matrix<T>::from_rows(vectors);
    const auto pivots = rref_in_place(rows, float_threshold);
    std::vector<std::vector<T>> out;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        auto r = rows.row(i);
        out.emplace_back(r.begin(), r.end());
    }
    return out;
}

/// Right null space basis in canonical form (see canonical_basis()).
/// Exact matrices: fraction-free elimination, exact result.
/// Floating matrices: SVD with rank cutoff tol_zero * sigma_max.
template <Scalar T>
std::vector<std::vector<T>> null_space_basis(const Matrix<T>& m, const Tolerance& tol = {}) {
    const std::size_t n = m.cols();
    if (n == 0) return {};
    if constexpr (scalar_traits<T>::exact) {
        if (m.rows() == 0) {
            std::vector<std::vector<T>> id;
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<T> e(n, T(0));
                e[i] = T(1);
                id.push_back(std::move(e));
            }
            return id;
        }
        Matrix<Rational> a = detail::clear_row_denominators(m);
        const auto pivots = detail::bareiss_echelon(a);
        if (pivots.size() == n) return {};
        Matrix<Rational> echelon(pivots.size(), n);
        for (std::size_t i = 0; i < pivots.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) echelon(i, j) = a(i, j);
        const auto rp = rref_in_place(echelon);
        return canonical_basis(detail::basis_from_rref(echelon, rp));
    } else {
        if (m.rows() == 0) {
            std::vector<std::vector<double>> id;
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<double> e(n, 0.0);
                e[i] = 1.0;
                id.push_back(std::move(e));
            }
            return id;
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(m), Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        const double smax = s.size() > 0 ? s(0) : 0.0;
        std::size_t rank = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > tol.tol_zero * smax && s(i) > 0) ++rank;
        const Eigen::MatrixXd& v = svd.matrixV();
        std::vector<std::vector<double>> basis;
        for (std::size_t c = rank; c < n; ++c) {
            std::vector<double> col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = v(i, c);
            basis.push_back(std::move(col));
        }
        auto canon = canonical_basis(basis, tol.tol_zero);
        for (auto& vec : canon)
            for (auto& x : vec)
                if (std::abs(x) <= tol.tol_zero) x = 0.0;
        return canon;
    }
}

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    Matrix<double> vectors;      // column j is the eigenvector of values[j]
};

template <Scalar T>
SymmetricEigen symmetric_eigen(const Matrix<T>& m, const Tolerance& tol = {}) {
    if (!m.is_square()) throw std::invalid_argument("symmetric_eigen: matrix is not square");
    const Matrix<double> d = to_double_matrix(m);
    if (!d.is_symmetric(tol))
        throw std::invalid_argument("symmetric_eigen: matrix violates symmetry beyond tol_sym");
    if (d.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::to_eigen(d));
    if (es.info() != Eigen::Success) throw std::runtime_error("symmetric_eigen: solver did not converge");
    SymmetricEigen out;
    out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    out.vectors = detail::from_eigen(es.eigenvectors());
    return out;
}

inline double spectral_radius(const SymmetricEigen& e) {
    double r = 0;
    for (double x : e.values) r = std::max(r, std::abs(x));
    return r;
}

inline double cluster_width(const SymmetricEigen& e, const Tolerance& tol) {
    return tol.tol_eig_cluster * spectral_radius(e);
}

/// Groups ascending eigenvalues into runs whose consecutive gaps stay within
/// tol_eig_cluster * spectral radius.
inline std::vector<std::vector<std::size_t>> eigenvalue_clusters(const SymmetricEigen& e, const Tolerance& tol = {}) {
    std::vector<std::vector<std::size_t>> out;
    const double width = cluster_width(e, tol);
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        if (out.empty() || e.values[i] - e.values[out.back().back()] > width)
            out.push_back({i});
        else
            out.back().push_back(i);
    }
    return out;
}

/// Orthogonal projector onto the span of the eigenvectors in `cluster`.
inline Matrix<double> eigenspace_projector(const SymmetricEigen& e, const std::vector<std::size_t>& cluster,
                                           const Tolerance& tol = {}) {
    if (cluster.empty()) throw std::invalid_argument("eigenspace_projector: empty cluster");
    const double width = cluster_width(e, tol);
    double lo = e.values.at(cluster.front()), hi = lo;
    for (auto idx : cluster) {
        lo = std::min(lo, e.values.at(idx));
        hi = std::max(hi, e.values.at(idx));
    }
    // a chain of small gaps may legitimately span more than one width
    if (hi - lo > width * static_cast<double>(cluster.size()))
        throw std::invalid_argument("eigenspace_projector: cluster mixes separated eigenvalues");
    const std::size_t n = e.vectors.rows();
    Matrix<double> p(n, n);
    for (auto idx : cluster)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p(i, j) += e.vectors(i, idx) * e.vectors(j, idx);
    return p;
}

}  // namespace walkmult
