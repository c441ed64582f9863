#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "walkmult/cospectral.hpp"
#include "walkmult/linalg.hpp"
#include "walkmult/multiplets.hpp"

namespace walkmult {

/// A required certificate (e.g. cospectrality of the requested pair, or a
/// required eigenvector zero) does not hold.
class CertificateFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class VectorParity { even, odd, zero };

inline std::string vector_parity_name(VectorParity p) {
    switch (p) {
        case VectorParity::even: return "even";
        case VectorParity::odd: return "odd";
        default: return "zero";
    }
}

struct EigenCluster {
    double value = 0.0;  // mean of the clustered eigenvalues
    std::size_t multiplicity = 0;
    std::vector<std::size_t> vectors;  // indices into ParityEigenbasis::vectors
    bool indeterminate = false;        // a projection norm fell in the ambiguous band
};

/// Orthonormal eigenbasis in which every eigenvalue cluster contributes at
/// most one even vector (phi_u = phi_v != 0), at most one odd vector
/// (phi_u = -phi_v != 0), and otherwise vectors vanishing on u and v.
struct ParityEigenbasis {
    VertexPair pair;
    std::size_t n = 0;
    std::vector<double> values;               // per vector
    std::vector<std::vector<double>> vectors;  // per vector, length n
    std::vector<VectorParity> tags;
    std::vector<EigenCluster> clusters;
    double orthonormality_residual = 0.0;     // max |V^T V - I|
};

namespace detail {

inline double norm2(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

inline void scale_in_place(std::vector<double>& x, double f) {
    for (double& v : x) v *= f;
}

// Deterministic sign: first component with magnitude above tol is positive.
inline void fix_sign(std::vector<double>& x, double tol) {
    for (double v : x)
        if (std::abs(v) > tol) {
            if (v < 0) scale_in_place(x, -1.0);
            return;
        }
}

inline std::vector<double> apply(const Matrix<double>& p, const std::vector<double>& x) {
    return p * std::span<const double>(x);
}

}  // namespace detail

/// Builds the parity eigenbasis by projecting e_u +- e_v onto each
/// eigenvalue cluster and completing orthogonally within the cluster.
template <Scalar T>
ParityEigenbasis build_parity_basis(const Graph<T>& g, const VertexPair& pair, const Tolerance& tol = {}) {
    g.check_pair(pair);
    if (!is_cospectral_pair(g, pair, tol, CospectralCheck::diagonal_only).cospectral)
        throw CertificateFailure("vertices {" + std::to_string(pair.u + 1) + "," + std::to_string(pair.v + 1) +
                                 "} are not cospectral");
    const std::size_t n = g.size();
    const SymmetricEigen eig = symmetric_eigen(g.weights(), tol);
    ParityEigenbasis out;
    out.pair = pair;
    out.n = n;
    const double band_lo = tol.tol_zero, band_hi = 10.0 * tol.tol_zero;

    for (const auto& idx : eigenvalue_clusters(eig, tol)) {
        EigenCluster cl;
        cl.multiplicity = idx.size();
        for (auto i : idx) cl.value += eig.values[i];
        cl.value /= static_cast<double>(idx.size());
        const Matrix<double> proj = eigenspace_projector(eig, idx, tol);

        std::vector<std::vector<double>> chosen;
        for (int sgn : {+1, -1}) {
            std::vector<double> e(n, 0.0);
            e[pair.u] = 1.0;
            e[pair.v] = static_cast<double>(sgn);
            auto x = detail::apply(proj, e);
            const double nx = detail::norm2(x);
            if (nx > band_lo && nx <= band_hi) cl.indeterminate = true;
            if (nx <= band_hi) continue;
            detail::scale_in_place(x, 1.0 / nx);
            if (x[pair.u] < 0) detail::scale_in_place(x, -1.0);
            cl.vectors.push_back(out.vectors.size());
            out.values.push_back(cl.value);
            out.vectors.push_back(x);
            out.tags.push_back(sgn > 0 ? VectorParity::even : VectorParity::odd);
            chosen.push_back(std::move(x));
        }

        // Orthogonal complement of the chosen vectors inside the cluster.
        const std::size_t need = idx.size() - chosen.size();
        if (need > 0) {
            Eigen::MatrixXd basis(n, idx.size());
            for (std::size_t c = 0; c < idx.size(); ++c)
                for (std::size_t r = 0; r < n; ++r) basis(r, c) = eig.vectors(r, idx[c]);
            for (const auto& w : chosen) {
                Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(w.data(), n);
                basis -= wv * (wv.transpose() * basis);
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis, Eigen::ComputeThinU);
            for (std::size_t c = 0; c < need; ++c) {
                std::vector<double> x(n);
                for (std::size_t r = 0; r < n; ++r) x[r] = svd.matrixU()(r, c);
                detail::fix_sign(x, tol.tol_zero);
                cl.vectors.push_back(out.vectors.size());
                out.values.push_back(cl.value);
                out.vectors.push_back(std::move(x));
                out.tags.push_back(VectorParity::zero);
            }
        }
        out.clusters.push_back(std::move(cl));
    }

    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            double d = 0;
            for (std::size_t r = 0; r < n; ++r) d += out.vectors[a][r] * out.vectors[b][r];
            out.orthonormality_residual = std::max(out.orthonormality_residual, std::abs(d - (a == b ? 1.0 : 0.0)));
        }
    return out;
}

struct ParityCounts {
    std::size_t even = 0, odd = 0, zero = 0;
    friend bool operator==(const ParityCounts&, const ParityCounts&) = default;
};

inline ParityCounts count_parity_vectors(const ParityEigenbasis& b) {
    ParityCounts c;
    for (auto t : b.tags) {
        if (t == VectorParity::even) ++c.even;
        else if (t == VectorParity::odd) ++c.odd;
        else ++c.zero;
    }
    return c;
}

/// Structural checks: at most one even and one odd vector per cluster, tags
/// consistent with the components on u and v, completion vectors vanishing
/// there. Returns the list of violations (empty when the basis is sound).
inline std::vector<std::string> check_parity_structure(const ParityEigenbasis& b, const Tolerance& tol = {}) {
    std::vector<std::string> bad;
    for (std::size_t c = 0; c < b.clusters.size(); ++c) {
        std::size_t ne = 0, no = 0;
        for (auto i : b.clusters[c].vectors) {
            const double pu = b.vectors[i][b.pair.u], pv = b.vectors[i][b.pair.v];
            switch (b.tags[i]) {
                case VectorParity::even:
                    ++ne;
                    if (std::abs(pu - pv) > tol.tol_zero || std::abs(pu) <= tol.tol_zero)
                        bad.push_back("vector " + std::to_string(i) + " tagged even lacks even parity");
                    break;
                case VectorParity::odd:
                    ++no;
                    if (std::abs(pu + pv) > tol.tol_zero || std::abs(pu) <= tol.tol_zero)
                        bad.push_back("vector " + std::to_string(i) + " tagged odd lacks odd parity");
                    break;
                default:
                    if (std::abs(pu) > tol.tol_zero || std::abs(pv) > tol.tol_zero)
                        bad.push_back("completion vector " + std::to_string(i) + " does not vanish on the pair");
            }
        }
        if (ne > 1 || no > 1) bad.push_back("cluster " + std::to_string(c) + " has more than one vector of a parity");
    }
    if (b.orthonormality_residual > 1e-10) bad.push_back("basis is not orthonormal");
    return bad;
}

/// Eigenvectors of the given parity (even/odd), in basis order.
inline std::vector<std::size_t> vectors_with_parity(const ParityEigenbasis& b, Parity p) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < b.tags.size(); ++i) {
        const bool even = b.tags[i] == VectorParity::even, odd = b.tags[i] == VectorParity::odd;
        if ((p == Parity::even && even) || (p == Parity::odd && odd) || (p == Parity::both && (even || odd)))
            out.push_back(i);
    }
    return out;
}

/// Sum of gamma_m * phi_m over the subset.
inline double zero_sum(const std::vector<double>& phi, const std::vector<std::size_t>& subset, const std::vector<double>& gamma) {
    double s = 0;
    for (std::size_t j = 0; j < subset.size(); ++j) s += gamma[j] * phi[subset[j]];
    return s;
}

struct ZeroSumReport {
    std::size_t eigenvector = 0;
    double eigenvalue = 0.0;
    VectorParity vector_parity = VectorParity::even;
    std::size_t weight_vector = 0;  // index into the multiplet's basis
    double residual = 0.0;
    double bound = 0.0;
    bool ok = false;
};

/// For a parity-q multiplet, every eigenvector of parity -q must satisfy
/// sum gamma_m phi_m = 0 for each basis weight vector gamma (for q = both,
/// every parity-tagged eigenvector).
template <Scalar T>
std::vector<ZeroSumReport> verify_zero_sums(const ParityEigenbasis& b, const Multiplet<T>& m, const Tolerance& tol = {}) {
    if (m.pair != b.pair) throw std::invalid_argument("verify_zero_sums: multiplet and basis refer to different pairs");
    // Distinct eigenvalues within each parity class hold by construction
    // (one vector per cluster and parity); assert it before relying on it.
    for (Parity p : {Parity::even, Parity::odd}) {
        const auto idx = vectors_with_parity(b, p);
        for (std::size_t i = 1; i < idx.size(); ++i)
            if (b.values[idx[i]] == b.values[idx[i - 1]])
                throw std::logic_error("verify_zero_sums: repeated eigenvalue within a parity class");
    }
    const Parity target = m.parity == Parity::both ? Parity::both : opposite(m.parity);
    std::vector<ZeroSumReport> out;
    for (auto i : vectors_with_parity(b, target))
        for (std::size_t k = 0; k < m.basis.size(); ++k) {
            std::vector<double> gamma;
            for (const auto& x : m.basis[k]) gamma.push_back(scalar_traits<T>::to_double(x));
            ZeroSumReport r;
            r.eigenvector = i;
            r.eigenvalue = b.values[i];
            r.vector_parity = b.tags[i];
            r.weight_vector = k;
            r.residual = std::abs(zero_sum(b.vectors[i], m.subset, gamma));
            r.bound = tol.tol_zero * detail::norm2(b.vectors[i]) * detail::norm2(gamma);
            r.ok = r.residual <= r.bound;
            out.push_back(r);
        }
    return out;
}

/// Largest |sum gamma_m phi_m| over eigenvectors of parity -q. Small values
/// for every such eigenvector mean (subset, gamma) is a parity-q multiplet.
inline double max_opposite_zero_sum(const ParityEigenbasis& b, const std::vector<std::size_t>& subset,
                                    const std::vector<double>& gamma, Parity q) {
    double worst = 0;
    for (auto i : vectors_with_parity(b, q == Parity::both ? Parity::both : opposite(q)))
        worst = std::max(worst, std::abs(zero_sum(b.vectors[i], subset, gamma)));
    return worst;
}

struct CompactSupport {
    std::size_t eigenvector = 0;
    double eigenvalue = 0.0;
    VectorParity vector_parity = VectorParity::even;
    std::vector<std::size_t> zero_set;
    std::vector<std::size_t> required;  // opposite-parity singlets
};

/// Zero sets of the parity-tagged eigenvectors. Every singlet of the opposite
/// parity must lie in the zero set; a violation throws CertificateFailure.
template <Scalar T>
std::vector<CompactSupport> compact_support_report(const Graph<T>& g, const ParityEigenbasis& b, const Tolerance& tol = {}) {
    const auto singlets = all_singlets(g, b.pair, tol);
    std::vector<CompactSupport> out;
    for (std::size_t i = 0; i < b.tags.size(); ++i) {
        if (b.tags[i] == VectorParity::zero) continue;
        CompactSupport cs;
        cs.eigenvector = i;
        cs.eigenvalue = b.values[i];
        cs.vector_parity = b.tags[i];
        for (std::size_t c = 0; c < b.n; ++c)
            if (std::abs(b.vectors[i][c]) <= tol.tol_zero) cs.zero_set.push_back(c);
        const Parity opp = b.tags[i] == VectorParity::even ? Parity::odd : Parity::even;
        for (const auto& [c, p] : singlets)
            if (parity_includes(p, opp)) {
                cs.required.push_back(c);
                if (std::abs(b.vectors[i][c]) > tol.tol_zero)
                    throw CertificateFailure("eigenvector " + std::to_string(i) + " (" + vector_parity_name(b.tags[i]) +
                                             ") is nonzero on " + parity_name(opp) + " singlet " + std::to_string(c + 1));
            }
        out.push_back(std::move(cs));
    }
    return out;
}

/// sum_nu lambda_nu^k phi^nu_s phi^nu_m from the basis.
inline double spectral_power_entry(const ParityEigenbasis& b, std::size_t s, std::size_t m, std::size_t k) {
    double t = 0;
    for (std::size_t i = 0; i < b.values.size(); ++i)
        t += std::pow(b.values[i], static_cast<double>(k)) * b.vectors[i][s] * b.vectors[i][m];
    return t;
}

}  // namespace walkmult
