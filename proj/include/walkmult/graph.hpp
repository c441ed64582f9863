#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "walkmult/matrix.hpp"

namespace walkmult {

/// Unordered pair of distinct vertices (0-based), stored with u < v.
struct VertexPair {
    std::size_t u = 0;
    std::size_t v = 1;

    VertexPair() = default;
    VertexPair(std::size_t a, std::size_t b) : u(std::min(a, b)), v(std::max(a, b)) {
        if (a == b) throw std::invalid_argument("VertexPair: vertices must be distinct");
    }

    /// Builds a pair from 1-based vertex numbers.
    static VertexPair from_one_based(std::size_t a, std::size_t b) {
        if (a == 0 || b == 0) throw std::invalid_argument("VertexPair: vertex numbers are 1-based");
        return {a - 1, b - 1};
    }

    [[nodiscard]] bool contains(std::size_t x) const { return x == u || x == v; }
    friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

/// Undirected weighted graph; diagonal entries are loop weights.
template <Scalar T>
class Graph {
public:
    using scalar_type = T;

    Graph() = default;
    explicit Graph(std::size_t n) : weights_(n, n) {}

    explicit Graph(Matrix<T> weights, std::vector<std::string> labels = {}, const Tolerance& tol = {})
        : weights_(std::move(weights)), labels_(std::move(labels)) {
        if (!weights_.is_square()) throw std::invalid_argument("Graph: adjacency matrix must be square");
        if (!weights_.is_symmetric(tol)) throw std::invalid_argument("Graph: adjacency matrix is not symmetric");
        if (!labels_.empty() && labels_.size() != weights_.rows())
            throw std::invalid_argument("Graph: label count differs from vertex count");
    }

    [[nodiscard]] std::size_t size() const noexcept { return weights_.rows(); }
    [[nodiscard]] const Matrix<T>& weights() const noexcept { return weights_; }
    [[nodiscard]] const T& weight(std::size_t i, std::size_t j) const { return weights_(i, j); }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Label for display; defaults to the 1-based index.
    [[nodiscard]] std::string label(std::size_t i) const {
        return labels_.empty() ? std::to_string(i + 1) : labels_.at(i);
    }

    void set_weight(std::size_t i, std::size_t j, const T& w) {
        check_vertex(i);
        check_vertex(j);
        weights_(i, j) = w;
        weights_(j, i) = w;
    }

    void set_labels(std::vector<std::string> labels) {
        if (!labels.empty() && labels.size() != size())
            throw std::invalid_argument("Graph: label count differs from vertex count");
        labels_ = std::move(labels);
    }

    void check_vertex(std::size_t i) const {
        if (i >= size())
            throw std::out_of_range("vertex " + std::to_string(i + 1) + " out of range [1," + std::to_string(size()) +
                                    "]");
    }

    void check_pair(const VertexPair& p) const {
        check_vertex(p.u);
        check_vertex(p.v);
    }

    friend bool operator==(const Graph& a, const Graph& b) { return a.weights_ == b.weights_; }

private:
    Matrix<T> weights_;
    std::vector<std::string> labels_;
};

/// Weighted indicator vector: nonzero weights on a sorted vertex subset.
template <Scalar T>
class WeightedIndicator {
public:
    WeightedIndicator(std::size_t ambient, std::vector<std::size_t> support, std::vector<T> gamma)
        : ambient_(ambient) {
        if (support.size() != gamma.size())
            throw std::invalid_argument("WeightedIndicator: support and weight counts differ");
        std::vector<std::size_t> order(support.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return support[a] < support[b]; });
        for (auto i : order) {
            if (support[i] >= ambient)
                throw std::out_of_range("WeightedIndicator: vertex " + std::to_string(support[i] + 1) + " out of range");
            if (!support_.empty() && support_.back() == support[i])
                throw std::invalid_argument("WeightedIndicator: duplicate vertex " + std::to_string(support[i] + 1));
            if (is_zero_exact(gamma[i]))
                throw std::invalid_argument("WeightedIndicator: zero weight on vertex " + std::to_string(support[i] + 1));
            support_.push_back(support[i]);
            gamma_.push_back(gamma[i]);
        }
    }

    /// Uniform unit weights.
    static WeightedIndicator uniform(std::size_t ambient, std::vector<std::size_t> support) {
        std::vector<T> g(support.size(), T(1));
        return WeightedIndicator(ambient, std::move(support), std::move(g));
    }

    [[nodiscard]] std::size_t ambient() const noexcept { return ambient_; }
    [[nodiscard]] const std::vector<std::size_t>& support() const noexcept { return support_; }
    [[nodiscard]] const std::vector<T>& gamma() const noexcept { return gamma_; }
    [[nodiscard]] bool empty() const noexcept { return support_.empty(); }

    [[nodiscard]] std::vector<T> dense() const {
        std::vector<T> e(ambient_, T(0));
        for (std::size_t i = 0; i < support_.size(); ++i) e[support_[i]] = gamma_[i];
        return e;
    }

private:
    std::size_t ambient_;
    std::vector<std::size_t> support_;
    std::vector<T> gamma_;
};

template <Scalar T>
struct VertexDeletion {
    Graph<T> graph;
    std::vector<std::optional<std::size_t>> old_to_new;
};

/// Principal submatrix on the complement of `removed`, original order kept.
template <Scalar T>
VertexDeletion<T> delete_vertices(const Graph<T>& g, const std::vector<std::size_t>& removed) {
    std::vector<bool> gone(g.size(), false);
    for (auto r : removed) {
        g.check_vertex(r);
        gone[r] = true;
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!gone[i]) keep.push_back(i);
    if (keep.empty() && g.size() > 0) throw std::invalid_argument("delete_vertices: cannot delete every vertex");

    VertexDeletion<T> out;
    out.old_to_new.assign(g.size(), std::nullopt);
    Matrix<T> w(keep.size(), keep.size());
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < keep.size(); ++a) {
        out.old_to_new[keep[a]] = a;
        if (!g.labels().empty()) labels.push_back(g.labels()[keep[a]]);
        for (std::size_t b = 0; b < keep.size(); ++b) w(a, b) = g.weight(keep[a], keep[b]);
    }
    out.graph = Graph<T>(std::move(w), std::move(labels));
    return out;
}

/// Weighted cone: new tip vertex (index n) joined to the support with weights gamma.
template <Scalar T>
Graph<T> cone_over(const Graph<T>& g, const WeightedIndicator<T>& e, std::string tip_label = {}) {
    if (e.ambient() != g.size()) throw std::invalid_argument("cone_over: indicator size differs from graph size");
    if (e.empty()) throw std::invalid_argument("cone_over: empty support");
    const std::size_t n = g.size();
    Matrix<T> w(n + 1, n + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w(i, j) = g.weight(i, j);
    for (std::size_t k = 0; k < e.support().size(); ++k) {
        w(e.support()[k], n) = e.gamma()[k];
        w(n, e.support()[k]) = e.gamma()[k];
    }
    std::vector<std::string> labels;
    if (!g.labels().empty()) {
        labels = g.labels();
        labels.push_back(tip_label.empty() ? std::to_string(n + 1) : std::move(tip_label));
    }
    return Graph<T>(std::move(w), std::move(labels));
}

/// Permutation as an image array: perm[i] is the image of vertex i (0-based).
using Permutation = std::vector<std::size_t>;

inline bool is_bijection(const Permutation& perm) {
    std::vector<bool> seen(perm.size(), false);
    for (auto x : perm) {
        if (x >= perm.size() || seen[x]) return false;
        seen[x] = true;
    }
    return true;
}

/// H' = P H P^T, i.e. H'[perm[i]][perm[j]] = H[i][j].
template <Scalar T>
Graph<T> apply_permutation(const Graph<T>& g, const Permutation& perm) {
    if (perm.size() != g.size() || !is_bijection(perm))
        throw std::invalid_argument("apply_permutation: not a bijection on the vertex set");
    const std::size_t n = g.size();
    Matrix<T> w(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w(perm[i], perm[j]) = g.weight(i, j);
    std::vector<std::string> labels;
    if (!g.labels().empty()) {
        labels.resize(n);
        for (std::size_t i = 0; i < n; ++i) labels[perm[i]] = g.labels()[i];
    }
    return Graph<T>(std::move(w), std::move(labels));
}

/// Disjoint union of two graphs, `b` placed after `a`.
template <Scalar T>
Graph<T> disjoint_union(const Graph<T>& a, const Graph<T>& b) {
    const std::size_t na = a.size(), nb = b.size();
    Matrix<T> w(na + nb, na + nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) w(i, j) = a.weight(i, j);
    for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t j = 0; j < nb; ++j) w(na + i, na + j) = b.weight(i, j);
    return Graph<T>(std::move(w));
}

template <Scalar T>
Graph<double> to_double_graph(const Graph<T>& g) {
    return Graph<double>(to_double_matrix(g.weights()), g.labels());
}

/// Edges (i <= j) with nonzero weight, lexicographic order.
template <Scalar T>
std::vector<std::pair<std::size_t, std::size_t>> edge_list(const Graph<T>& g) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i; j < g.size(); ++j)
            if (!is_zero_exact(g.weight(i, j))) out.emplace_back(i, j);
    return out;
}

}  // namespace walkmult
