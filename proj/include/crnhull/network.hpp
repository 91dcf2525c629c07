#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "crnhull/errors.hpp"
#include "crnhull/linalg.hpp"

namespace crnhull {

/// A chemical complex: the exponent row y_i, i.e. the coefficient of each
/// species in the non-negative integer combination the complex stands for.
struct Complex {
    std::vector<int> exponents;

    bool operator==(const Complex& o) const { return exponents == o.exponents; }
    bool operator<(const Complex& o) const { return exponents < o.exponents; }

    int total_degree() const {
        int d = 0;
        for (int e : exponents) d += e;
        return d;
    }
};

struct Reaction {
    std::size_t from = 0;
    std::size_t to = 0;
    double rate = 0.0;
};

/// Weighted digraph on complexes. Vertex i carries the monomial x^{y_i};
/// edge (i,j) is a reaction with rate kappa_ij > 0.
struct ReactionNetwork {
    std::size_t species_count = 0;
    std::vector<Complex> complexes;
    std::vector<Reaction> edges;

    std::size_t complex_count() const { return complexes.size(); }

    /// Exponent matrix Y, one row per complex.
    Mat exponent_matrix() const {
        Mat Y(complexes.size(), species_count);
        for (std::size_t i = 0; i < complexes.size(); ++i)
            for (std::size_t j = 0; j < species_count; ++j)
                Y(i, j) = static_cast<double>(complexes[i].exponents[j]);
        return Y;
    }
};

struct NetworkValidation {
    /// When set, the all-zero complex (constant source/sink) is accepted.
    bool allow_empty_complex = false;
};

/// Throws InvalidInput naming the offending complex or edge.
inline void validate(const ReactionNetwork& net, const NetworkValidation& opts = {}) {
    if (net.species_count == 0) throw InvalidInput("network: species_count must be positive");
    for (std::size_t i = 0; i < net.complexes.size(); ++i) {
        const Complex& c = net.complexes[i];
        if (c.exponents.size() != net.species_count)
            throw InvalidInput("network: complex " + std::to_string(i) + " has wrong length");
        bool any_positive = false;
        for (int e : c.exponents) {
            if (e < 0) throw InvalidInput("network: complex " + std::to_string(i) + " has a negative entry");
            if (e > 0) any_positive = true;
        }
        if (!any_positive && !opts.allow_empty_complex)
            throw InvalidInput("network: complex " + std::to_string(i) + " is empty");
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const Reaction& r = net.edges[e];
        if (r.from >= net.complexes.size() || r.to >= net.complexes.size())
            throw InvalidInput("network: edge " + std::to_string(e) + " references a missing complex");
        if (r.from == r.to) throw InvalidInput("network: edge " + std::to_string(e) + " is a self-loop");
        if (!(r.rate > 0.0)) throw InvalidInput("network: edge " + std::to_string(e) + " has non-positive rate");
        if (!seen.insert({r.from, r.to}).second)
            throw InvalidInput("network: duplicate edge " + std::to_string(r.from) + "->" +
                               std::to_string(r.to));
    }
}

/// Rate matrix A_kappa: kappa_ij off the diagonal, rows summing to zero
/// (the negated Laplacian of the weighted digraph).
struct Laplacian {
    Mat a_kappa;

    std::size_t size() const { return a_kappa.rows; }
};

inline Laplacian build_laplacian(const ReactionNetwork& net) {
    const std::size_t n = net.complex_count();
    Mat A(n, n);
    for (const Reaction& r : net.edges) A(r.from, r.to) = r.rate;
    // Diagonal is the negated off-diagonal row sum, accumulated in ascending
    // column order so the cancellation is bit-exact when re-checked the same
    // way.
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) s += A(i, j);
        A(i, i) = -s;
    }
    return Laplacian{std::move(A)};
}

/// Orthonormal basis of span{ y_j - y_i : (i,j) edge }.
struct StoichiometrySubspace {
    std::size_t ambient_dim = 0;
    std::vector<Vec> basis; // d orthonormal vectors in R^s
    std::size_t rank() const { return basis.size(); }

    /// Residual of v after projection onto the span.
    Vec project_residual(const Vec& v) const {
        Vec r = v;
        for (const Vec& b : basis) axpy(-dot(v, b), b, r);
        return r;
    }
};

inline StoichiometrySubspace stoichiometry_subspace(const ReactionNetwork& net) {
    std::vector<Vec> diffs;
    diffs.reserve(net.edges.size());
    for (const Reaction& r : net.edges) {
        Vec d(net.species_count);
        for (std::size_t j = 0; j < net.species_count; ++j)
            d[j] = static_cast<double>(net.complexes[r.to].exponents[j] -
                                       net.complexes[r.from].exponents[j]);
        diffs.push_back(std::move(d));
    }
    StoichiometrySubspace sub;
    sub.ambient_dim = net.species_count;
    sub.basis = orthonormal_span(std::move(diffs), 1e-9);
    return sub;
}

namespace detail {

/// Tarjan strongly connected components; returns component id per vertex.
inline std::size_t strongly_connected_components(std::size_t n,
                                                 const std::vector<std::vector<std::size_t>>& adj,
                                                 std::vector<std::size_t>& comp) {
    comp.assign(n, static_cast<std::size_t>(-1));
    std::vector<int> depth(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::size_t count = 0;
    int next_depth = 0;

    // Explicit stack to avoid recursion limits on large graphs.
    struct Frame {
        std::size_t v;
        std::size_t edge = 0;
    };
    std::vector<Frame> frames;
    for (std::size_t root = 0; root < n; ++root) {
        if (depth[root] != -1) continue;
        frames.push_back({root});
        while (!frames.empty()) {
            Frame& f = frames.back();
            const std::size_t v = f.v;
            if (f.edge == 0) {
                depth[v] = low[v] = next_depth++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (f.edge < adj[v].size()) {
                const std::size_t w = adj[v][f.edge++];
                if (depth[w] == -1) {
                    frames.push_back({w});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], depth[w]);
            }
            if (descended) continue;
            if (low[v] == depth[v]) {
                while (true) {
                    const std::size_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = count;
                    if (w == v) break;
                }
                ++count;
            }
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
    }
    return count;
}

inline std::vector<std::vector<std::size_t>> adjacency(const ReactionNetwork& net) {
    std::vector<std::vector<std::size_t>> adj(net.complex_count());
    for (const Reaction& r : net.edges) adj[r.from].push_back(r.to);
    return adj;
}

} // namespace detail

struct LinkageInfo {
    std::size_t linkage_class_count = 0;
    bool is_weakly_reversible = false;
};

/// Linkage classes are the connected components of the underlying undirected
/// graph; the network is weakly reversible when every such component is
/// strongly connected.
inline LinkageInfo linkage_and_reversibility(const ReactionNetwork& net) {
    const std::size_t n = net.complex_count();
    // Undirected components via union-find.
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Reaction& r : net.edges) parent[find(r.from)] = find(r.to);
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < n; ++i) roots.insert(find(i));

    std::vector<std::size_t> comp;
    const std::size_t scc_count = detail::strongly_connected_components(n, detail::adjacency(net), comp);

    // Weakly reversible iff the SCC partition refines to exactly the
    // undirected components, i.e. the counts agree.
    LinkageInfo info;
    info.linkage_class_count = roots.size();
    info.is_weakly_reversible = (scc_count == roots.size());
    return info;
}

} // namespace crnhull
