#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "crnhull/errors.hpp"
#include "crnhull/network.hpp"
#include "crnhull/rng.hpp"

namespace crnhull {

struct RandomNetworkParams {
    std::size_t species = 1;
    std::size_t complexes = 1;
    int max_degree = 2; // total degree of complex monomials, kept <= 4
    double rate_lo = 1.0;
    double rate_hi = 10.0;
    /// When set the constant (all-zero) monomial is an eligible complex.
    bool allow_constant_complex = false;
};

namespace detail {

inline void enumerate_exponents(std::size_t s, int max_degree, std::vector<std::vector<int>>& out,
                                std::vector<int>& cur, std::size_t pos, int used) {
    if (pos == s) {
        out.push_back(cur);
        return;
    }
    for (int e = 0; e + used <= max_degree; ++e) {
        cur[pos] = e;
        enumerate_exponents(s, max_degree, out, cur, pos + 1, used + e);
    }
    cur[pos] = 0;
}

} // namespace detail

/// All exponent vectors of total degree <= max_degree in s variables,
/// excluding the zero vector unless include_constant is set.
inline std::vector<std::vector<int>> enumerate_monomials(std::size_t s, int max_degree,
                                                         bool include_constant = false) {
    std::vector<std::vector<int>> all;
    std::vector<int> cur(s, 0);
    detail::enumerate_exponents(s, max_degree, all, cur, 0, 0);
    std::vector<std::vector<int>> out;
    for (auto& e : all) {
        const bool zero = std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
        if (!zero || include_constant) out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

/// Sparse random digraph on n vertices patched to a single strongly
/// connected component: each ordered pair is an edge with probability
/// min(1, 1.5 ln(n)/n); then every condensation sink gets an outgoing edge
/// to another component until one SCC remains.
inline std::set<std::pair<std::size_t, std::size_t>> random_strong_digraph(std::size_t n, Rng& rng) {
    const double prob = (n > 1) ? std::min(1.0, 1.5 * std::log(static_cast<double>(n)) /
                                                    static_cast<double>(n))
                                : 0.0;
    std::set<std::pair<std::size_t, std::size_t>> edge_set;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && rng.bernoulli(prob)) edge_set.insert({i, j});

    while (n > 1) {
        std::vector<std::vector<std::size_t>> adj(n);
        for (auto& [u, v] : edge_set) adj[u].push_back(v);
        std::vector<std::size_t> comp;
        const std::size_t ncomp = strongly_connected_components(n, adj, comp);
        if (ncomp == 1) break;
        std::vector<char> is_sink(ncomp, 1);
        for (auto& [u, v] : edge_set)
            if (comp[u] != comp[v]) is_sink[comp[u]] = 0;
        for (std::size_t c = 0; c < ncomp; ++c) {
            if (!is_sink[c]) continue;
            std::vector<std::size_t> inside, outside;
            for (std::size_t v = 0; v < n; ++v) (comp[v] == c ? inside : outside).push_back(v);
            const std::size_t u = inside[rng.index(inside.size())];
            const std::size_t w = outside[rng.index(outside.size())];
            edge_set.insert({u, w});
        }
    }
    return edge_set;
}

} // namespace detail

/// Random weakly reversible network on one linkage class: a sparse random
/// digraph patched to a single strongly connected component, with distinct
/// random monomial complexes and uniform rates. Identical seed gives an
/// identical network.
inline ReactionNetwork random_network(const RandomNetworkParams& p, std::uint64_t seed) {
    if (p.species < 1 || p.complexes < 1) throw InvalidInput("random_network: s, n must be >= 1");
    if (p.max_degree < 1 || p.max_degree > 4)
        throw InvalidInput("random_network: max_degree must be in [1, 4]");
    if (!(0.0 < p.rate_lo && p.rate_lo <= p.rate_hi))
        throw InvalidInput("random_network: need 0 < rate_lo <= rate_hi");

    const auto pool = enumerate_monomials(p.species, p.max_degree, p.allow_constant_complex);
    if (p.complexes > pool.size())
        throw InvalidInput("random_network: requested " + std::to_string(p.complexes) +
                           " complexes but only " + std::to_string(pool.size()) +
                           " distinct monomials of degree <= " + std::to_string(p.max_degree));

    Rng rng(seed);
    const std::size_t n = p.complexes;

    // Distinct monomials by uniform sampling with duplicate rejection.
    std::set<std::size_t> chosen;
    std::vector<Complex> complexes;
    while (complexes.size() < n) {
        const std::size_t i = rng.index(pool.size());
        if (chosen.insert(i).second) complexes.push_back(Complex{pool[i]});
    }

    const auto edge_set = detail::random_strong_digraph(n, rng);

    ReactionNetwork net;
    net.species_count = p.species;
    net.complexes = std::move(complexes);
    for (auto& [u, v] : edge_set) net.edges.push_back({u, v, rng.uniform(p.rate_lo, p.rate_hi)});
    validate(net, {.allow_empty_complex = p.allow_constant_complex});
    return net;
}

/// Random strongly connected linear network: n = s single-unit complexes
/// (the exponent matrix is the identity) with uniform rates.
inline ReactionNetwork random_linear_network(std::size_t species, double rate_lo, double rate_hi,
                                             std::uint64_t seed) {
    if (species < 2) throw InvalidInput("random_linear_network: need at least 2 species");
    if (!(0.0 < rate_lo && rate_lo <= rate_hi))
        throw InvalidInput("random_linear_network: need 0 < rate_lo <= rate_hi");
    Rng rng(seed);
    ReactionNetwork net;
    net.species_count = species;
    for (std::size_t i = 0; i < species; ++i) {
        std::vector<int> e(species, 0);
        e[i] = 1;
        net.complexes.push_back(Complex{std::move(e)});
    }
    const auto edge_set = detail::random_strong_digraph(species, rng);
    for (auto& [u, v] : edge_set) net.edges.push_back({u, v, rng.uniform(rate_lo, rate_hi)});
    validate(net);
    return net;
}

} // namespace crnhull
