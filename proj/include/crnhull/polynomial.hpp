#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "crnhull/errors.hpp"
#include "crnhull/linalg.hpp"
#include "crnhull/network.hpp"

namespace crnhull {

/// One monomial term: coefficient times x^exponents.
struct Term {
    double coeff = 0.0;
    std::vector<int> exponents;
};

/// Sparse polynomial in s variables. Terms are kept sorted by exponent
/// vector with no zero coefficients and no duplicate exponent keys.
struct SparsePoly {
    std::vector<Term> terms;

    double evaluate(const Vec& x) const {
        double s = 0.0;
        for (const Term& t : terms) {
            double m = t.coeff;
            for (std::size_t j = 0; j < t.exponents.size(); ++j)
                for (int e = 0; e < t.exponents[j]; ++e) m *= x[j];
            s += m;
        }
        return s;
    }
};

/// Normalizes a term list: merges duplicate exponent keys, drops zeros,
/// orders terms by exponent vector.
inline SparsePoly make_poly(const std::vector<Term>& raw) {
    std::map<std::vector<int>, double> acc;
    for (const Term& t : raw) acc[t.exponents] += t.coeff;
    SparsePoly p;
    for (auto& [e, c] : acc)
        if (c != 0.0) p.terms.push_back({c, e});
    return p;
}

/// The s polynomial components of a mass-action field x' = Psi(x) A_kappa Y.
struct PolynomialVectorField {
    std::size_t species_count = 0;
    std::vector<SparsePoly> components;
};

inline PolynomialVectorField build_vector_field(const ReactionNetwork& net) {
    const Laplacian lap = build_laplacian(net);
    const Mat Y = net.exponent_matrix();
    const std::size_t n = net.complex_count(), s = net.species_count;
    // Coefficient of monomial x^{y_i} in component j is (A_kappa Y)_{ij}.
    PolynomialVectorField f;
    f.species_count = s;
    f.components.resize(s);
    std::vector<std::vector<Term>> raw(s);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            double c = 0.0;
            for (std::size_t k = 0; k < n; ++k) c += lap.a_kappa(i, k) * Y(k, j);
            if (c != 0.0) raw[j].push_back({c, net.complexes[i].exponents});
        }
    }
    for (std::size_t j = 0; j < s; ++j) f.components[j] = make_poly(raw[j]);
    return f;
}

inline Vec evaluate_field(const PolynomialVectorField& field, const Vec& x) {
    if (x.size() != field.species_count)
        throw DimensionMismatch("evaluate_field: point has wrong dimension");
    Vec dx(field.species_count);
    for (std::size_t j = 0; j < field.species_count; ++j) dx[j] = field.components[j].evaluate(x);
    return dx;
}

/// Hars-Toth criterion: the field arises from some mass-action network iff
/// every negative-coefficient monomial of component i is divisible by x_i.
inline bool check_mass_action_admissible(const PolynomialVectorField& field) {
    for (std::size_t i = 0; i < field.species_count; ++i)
        for (const Term& t : field.components[i].terms)
            if (t.coeff < 0.0 && t.exponents[i] < 1) return false;
    return true;
}

/// Constructs one network realizing an admissible field: each term c x^m of
/// component i becomes the reaction m -> m + sign(c) e_i with rate |c|.
/// Targets of outflow terms may be the empty complex.
inline ReactionNetwork realize_network(const PolynomialVectorField& field) {
    if (!check_mass_action_admissible(field))
        throw InvalidInput("realize_network: field is not mass-action admissible");
    const std::size_t s = field.species_count;
    ReactionNetwork net;
    net.species_count = s;
    std::map<std::vector<int>, std::size_t> index_of;
    auto complex_index = [&](const std::vector<int>& e) {
        auto [it, inserted] = index_of.try_emplace(e, net.complexes.size());
        if (inserted) net.complexes.push_back(Complex{e});
        return it->second;
    };
    std::map<std::pair<std::size_t, std::size_t>, double> rates;
    for (std::size_t i = 0; i < s; ++i) {
        for (const Term& t : field.components[i].terms) {
            std::vector<int> target = t.exponents;
            target[i] += (t.coeff > 0.0) ? 1 : -1;
            const std::size_t from = complex_index(t.exponents);
            const std::size_t to = complex_index(target);
            rates[{from, to}] += std::abs(t.coeff);
        }
    }
    for (auto& [key, rate] : rates) net.edges.push_back({key.first, key.second, rate});
    validate(net, {.allow_empty_complex = true});
    return net;
}

inline bool fields_equal(const PolynomialVectorField& a, const PolynomialVectorField& b,
                         double tol = 0.0) {
    if (a.species_count != b.species_count) return false;
    for (std::size_t i = 0; i < a.species_count; ++i) {
        const auto& ta = a.components[i].terms;
        const auto& tb = b.components[i].terms;
        if (ta.size() != tb.size()) return false;
        for (std::size_t k = 0; k < ta.size(); ++k) {
            if (ta[k].exponents != tb[k].exponents) return false;
            if (std::abs(ta[k].coeff - tb[k].coeff) > tol) return false;
        }
    }
    return true;
}

} // namespace crnhull
