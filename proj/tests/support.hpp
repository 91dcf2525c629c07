#pragma once

// Shared fixture systems used across the test suites: the five-species
// reversible triangle, the three-species linear triangle, and the three
// polynomial systems whose hulls have dimension 3, 4 and 5, together with
// weakly reversible networks realizing two of them.

#include <array>
#include <string>
#include <vector>

#include "crnhull/network.hpp"
#include "crnhull/polynomial.hpp"

namespace testsupport {

using crnhull::Complex;
using crnhull::PolynomialVectorField;
using crnhull::ReactionNetwork;
using crnhull::SparsePoly;
using crnhull::Term;
using crnhull::Vec;

inline std::string fixture_path(const std::string& name) {
    return std::string(CRNHULL_FIXTURE_DIR) + "/" + name;
}

inline SparsePoly poly(std::vector<Term> terms) { return crnhull::make_poly(terms); }

inline ReactionNetwork triangle5(const std::array<double, 6>& k = {1, 2, 3, 4, 5, 6}) {
    ReactionNetwork net;
    net.species_count = 5;
    net.complexes = {Complex{{1, 0, 1, 0, 0}}, Complex{{0, 0, 0, 1, 0}}, Complex{{0, 1, 0, 0, 2}}};
    net.edges = {{0, 1, k[0]}, {1, 0, k[1]}, {2, 1, k[2]}, {1, 2, k[3]}, {0, 2, k[4]}, {2, 0, k[5]}};
    return net;
}

inline ReactionNetwork linear_triangle() {
    ReactionNetwork net;
    net.species_count = 3;
    net.complexes = {Complex{{1, 0, 0}}, Complex{{0, 1, 0}}, Complex{{0, 0, 1}}};
    net.edges = {{0, 1, 6.0}, {1, 0, 1.0}, {2, 1, 6.0}, {1, 2, 1.0}, {0, 2, 3.0}, {2, 0, 3.0}};
    return net;
}

/// Four-species system with a 3-dimensional hull; start (10, 8, 9, 2).
/// x1 and the others exchange through degree-2 complexes and the total
/// concentration is conserved.
inline PolynomialVectorField curve3d_field() {
    PolynomialVectorField f;
    f.species_count = 4;
    f.components = {
        poly({{-2, {2, 0, 0, 0}}, {-6, {1, 0, 0, 1}}, {10, {0, 0, 1, 1}}}),
        poly({{1, {2, 0, 0, 0}}, {-8, {0, 1, 1, 0}}}),
        poly({{1, {2, 0, 0, 0}}, {6, {1, 0, 0, 1}}, {-9, {0, 0, 1, 1}}}),
        poly({{8, {0, 1, 1, 0}}, {-1, {0, 0, 1, 1}}}),
    };
    return f;
}

inline Vec curve3d_x0() { return {10, 8, 9, 2}; }

/// Weakly reversible single-linkage network realizing curve3d_field with a
/// rank-3 stoichiometry subspace (every reaction conserves total mass).
inline ReactionNetwork curve3d_network() {
    ReactionNetwork net;
    net.species_count = 4;
    net.complexes = {
        Complex{{2, 0, 0, 0}}, // a: X1^2
        Complex{{1, 0, 0, 1}}, // b: X1 X4
        Complex{{0, 0, 1, 1}}, // c: X3 X4
        Complex{{0, 1, 1, 0}}, // d: X2 X3
    };
    net.edges = {{0, 3, 1.0}, {1, 2, 6.0}, {3, 2, 8.0}, {2, 0, 1.0}, {2, 1, 8.0}};
    return net;
}

/// Four-species system with a full 4-dimensional hull; start (5, 8, 6, 2).
/// Contains linear in/outflow terms, so realizations need the empty complex.
inline PolynomialVectorField curve4d_field() {
    PolynomialVectorField f;
    f.species_count = 4;
    f.components = {
        poly({{-10, {2, 0, 0, 0}},
              {12, {0, 1, 1, 0}},
              {6, {0, 0, 2, 0}},
              {4, {0, 0, 1, 1}},
              {-5, {1, 0, 0, 0}}}),
        poly({{2, {2, 0, 0, 0}}, {-8, {0, 1, 1, 0}}, {1, {1, 0, 0, 0}}}),
        poly({{8, {2, 0, 0, 0}}, {-8, {0, 1, 1, 0}}, {-6, {0, 0, 2, 0}}, {5, {1, 0, 0, 0}}}),
        poly({{-8, {0, 0, 1, 1}}, {4, {1, 0, 0, 0}}}),
    };
    return f;
}

inline Vec curve4d_x0() { return {5, 8, 6, 2}; }

/// Six-species system with a 5-dimensional hull (x2+x3+x5+x6 is conserved).
inline PolynomialVectorField curve5d_field() {
    PolynomialVectorField f;
    f.species_count = 6;
    const std::vector<int> x3x4x6 = {0, 0, 1, 1, 0, 1};
    const std::vector<int> x1x6x6 = {1, 0, 0, 0, 0, 2};
    const std::vector<int> x2x2 = {0, 2, 0, 0, 0, 0};
    const std::vector<int> x3x5 = {0, 0, 1, 0, 1, 0};
    const std::vector<int> x2x2x4 = {0, 2, 0, 1, 0, 0};
    const std::vector<int> x6x6 = {0, 0, 0, 0, 0, 2};
    f.components = {
        poly({{4, x3x4x6}, {-8, x1x6x6}, {2, x2x2}, {4, x3x5}}),
        poly({{-10, x2x2x4}, {4, x3x4x6}, {4, x1x6x6}, {-12, x2x2}, {6, x6x6}}),
        poly({{5, x2x2x4}, {-6, x3x4x6}, {6, x1x6x6}, {-4, x3x5}, {2, x6x6}}),
        poly({{-4, x2x2x4}, {-4, x3x4x6}, {2, x1x6x6}, {2, x6x6}}),
        poly({{4, x2x2x4}, {4, x1x6x6}, {-4, x3x5}}),
        poly({{1, x2x2x4}, {2, x3x4x6}, {-14, x1x6x6}, {12, x2x2}, {8, x3x5}, {-8, x6x6}}),
    };
    return f;
}

/// The source omits a start point for the 6-species system; this one is the
/// repository's pinned choice (positive, converging, mixed-sign grid).
inline Vec curve5d_x0() { return {2, 1, 4, 1, 3, 1}; }

/// Weakly reversible single-linkage network realizing curve5d_field with a
/// rank-5 stoichiometry subspace (every reaction conserves x2+x3+x5+x6).
inline ReactionNetwork curve5d_network() {
    ReactionNetwork net;
    net.species_count = 6;
    net.complexes = {
        Complex{{0, 0, 1, 1, 0, 1}}, // y1: X3 X4 X6
        Complex{{1, 0, 0, 0, 0, 2}}, // y2: X1 X6^2
        Complex{{0, 2, 0, 0, 0, 0}}, // y3: X2^2
        Complex{{0, 0, 1, 0, 1, 0}}, // y4: X3 X5
        Complex{{0, 2, 0, 1, 0, 0}}, // y5: X2^2 X4
        Complex{{0, 0, 0, 0, 0, 2}}, // y6: X6^2
    };
    net.edges = {{0, 1, 4.0}, {0, 4, 2.0}, {1, 0, 2.0}, {1, 2, 2.0}, {1, 3, 4.0}, {2, 1, 2.0},
                 {2, 5, 4.0}, {3, 1, 4.0}, {4, 0, 1.0}, {4, 3, 4.0}, {5, 0, 2.0}, {5, 2, 3.0}};
    return net;
}

} // namespace testsupport
