#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "crnhull/errors.hpp"
#include "crnhull/linalg.hpp"

namespace crnhull {

/// Indices of the convex hull of a planar point set, counter-clockwise
/// (Andrew monotone chain). Collinear boundary points are dropped.
inline std::vector<std::size_t> planar_hull(const std::vector<Vec>& pts) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
        return pts[a][1] < pts[b][1];
    });
    auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
        return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) -
               (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
    };
    std::vector<std::size_t> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], idx[i]) <= 0) --k;
        hull[k++] = idx[i];
    }
    for (std::size_t i = n, lower = k + 1; i-- > 0;) {
        if (i == n - 1) continue;
        while (k >= lower && cross(hull[k - 2], hull[k - 1], idx[i]) <= 0) --k;
        hull[k++] = idx[i];
    }
    hull.resize(k > 1 ? k - 1 : k);
    return hull;
}

/// Half-space a.x <= b.
struct HalfSpace {
    Vec normal;
    double offset = 0.0;
};

/// Facet enumeration for d <= 3 as an independent cross-check on the LP
/// membership route. Every (d-1)-subset-spanned hyperplane that supports the
/// whole cloud becomes a half-space; brute force, adequate for the small
/// generator sets the cross-check is used on.
inline std::vector<HalfSpace> facet_enumeration(const std::vector<Vec>& pts, double tol = 1e-9) {
    if (pts.empty()) return {};
    const std::size_t d = pts.front().size();
    if (d < 1 || d > 3) throw WrongDimension("facet_enumeration: supported for d in {1,2,3}");
    const std::size_t n = pts.size();
    std::vector<HalfSpace> out;
    // Both orientations of each candidate normal, offset at the cloud's own
    // maximum, give supporting half-spaces; their intersection equals the
    // hull whenever the cloud is full-dimensional.
    auto consider = [&](Vec normal) {
        const double len = norm2(normal);
        if (len < tol) return;
        normal = (1.0 / len) * normal;
        for (int s = 0; s < 2; ++s) {
            const Vec dir = (s == 0) ? normal : (-1.0 * normal);
            double mx = -1e300;
            for (const Vec& p : pts) mx = std::max(mx, dot(dir, p));
            out.push_back({dir, mx});
        }
    };
    if (d == 1) {
        consider(Vec{1.0});
    } else if (d == 2) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const Vec e = pts[j] - pts[i];
                consider(Vec{-e[1], e[0]});
            }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k) {
                    const Vec u = pts[j] - pts[i], v = pts[k] - pts[i];
                    consider(Vec{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                                 u[0] * v[1] - u[1] * v[0]});
                }
    }
    return out;
}

/// Signed violation of q against the H-representation: max over facets of
/// a.q - b (<= 0 means inside).
inline double halfspace_violation(const std::vector<HalfSpace>& facets, const Vec& q) {
    double worst = -1e300;
    for (const HalfSpace& h : facets) worst = std::max(worst, dot(h.normal, q) - h.offset);
    return worst;
}

} // namespace crnhull
