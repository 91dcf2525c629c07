#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "crnhull/chart.hpp"
#include "crnhull/errors.hpp"
#include "crnhull/integrate.hpp"
#include "crnhull/linalg.hpp"
#include "crnhull/rng.hpp"

namespace crnhull {

/// Trajectory samples projected into chart coordinates; the convex hull of
/// these generators is the set membership queries run against.
struct HullSample {
    AffineChart chart;
    std::vector<Vec> reduced_points;

    std::size_t size() const { return reduced_points.size(); }

    /// Diameter of the bounding box of the generators; membership work is
    /// scaled by it so tolerances are unit-free.
    double bounding_diameter() const {
        if (reduced_points.empty()) return 0.0;
        const std::size_t d = chart.dim();
        Vec lo = reduced_points.front(), hi = reduced_points.front();
        for (const Vec& p : reduced_points)
            for (std::size_t k = 0; k < d; ++k) {
                lo[k] = std::min(lo[k], p[k]);
                hi[k] = std::max(hi[k], p[k]);
            }
        return dist2(lo, hi);
    }
};

inline HullSample make_hull_sample(const AffineChart& chart, const Trajectory& traj) {
    HullSample hull;
    hull.chart = chart;
    hull.reduced_points.reserve(traj.points.size());
    for (const Vec& p : traj.points) hull.reduced_points.push_back(chart.project(p));
    return hull;
}

struct MembershipResult {
    bool inside = false;
    /// Normalized units (after scaling generators to unit bounding-box
    /// diameter): slack tol - residual when inside, residual distance
    /// estimate when outside.
    double margin = 0.0;
    Vec weights; // convex coefficients over the generators when inside
};

namespace detail {

struct Phase1Result {
    Vec mu;           // length m, >= 0, sums to ~1
    double objective; // minimal artificial mass (l1 residual)
};

/// Phase-1 dense simplex for
///   min sum(a)  s.t.  C mu + D a = b,  mu >= 0, a >= 0.
/// Columns of C are the generators extended with a final 1 (the sum row).
/// Pivoting is Dantzig (most negative reduced cost, lowest index on ties)
/// until the objective stalls, then Bland's rule, whose anti-cycling
/// guarantee ensures termination. Fully deterministic.
inline Phase1Result phase1_simplex(const std::vector<Vec>& cols, const Vec& b,
                                   std::size_t iteration_cap) {
    const std::size_t m = cols.size();
    const std::size_t r = b.size();
    const std::size_t total = m + r + 1; // variables + RHS
    std::vector<Vec> T(r + 1, Vec(total, 0.0));
    std::vector<std::size_t> basis(r);
    for (std::size_t i = 0; i < r; ++i) {
        const double sgn = (b[i] >= 0.0) ? 1.0 : -1.0;
        for (std::size_t j = 0; j < m; ++j) T[i][j] = sgn * cols[j][i];
        T[i][m + i] = 1.0;
        T[i][m + r] = sgn * b[i];
        basis[i] = m + i;
    }
    // Reduced-cost row for min sum(a): rc_j = -sum_i T(i,j) over mu columns.
    for (std::size_t j = 0; j < total; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < r; ++i) s += T[i][j];
        T[r][j] = (j >= m && j < m + r) ? 0.0 : -s;
    }
    const double eps = 1e-11;
    double last_objective = std::numeric_limits<double>::infinity();
    std::size_t stalled = 0;
    bool bland = false;
    for (std::size_t iter = 0; iter < iteration_cap; ++iter) {
        const double objective = -T[r][m + r];
        if (objective < last_objective - 1e-13) {
            last_objective = objective;
            stalled = 0;
        } else if (++stalled > 50) {
            bland = true;
        }
        std::size_t enter = m;
        if (bland) {
            for (std::size_t j = 0; j < m; ++j)
                if (T[r][j] < -eps) {
                    enter = j;
                    break;
                }
        } else {
            double best = -eps;
            for (std::size_t j = 0; j < m; ++j)
                if (T[r][j] < best) {
                    best = T[r][j];
                    enter = j;
                }
        }
        if (enter == m) {
            Phase1Result res;
            res.mu.assign(m, 0.0);
            for (std::size_t i = 0; i < r; ++i)
                if (basis[i] < m) res.mu[basis[i]] = T[i][m + r];
            res.objective = -T[r][m + r];
            return res;
        }
        std::size_t leave = r;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < r; ++i) {
            if (T[i][enter] <= eps) continue;
            const double ratio = T[i][m + r] / T[i][enter];
            if (ratio < best_ratio - 1e-15 ||
                (std::abs(ratio - best_ratio) <= 1e-15 && (leave == r || basis[i] < basis[leave]))) {
                best_ratio = ratio;
                leave = i;
            }
        }
        if (leave == r) throw NumericalFailure("phase1_simplex: unbounded pivot direction");
        const double piv = T[leave][enter];
        for (std::size_t j = 0; j < total; ++j) T[leave][j] /= piv;
        for (std::size_t i = 0; i <= r; ++i) {
            if (i == leave) continue;
            const double f = T[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < total; ++j) T[i][j] -= f * T[leave][j];
        }
        basis[leave] = enter;
    }
    throw NumericalFailure("phase1_simplex: iteration cap reached");
}

} // namespace detail

/// Convex-hull membership by LP feasibility: find mu >= 0, sum mu = 1 with
/// sum mu_i p_i = q. Deterministic for fixed inputs; monotone in tol since
/// the LP itself does not depend on it.
inline MembershipResult contains(const HullSample& hull, const Vec& query, double tol) {
    if (hull.reduced_points.empty()) throw InvalidInput("contains: hull has no generators");
    if (query.size() != hull.chart.ambient_dim())
        throw DimensionMismatch("contains: query has wrong dimension");
    const std::size_t d = hull.chart.dim();
    const std::size_t m = hull.reduced_points.size();

    const double diam = hull.bounding_diameter();
    const double off = hull.chart.off_chart_distance(query);
    if (off > 10.0 * tol * std::max(diam, 1e-12))
        throw OffChart("contains: query is " + std::to_string(off) +
                       " away from the trajectory's affine slice");
    const Vec q = hull.chart.project(query);

    if (diam <= 1e-300) {
        // All generators coincide.
        const Vec& p = hull.reduced_points.front();
        const double dist = dist2(q, p) / (1.0 + norm2(p));
        MembershipResult res;
        res.inside = dist <= tol;
        res.margin = res.inside ? tol - dist : dist;
        res.weights.assign(m, 0.0);
        res.weights[0] = 1.0;
        return res;
    }

    // Scale generators to unit bounding-box diameter around their center.
    Vec center(d, 0.0);
    {
        Vec lo = hull.reduced_points.front(), hi = lo;
        for (const Vec& p : hull.reduced_points)
            for (std::size_t k = 0; k < d; ++k) {
                lo[k] = std::min(lo[k], p[k]);
                hi[k] = std::max(hi[k], p[k]);
            }
        for (std::size_t k = 0; k < d; ++k) center[k] = 0.5 * (lo[k] + hi[k]);
    }
    const double scale = 1.0 / diam;
    std::vector<Vec> cols(m, Vec(d + 1, 0.0));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < d; ++k) cols[j][k] = scale * (hull.reduced_points[j][k] - center[k]);
        cols[j][d] = 1.0;
    }
    Vec rhs(d + 1, 0.0);
    for (std::size_t k = 0; k < d; ++k) rhs[k] = scale * (q[k] - center[k]);
    rhs[d] = 1.0;

    const auto lp = detail::phase1_simplex(cols, rhs, 50 * (m + d));

    // Euclidean residual of the best combination found.
    Vec res_vec = rhs;
    for (std::size_t j = 0; j < m; ++j)
        if (lp.mu[j] != 0.0)
            for (std::size_t k = 0; k <= d; ++k) res_vec[k] -= lp.mu[j] * cols[j][k];
    const double residual = norm2(res_vec);

    MembershipResult out;
    out.inside = residual <= tol;
    out.margin = out.inside ? tol - residual : residual;
    out.weights = lp.mu;
    double wsum = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
    if (wsum > 0.0)
        for (double& w : out.weights) w /= wsum;
    return out;
}

/// Random interior point: symmetric Dirichlet weights over a random
/// affinely independent subset of generators (d+1 of them when the sample
/// has full affine rank, fewer on degenerate clouds), lifted back to
/// ambient coordinates. Deterministic per seed.
inline Vec sample_interior(const HullSample& hull, std::uint64_t seed) {
    if (hull.reduced_points.empty())
        throw DegenerateSubspace("sample_interior: hull has no generators");
    const std::size_t d = hull.chart.dim();
    const std::size_t m = hull.reduced_points.size();
    Rng rng(seed);

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

    const double diam = hull.bounding_diameter();
    const double indep_tol = 1e-7 * std::max(diam, 1e-300);
    std::vector<std::size_t> chosen;
    std::vector<Vec> span; // orthonormal directions from the first chosen point
    for (std::size_t idx : order) {
        if (chosen.empty()) {
            chosen.push_back(idx);
            continue;
        }
        Vec delta = hull.reduced_points[idx] - hull.reduced_points[chosen.front()];
        for (const Vec& b : span) axpy(-dot(delta, b), b, delta);
        const double res = norm2(delta);
        if (res > indep_tol) {
            span.push_back((1.0 / res) * delta);
            chosen.push_back(idx);
        }
        if (chosen.size() == d + 1) break;
    }

    // Symmetric Dirichlet(1) weights via normalized exponentials.
    Vec w(chosen.size());
    double total = 0.0;
    for (double& v : w) {
        v = -std::log(1.0 - rng.u01());
        total += v;
    }
    if (total == 0.0) {
        w.assign(chosen.size(), 1.0 / static_cast<double>(chosen.size()));
    } else {
        for (double& v : w) v /= total;
    }
    Vec reduced(d, 0.0);
    for (std::size_t k = 0; k < chosen.size(); ++k) axpy(w[k], hull.reduced_points[chosen[k]], reduced);
    return hull.chart.lift(reduced);
}

} // namespace crnhull
