#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "crnhull/errors.hpp"
#include "crnhull/linalg.hpp"
#include "crnhull/polynomial.hpp"

namespace crnhull {

struct IntegratorConfig {
    double step = 1e-3;
    double max_time = 10.0;
    /// Relative steady threshold: stop when ||x'|| < steady_tol * (1 + ||x||).
    double steady_tol = 1e-9;
    std::size_t max_points = 10000;
};

/// Sampled solution curve with exact field evaluations as tangents.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> points;
    std::vector<Vec> tangents;
    bool reached_steady = false;

    std::size_t size() const { return points.size(); }
    std::size_t dimension() const { return points.empty() ? 0 : points.front().size(); }
};

/// Classical 4-stage Runge-Kutta update. Throws NonFinite if any stage
/// evaluates to NaN or infinity.
inline Vec rk4_step(const PolynomialVectorField& field, const Vec& x, double h) {
    const Vec k1 = evaluate_field(field, x);
    Vec tmp = x;
    axpy(0.5 * h, k1, tmp);
    const Vec k2 = evaluate_field(field, tmp);
    tmp = x;
    axpy(0.5 * h, k2, tmp);
    const Vec k3 = evaluate_field(field, tmp);
    tmp = x;
    axpy(h, k3, tmp);
    const Vec k4 = evaluate_field(field, tmp);
    Vec next = x;
    for (std::size_t i = 0; i < x.size(); ++i)
        next[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!all_finite(next) || !all_finite(k1) || !all_finite(k2) || !all_finite(k3) || !all_finite(k4))
        throw NonFinite("rk4_step: non-finite stage value");
    return next;
}

/// Fixed-step RK4 until the field norm drops below the steady threshold or
/// the time/point budget is exhausted. Components below -1e-6 abort with
/// NegativeBlowup rather than silently clipping.
inline Trajectory integrate(const PolynomialVectorField& field, const Vec& x0,
                            const IntegratorConfig& cfg) {
    if (!(cfg.step > 0.0) || !(cfg.max_time > cfg.step))
        throw InvalidInput("integrate: need 0 < step < max_time");
    if (!(cfg.steady_tol > 0.0)) throw InvalidInput("integrate: steady_tol must be positive");
    for (double v : x0)
        if (v < 0.0) throw InvalidInput("integrate: x0 must be componentwise non-negative");

    Trajectory traj;
    Vec x = x0;
    double t = 0.0;
    while (true) {
        const Vec dx = evaluate_field(field, x);
        if (!all_finite(dx)) throw NonFinite("integrate: field non-finite at t=" + std::to_string(t));
        traj.times.push_back(t);
        traj.points.push_back(x);
        traj.tangents.push_back(dx);
        if (norm2(dx) < cfg.steady_tol * (1.0 + norm2(x))) {
            traj.reached_steady = true;
            break;
        }
        if (traj.points.size() >= cfg.max_points || t + cfg.step > cfg.max_time + 1e-12) break;
        x = rk4_step(field, x, cfg.step);
        t += cfg.step;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < -1e-6)
                throw NegativeBlowup("integrate: component " + std::to_string(i) + " fell to " +
                                     std::to_string(x[i]) + " at t=" + std::to_string(t) +
                                     " (step too large)");
    }
    return traj;
}

/// Keeps the first point, then each point at distance >= min_spacing from
/// the last kept one; the final point always survives.
inline Trajectory thin_trajectory(const Trajectory& traj, double min_spacing) {
    if (!(min_spacing > 0.0)) throw InvalidInput("thin_trajectory: spacing must be positive");
    Trajectory out;
    out.reached_steady = traj.reached_steady;
    if (traj.points.empty()) return out;
    auto keep = [&](std::size_t i) {
        out.times.push_back(traj.times[i]);
        out.points.push_back(traj.points[i]);
        out.tangents.push_back(traj.tangents[i]);
    };
    keep(0);
    for (std::size_t i = 1; i + 1 < traj.points.size(); ++i)
        if (dist2(traj.points[i], out.points.back()) >= min_spacing) keep(i);
    if (traj.points.size() > 1) keep(traj.points.size() - 1);
    return out;
}

/// Every k-th sample (plus the final point's natural position), for grids
/// that want a fixed count rather than a spacing.
inline Trajectory decimate_trajectory(const Trajectory& traj, std::size_t every) {
    if (every == 0) throw InvalidInput("decimate_trajectory: stride must be positive");
    Trajectory out;
    out.reached_steady = traj.reached_steady;
    for (std::size_t i = 0; i < traj.points.size(); i += every) {
        out.times.push_back(traj.times[i]);
        out.points.push_back(traj.points[i]);
        out.tangents.push_back(traj.tangents[i]);
    }
    return out;
}

} // namespace crnhull
