#pragma once

#include <cstddef>
#include <vector>

#include "crnhull/errors.hpp"
#include "crnhull/integrate.hpp"
#include "crnhull/linalg.hpp"
#include "crnhull/network.hpp"

namespace crnhull {

/// Orthonormal chart of the affine slice x0 + P the trajectory lives in.
/// project/lift are mutually inverse on that slice.
struct AffineChart {
    Vec origin;
    std::vector<Vec> basis; // d orthonormal vectors in R^s

    std::size_t ambient_dim() const { return origin.size(); }
    std::size_t dim() const { return basis.size(); }

    Vec project(const Vec& x) const {
        Vec xi(basis.size());
        const Vec delta = x - origin;
        for (std::size_t k = 0; k < basis.size(); ++k) xi[k] = dot(delta, basis[k]);
        return xi;
    }

    /// Projects a direction (no origin shift), e.g. a tangent vector.
    Vec project_direction(const Vec& v) const {
        Vec xi(basis.size());
        for (std::size_t k = 0; k < basis.size(); ++k) xi[k] = dot(v, basis[k]);
        return xi;
    }

    Vec lift(const Vec& xi) const {
        Vec x = origin;
        for (std::size_t k = 0; k < basis.size(); ++k) axpy(xi[k], basis[k], x);
        return x;
    }

    /// Distance from x to the affine slice.
    double off_chart_distance(const Vec& x) const {
        Vec r = x - origin;
        for (const Vec& b : basis) axpy(-dot(x - origin, b), b, r);
        return norm2(r);
    }
};

inline AffineChart make_chart(const StoichiometrySubspace& sub, const Vec& x0) {
    if (sub.rank() == 0) throw DegenerateSubspace("make_chart: stoichiometry subspace has rank 0");
    if (x0.size() != sub.ambient_dim) throw DimensionMismatch("make_chart: x0 has wrong dimension");
    return AffineChart{x0, sub.basis};
}

inline AffineChart make_chart(const ReactionNetwork& net, const Vec& x0) {
    return make_chart(stoichiometry_subspace(net), x0);
}

/// Chart estimated from tangent samples when only the ODE system is known:
/// P is the span of the tangents, orthonormalized with a singular-value
/// cutoff of 1e-8 relative to the largest. Works on (subsampled) tangent
/// columns directly; forming the Gram matrix would square the cutoff down
/// to the eigensolver's noise floor.
inline AffineChart make_chart(const Trajectory& traj, double sv_cutoff = 1e-8) {
    if (traj.points.empty()) throw InvalidInput("make_chart: empty trajectory");
    const std::size_t max_columns = 512;
    const std::size_t every = std::max<std::size_t>(1, traj.tangents.size() / max_columns);
    std::vector<Vec> cols;
    for (std::size_t i = 0; i < traj.tangents.size(); i += every) cols.push_back(traj.tangents[i]);
    AffineChart chart;
    chart.origin = traj.points.front();
    chart.basis = orthonormal_span(std::move(cols), sv_cutoff);
    if (chart.basis.empty()) throw DegenerateSubspace("make_chart: tangents span nothing");
    return chart;
}

} // namespace crnhull
