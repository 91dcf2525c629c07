#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "crnhull/chart.hpp"
#include "crnhull/errors.hpp"
#include "crnhull/integrate.hpp"
#include "crnhull/linalg.hpp"

namespace crnhull {

/// Number of vertices r for which the bordered face matrix of a
/// d-dimensional hull is square: (d+1)/2 for odd d, d/2 + 1 for even d
/// (the even case pins one boundary point without a tangent column).
inline std::size_t face_size(std::size_t d) {
    if (d < 2) throw WrongDimension("face_size: hull dimension must be >= 2");
    return (d % 2 == 1) ? (d + 1) / 2 : d / 2 + 1;
}

/// Bordered face matrix in reduced coordinates: top row is r ones then p
/// zeros; below it r point columns and p tangent columns. Square exactly
/// when r + p = d + 1.
inline Mat face_matrix(const std::vector<Vec>& points, const std::vector<Vec>& tangents) {
    if (points.empty()) throw DimensionMismatch("face_matrix: need at least one point");
    const std::size_t d = points.front().size();
    const std::size_t r = points.size(), p = tangents.size();
    if (r + p != d + 1)
        throw DimensionMismatch("face_matrix: r + p = " + std::to_string(r + p) +
                                " but hull dimension + 1 = " + std::to_string(d + 1));
    Mat M(d + 1, d + 1);
    for (std::size_t c = 0; c < r; ++c) {
        if (points[c].size() != d) throw DimensionMismatch("face_matrix: point dimension mismatch");
        M(0, c) = 1.0;
        for (std::size_t i = 0; i < d; ++i) M(i + 1, c) = points[c][i];
    }
    for (std::size_t c = 0; c < p; ++c) {
        if (tangents[c].size() != d) throw DimensionMismatch("face_matrix: tangent dimension mismatch");
        M(0, r + c) = 0.0;
        for (std::size_t i = 0; i < d; ++i) M(i + 1, r + c) = tangents[c][i];
    }
    return M;
}

/// Product of column norms, the scale the determinant deadband is
/// measured against.
inline double column_scale(const Mat& M) {
    double prod = 1.0;
    for (std::size_t j = 0; j < M.cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < M.rows; ++i) s += M(i, j) * M(i, j);
        prod *= std::sqrt(s);
    }
    return prod;
}

/// All q x q minors of the ambient bordered matrix ((s+1) rows, q = r + p
/// columns), for the non-square fallback where no chart is available.
struct MinorVector {
    std::vector<double> minors; // one per row subset, lexicographic
    double max_abs = 0.0;
    int dominant_sign = 0;
};

inline MinorVector face_minors_ambient(const std::vector<Vec>& points,
                                       const std::vector<Vec>& tangents) {
    const std::size_t s = points.front().size();
    const std::size_t q = points.size() + tangents.size();
    if (q > s + 1) throw DimensionMismatch("face_minors_ambient: more columns than rows");
    Mat M(s + 1, q);
    for (std::size_t c = 0; c < points.size(); ++c) {
        M(0, c) = 1.0;
        for (std::size_t i = 0; i < s; ++i) M(i + 1, c) = points[c][i];
    }
    for (std::size_t c = 0; c < tangents.size(); ++c)
        for (std::size_t i = 0; i < s; ++i) M(i + 1, points.size() + c) = tangents[c][i];

    MinorVector out;
    std::vector<std::size_t> rows(q);
    for (std::size_t i = 0; i < q; ++i) rows[i] = i;
    while (true) {
        Mat sub(q, q);
        for (std::size_t i = 0; i < q; ++i)
            for (std::size_t j = 0; j < q; ++j) sub(i, j) = M(rows[i], j);
        const double det = lu_det(sub);
        out.minors.push_back(det);
        if (std::abs(det) > out.max_abs) {
            out.max_abs = std::abs(det);
            out.dominant_sign = (det > 0) - (det < 0);
        }
        // Next row combination.
        std::size_t i = q;
        while (i-- > 0) {
            if (rows[i] + (q - i) <= s) {
                ++rows[i];
                for (std::size_t j = i + 1; j < q; ++j) rows[j] = rows[j - 1] + 1;
                break;
            }
            if (i == 0) return out;
        }
    }
}

struct GridOptions {
    std::size_t stride = 3;
    std::size_t start = 2;
    double deadband = 1e-10;
    /// Worker threads for grid evaluation; cells are independent and land
    /// in fixed slots, so the result does not depend on the job count.
    std::size_t jobs = 1;
};

/// Determinant values and deadbanded signs of the face matrices over index
/// pairs (arity 2, symmetric with zero diagonal) or sorted triples
/// (arity 3). Grid index i addresses trajectory sample stride*i.
struct SignGrid {
    int arity = 2;
    std::size_t stride = 3;
    std::size_t start = 2;
    std::size_t count = 0; // grid side: indices start .. start+count-1
    double deadband = 1e-10;
    bool pinned_start = false;
    std::vector<double> values;
    std::vector<std::int8_t> signs;

    std::size_t pair_slot(std::size_t i, std::size_t j) const { return i * count + j; }

    double value_pair(std::size_t i, std::size_t j) const { return values[pair_slot(i, j)]; }
    int sign_pair(std::size_t i, std::size_t j) const { return signs[pair_slot(i, j)]; }

    /// Lexicographic rank of local indices i < j < k among C(count, 3).
    std::size_t triple_slot(std::size_t i, std::size_t j, std::size_t k) const {
        const std::size_t n = count;
        auto c2 = [](std::size_t m) { return m * (m - 1) / 2; };
        std::size_t off = 0;
        for (std::size_t a = 0; a < i; ++a) off += c2(n - 1 - a);
        const std::size_t q = j - 1 - i;
        off += q * (2 * (n - 1) - (i + j)) / 2;
        return off + (k - j - 1);
    }

    /// Value for arbitrary (possibly unsorted) triples; repeats give 0.
    double value_triple(std::size_t i, std::size_t j, std::size_t k) const {
        if (i == j || j == k || i == k) return 0.0;
        std::size_t a = i, b = j, c = k;
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        return values[triple_slot(a, b, c)];
    }

    int sign_triple(std::size_t i, std::size_t j, std::size_t k) const {
        if (i == j || j == k || i == k) return 0;
        std::size_t a = i, b = j, c = k;
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        return signs[triple_slot(a, b, c)];
    }

    bool has_both_signs() const {
        bool pos = false, neg = false;
        for (std::int8_t s : signs) {
            pos |= (s > 0);
            neg |= (s < 0);
        }
        return pos && neg;
    }
};

namespace detail {

struct ReducedSamples {
    std::vector<Vec> points;
    std::vector<Vec> tangents;
};

inline ReducedSamples project_samples(const Trajectory& traj, const AffineChart& chart,
                                      const GridOptions& opt, std::size_t& count) {
    if (traj.size() < 2) throw InvalidInput("sign grid: trajectory too short");
    if (opt.stride == 0) throw InvalidInput("sign grid: stride must be positive");
    const std::size_t max_index = (traj.size() - 1) / opt.stride;
    if (max_index < opt.start + 1) throw InvalidInput("sign grid: not enough samples for the stride");
    count = max_index - opt.start + 1;
    ReducedSamples rs;
    rs.points.reserve(count);
    rs.tangents.reserve(count);
    for (std::size_t i = opt.start; i <= max_index; ++i) {
        rs.points.push_back(chart.project(traj.points[i * opt.stride]));
        rs.tangents.push_back(chart.project_direction(traj.tangents[i * opt.stride]));
    }
    return rs;
}

inline std::int8_t deadband_sign(double det, double scale, double deadband) {
    if (std::abs(det) <= deadband * scale) return 0;
    return det > 0 ? 1 : -1;
}

/// Runs fn(i) for i in [0, count) across the requested workers.
inline void parallel_rows(std::size_t count, std::size_t jobs,
                          const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < std::min(jobs, count); ++j) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
}

} // namespace detail

/// Pair grid for hulls of dimension 3 (two interior points, two tangents)
/// or dimension 4 with the start point pinned as the tangent-free boundary
/// vertex. Symmetric by construction with an exactly zero diagonal.
inline SignGrid sign_grid_pairs(const Trajectory& traj, const AffineChart& chart,
                                const GridOptions& opt = {}) {
    const std::size_t d = chart.dim();
    const bool pinned = (d == 4);
    if (d != 3 && d != 4)
        throw WrongDimension("sign_grid_pairs: hull dimension " + std::to_string(d) +
                             "; pairs need 3 (plain) or 4 (start point pinned)");
    SignGrid grid;
    grid.arity = 2;
    grid.stride = opt.stride;
    grid.start = opt.start;
    grid.deadband = opt.deadband;
    grid.pinned_start = pinned;
    const auto rs = detail::project_samples(traj, chart, opt, grid.count);
    const Vec origin = chart.project(traj.points.front());

    grid.values.assign(grid.count * grid.count, 0.0);
    grid.signs.assign(grid.count * grid.count, 0);
    detail::parallel_rows(grid.count, opt.jobs, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < grid.count; ++j) {
            const std::vector<Vec> pts = pinned
                                             ? std::vector<Vec>{rs.points[i], rs.points[j], origin}
                                             : std::vector<Vec>{rs.points[i], rs.points[j]};
            const Mat M = face_matrix(pts, {rs.tangents[i], rs.tangents[j]});
            const double det = lu_det(M);
            const std::int8_t sg = detail::deadband_sign(det, column_scale(M), opt.deadband);
            grid.values[grid.pair_slot(i, j)] = det;
            grid.values[grid.pair_slot(j, i)] = det;
            grid.signs[grid.pair_slot(i, j)] = sg;
            grid.signs[grid.pair_slot(j, i)] = sg;
        }
    });
    return grid;
}

/// Triple grid for 5-dimensional hulls: three interior points with their
/// three tangents, enumerated over sorted triples.
inline SignGrid sign_grid_triples(const Trajectory& traj, const AffineChart& chart,
                                  const GridOptions& opt = {}) {
    const std::size_t d = chart.dim();
    if (d != 5)
        throw WrongDimension("sign_grid_triples: hull dimension " + std::to_string(d) +
                             "; triples need 5");
    SignGrid grid;
    grid.arity = 3;
    grid.stride = opt.stride;
    grid.start = opt.start;
    grid.deadband = opt.deadband;
    const auto rs = detail::project_samples(traj, chart, opt, grid.count);

    const std::size_t n = grid.count;
    const std::size_t total = n * (n - 1) * (n - 2) / 6;
    grid.values.assign(total, 0.0);
    grid.signs.assign(total, 0);
    detail::parallel_rows(n, opt.jobs, [&](std::size_t i) {
        if (i + 2 >= n) return;
        std::size_t slot = grid.triple_slot(i, i + 1, i + 2);
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k, ++slot) {
                const Mat M = face_matrix({rs.points[i], rs.points[j], rs.points[k]},
                                          {rs.tangents[i], rs.tangents[j], rs.tangents[k]});
                const double det = lu_det(M);
                grid.values[slot] = det;
                grid.signs[slot] = detail::deadband_sign(det, column_scale(M), opt.deadband);
            }
    });
    return grid;
}

/// Portable pixmap: positive red, negative blue, deadband white. Pair grids
/// render whole; triple grids render the slice at fixed third index.
inline void render_sign_grid(const SignGrid& grid, const std::string& path,
                             std::size_t slice_k = static_cast<std::size_t>(-1)) {
    if (grid.arity == 3 && slice_k >= grid.count)
        throw InvalidInput("render_sign_grid: triple grids need a slice index below the count");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("render_sign_grid: cannot open " + path);
    const std::size_t n = grid.count;
    out << "P6\n" << n << " " << n << "\n255\n";
    auto emit = [&](int sg) {
        unsigned char rgb[3];
        if (sg > 0) {
            rgb[0] = 205;
            rgb[1] = 45;
            rgb[2] = 40;
        } else if (sg < 0) {
            rgb[0] = 40;
            rgb[1] = 70;
            rgb[2] = 205;
        } else {
            rgb[0] = rgb[1] = rgb[2] = 255;
        }
        out.write(reinterpret_cast<const char*>(rgb), 3);
    };
    // Row 0 at the top is the largest j so the axes read like a plot.
    for (std::size_t row = 0; row < n; ++row) {
        const std::size_t j = n - 1 - row;
        for (std::size_t i = 0; i < n; ++i)
            emit(grid.arity == 2 ? grid.sign_pair(i, j) : grid.sign_triple(i, j, slice_k));
    }
    if (!out) throw IoError("render_sign_grid: write failed for " + path);
}

/// Values as CSV rows i,j[,k],det over the stored (sorted) tuples.
inline void write_grid_csv(const SignGrid& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_grid_csv: cannot open " + path);
    char buf[64];
    if (grid.arity == 2) {
        out << "i,j,det\n";
        for (std::size_t i = 0; i < grid.count; ++i)
            for (std::size_t j = i; j < grid.count; ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", grid.value_pair(i, j));
                out << (grid.start + i) << ',' << (grid.start + j) << ',' << buf << '\n';
            }
    } else {
        out << "i,j,k,det\n";
        std::size_t slot = 0;
        for (std::size_t i = 0; i < grid.count; ++i)
            for (std::size_t j = i + 1; j < grid.count; ++j)
                for (std::size_t k = j + 1; k < grid.count; ++k, ++slot) {
                    std::snprintf(buf, sizeof buf, "%.17g", grid.values[slot]);
                    out << (grid.start + i) << ',' << (grid.start + j) << ',' << (grid.start + k)
                        << ',' << buf << '\n';
                }
    }
    if (!out) throw IoError("write_grid_csv: write failed for " + path);
}

} // namespace crnhull
