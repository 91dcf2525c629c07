#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "crnhull/errors.hpp"

namespace crnhull {

using Vec = std::vector<double>;
using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist2(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline Vec operator+(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec operator*(double s, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

/// r += s*a
inline void axpy(double s, const Vec& a, Vec& r) {
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += s * a[i];
}

inline bool all_finite(const Vec& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Dense real matrix, row-major
// ---------------------------------------------------------------------------

struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    Vec row(std::size_t i) const { return Vec(a.begin() + i * cols, a.begin() + (i + 1) * cols); }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

/// y = A x   (A: m x n, x: n)
inline Vec matvec(const Mat& A, const Vec& x) {
    if (x.size() != A.cols) throw DimensionMismatch("matvec: size mismatch");
    Vec y(A.rows, 0.0);
    for (std::size_t i = 0; i < A.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

/// y = x A   (row vector times matrix; x: m, A: m x n)
inline Vec vecmat(const Vec& x, const Mat& A) {
    if (x.size() != A.rows) throw DimensionMismatch("vecmat: size mismatch");
    Vec y(A.cols, 0.0);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) y[j] += x[i] * A(i, j);
    return y;
}

inline double frobenius_norm(const Mat& A) {
    double s = 0.0;
    for (double v : A.a) s += v * v;
    return std::sqrt(s);
}

/// Determinant by LU with partial pivoting. Returns 0 on exact singularity.
inline double lu_det(Mat A) {
    if (A.rows != A.cols) throw DimensionMismatch("lu_det: matrix not square");
    const std::size_t n = A.rows;
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double big = std::abs(A(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(A(i, k));
            if (v > big) {
                big = v;
                piv = i;
            }
        }
        if (big == 0.0) return 0.0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
            det = -det;
        }
        det *= A(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = A(i, k) / A(k, k);
            for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
        }
    }
    return det;
}

// ---------------------------------------------------------------------------
// Orthonormal column basis via one-sided Jacobi
// ---------------------------------------------------------------------------

/// Orthonormal basis of the span of `columns` (each a vector in R^m).
/// Directions whose singular value falls below rel_cutoff * sigma_max are
/// dropped. Also reports the retained singular values if requested.
inline std::vector<Vec> orthonormal_span(std::vector<Vec> columns, double rel_cutoff = 1e-9,
                                         Vec* singular_values = nullptr) {
    std::vector<Vec>& c = columns;
    const std::size_t k = c.size();
    if (k == 0) return {};
    // One-sided Jacobi: rotate column pairs until mutually orthogonal.
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < k; ++p) {
            for (std::size_t q = p + 1; q < k; ++q) {
                const double app = dot(c[p], c[p]);
                const double aqq = dot(c[q], c[q]);
                const double apq = dot(c[p], c[q]);
                if (std::abs(apq) <= 1e-15 * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t i = 0; i < c[p].size(); ++i) {
                    const double vp = c[p][i], vq = c[q][i];
                    c[p][i] = cs * vp - sn * vq;
                    c[q][i] = sn * vp + cs * vq;
                }
            }
        }
        if (!rotated) break;
    }
    std::vector<std::pair<double, std::size_t>> sv;
    for (std::size_t j = 0; j < k; ++j) sv.emplace_back(norm2(c[j]), j);
    std::sort(sv.begin(), sv.end(), [](auto& x, auto& y) { return x.first > y.first; });
    const double smax = sv.front().first;
    std::vector<Vec> basis;
    if (singular_values) singular_values->clear();
    for (auto& [s, j] : sv) {
        if (smax == 0.0 || s <= rel_cutoff * smax) break;
        basis.push_back((1.0 / s) * c[j]);
        if (singular_values) singular_values->push_back(s);
    }
    return basis;
}

/// Affine rank of a point cloud: rank of (p_i - centroid) with a relative
/// singular-value cutoff.
inline std::size_t affine_rank(const std::vector<Vec>& points, double rel_cutoff = 1e-8) {
    if (points.size() <= 1) return 0;
    const std::size_t m = points[0].size();
    Vec centroid(m, 0.0);
    for (const Vec& p : points) axpy(1.0, p, centroid);
    centroid = (1.0 / static_cast<double>(points.size())) * centroid;
    std::vector<Vec> diffs;
    diffs.reserve(points.size());
    for (const Vec& p : points) diffs.push_back(p - centroid);
    return orthonormal_span(std::move(diffs), rel_cutoff).size();
}

// ---------------------------------------------------------------------------
// Symmetric Jacobi eigensolver (for small Gram matrices)
// ---------------------------------------------------------------------------

/// Eigen-decomposition of a symmetric matrix; eigenvalues descending,
/// eigenvectors as rows of the returned matrix.
inline void symmetric_eigen(Mat A, Vec& eigenvalues, Mat& eigenvectors) {
    const std::size_t n = A.rows;
    Mat V = Mat::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (std::sqrt(off) <= 1e-14 * (1.0 + frobenius_norm(A))) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (A(p, q) == 0.0) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                const double t =
                    (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = cs * aip - sn * aiq;
                    A(i, q) = sn * aip + cs * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double apj = A(p, j), aqj = A(q, j);
                    A(p, j) = cs * apj - sn * aqj;
                    A(q, j) = sn * apj + cs * aqj;
                    const double vpj = V(p, j), vqj = V(q, j);
                    V(p, j) = cs * vpj - sn * vqj;
                    V(q, j) = sn * vpj + cs * vqj;
                }
            }
        }
    }
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < n; ++i) order.emplace_back(A(i, i), i);
    std::sort(order.begin(), order.end(), [](auto& x, auto& y) { return x.first > y.first; });
    eigenvalues.assign(n, 0.0);
    eigenvectors = Mat(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        eigenvalues[i] = order[i].first;
        for (std::size_t j = 0; j < n; ++j) eigenvectors(i, j) = V(order[i].second, j);
    }
}

// ---------------------------------------------------------------------------
// Dense complex matrix and factorizations for the eigensolver
// ---------------------------------------------------------------------------

struct CMat {
    std::size_t rows = 0, cols = 0;
    CVec a;

    CMat() = default;
    CMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, cplx(0.0, 0.0)) {}

    cplx& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    cplx operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static CMat identity(std::size_t n) {
        CMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static CMat from_real(const Mat& A) {
        CMat m(A.rows, A.cols);
        for (std::size_t i = 0; i < A.a.size(); ++i) m.a[i] = A.a[i];
        return m;
    }
};

inline double one_norm(const CMat& A) {
    double best = 0.0;
    for (std::size_t j = 0; j < A.cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < A.rows; ++i) s += std::abs(A(i, j));
        best = std::max(best, s);
    }
    return best;
}

inline CVec cmatvec(const CMat& A, const CVec& x) {
    CVec y(A.rows, cplx(0.0));
    for (std::size_t i = 0; i < A.rows; ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline CVec cvecmat(const CVec& x, const CMat& A) {
    CVec y(A.cols, cplx(0.0));
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) y[j] += x[i] * A(i, j);
    return y;
}

/// Inverse by Gauss-Jordan with partial pivoting.
inline CMat cinverse(CMat A) {
    if (A.rows != A.cols) throw DimensionMismatch("cinverse: matrix not square");
    const std::size_t n = A.rows;
    CMat I = CMat::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double big = std::abs(A(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A(i, k)) > big) {
                big = std::abs(A(i, k));
                piv = i;
            }
        if (big == 0.0) throw NumericalFailure("cinverse: singular matrix");
        if (piv != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(A(k, j), A(piv, j));
                std::swap(I(k, j), I(piv, j));
            }
        const cplx d = A(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            A(k, j) /= d;
            I(k, j) /= d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const cplx f = A(i, k);
            if (f == cplx(0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                A(i, j) -= f * A(k, j);
                I(i, j) -= f * I(k, j);
            }
        }
    }
    return I;
}

/// Nullspace basis of a complex matrix via Gaussian elimination with full
/// pivoting; directions with pivot magnitude <= cutoff are treated as null.
inline std::vector<CVec> cnullspace(CMat A, double cutoff) {
    const std::size_t m = A.rows, n = A.cols;
    std::vector<std::size_t> colperm(n);
    for (std::size_t j = 0; j < n; ++j) colperm[j] = j;
    std::size_t rank = 0;
    for (std::size_t k = 0; k < std::min(m, n); ++k) {
        std::size_t pi = k, pj = k;
        double big = 0.0;
        for (std::size_t i = k; i < m; ++i)
            for (std::size_t j = k; j < n; ++j)
                if (std::abs(A(i, j)) > big) {
                    big = std::abs(A(i, j));
                    pi = i;
                    pj = j;
                }
        if (big <= cutoff) break;
        if (pi != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(pi, j));
        if (pj != k) {
            for (std::size_t i = 0; i < m; ++i) std::swap(A(i, k), A(i, pj));
            std::swap(colperm[k], colperm[pj]);
        }
        for (std::size_t i = k + 1; i < m; ++i) {
            const cplx f = A(i, k) / A(k, k);
            A(i, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
        }
        ++rank;
    }
    // Back substitution: free columns rank..n-1 generate the nullspace.
    std::vector<CVec> basis;
    for (std::size_t f = rank; f < n; ++f) {
        CVec z(n, cplx(0.0));
        z[f] = 1.0;
        for (std::size_t i = rank; i-- > 0;) {
            cplx s = A(i, f);
            for (std::size_t j = i + 1; j < rank; ++j) s += A(i, j) * z[j];
            z[i] = -s / A(i, i);
        }
        CVec v(n, cplx(0.0));
        for (std::size_t j = 0; j < n; ++j) v[colperm[j]] = z[j];
        double nv = 0.0;
        for (const cplx& c : v) nv += std::norm(c);
        nv = std::sqrt(nv);
        for (cplx& c : v) c /= nv;
        basis.push_back(std::move(v));
    }
    return basis;
}

namespace detail {

/// Reduce a complex square matrix to upper Hessenberg form in place
/// (Householder, vectors not accumulated).
inline void hessenberg(CMat& H) {
    const std::size_t n = H.rows;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) scale += std::abs(H(i, k));
        if (scale == 0.0) continue;
        CVec v(n, cplx(0.0));
        double normx = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = H(i, k) / scale;
            normx += std::norm(v[i]);
        }
        normx = std::sqrt(normx);
        if (normx == 0.0) continue;
        const cplx x0 = v[k + 1];
        const cplx phase = (std::abs(x0) == 0.0) ? cplx(1.0) : x0 / std::abs(x0);
        v[k + 1] += phase * normx;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 == 0.0) continue;
        // H <- (I - 2 v v*/|v|^2) H (I - 2 v v*/|v|^2)
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * H(i, j);
            s *= 2.0 / vnorm2;
            for (std::size_t i = k + 1; i < n; ++i) H(i, j) -= s * v[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += H(i, j) * v[j];
            s *= 2.0 / vnorm2;
            for (std::size_t j = k + 1; j < n; ++j) H(i, j) -= s * std::conj(v[j]);
        }
    }
}

} // namespace detail

/// Eigenvalues of a real square matrix via complex shifted QR iteration on
/// the Hessenberg form. Unordered; conjugate symmetry is not enforced.
inline CVec qr_eigenvalues(const Mat& Areal) {
    if (Areal.rows != Areal.cols) throw DimensionMismatch("qr_eigenvalues: matrix not square");
    const std::size_t n = Areal.rows;
    if (n == 0) return {};
    CMat H = CMat::from_real(Areal);
    detail::hessenberg(H);
    const double hnorm = one_norm(H) + 1e-300;

    CVec eig(n, cplx(0.0));
    std::size_t hi = n - 1;
    int iter = 0;
    const int max_iter_per_eig = 80;
    int since_deflate = 0;
    while (true) {
        // Deflate trailing 1x1 blocks.
        while (true) {
            if (hi == 0) {
                eig[0] = H(0, 0);
                return eig;
            }
            if (std::abs(H(hi, hi - 1)) <=
                1e-15 * (std::abs(H(hi - 1, hi - 1)) + std::abs(H(hi, hi)) + hnorm * 1e-2)) {
                eig[hi] = H(hi, hi);
                --hi;
                since_deflate = 0;
                continue;
            }
            break;
        }
        if (++iter > max_iter_per_eig * static_cast<int>(n))
            throw NumericalFailure("qr_eigenvalues: QR iteration did not converge");

        // Active block [lo..hi].
        std::size_t lo = hi;
        while (lo > 0 && std::abs(H(lo, lo - 1)) >
                             1e-15 * (std::abs(H(lo - 1, lo - 1)) + std::abs(H(lo, lo)) + hnorm * 1e-2))
            --lo;

        // Wilkinson shift from the trailing 2x2, with an occasional
        // exceptional shift to break symmetry stalls.
        cplx shift;
        if (++since_deflate % 12 == 0) {
            shift = cplx(std::abs(H(hi, hi - 1)), 0.0) * 1.5;
        } else {
            const cplx a = H(hi - 1, hi - 1), b = H(hi - 1, hi);
            const cplx c = H(hi, hi - 1), d = H(hi, hi);
            const cplx tr = a + d;
            const cplx disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
            const cplx l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
            shift = (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
        }

        // Explicit shifted QR step on the active block via Givens rotations.
        const std::size_t m = hi - lo + 1;
        std::vector<std::array<cplx, 2>> rot(m - 1);
        for (std::size_t i = lo; i <= hi; ++i) H(i, i) -= shift;
        for (std::size_t k = lo; k < hi; ++k) {
            const cplx x = H(k, k), y = H(k + 1, k);
            const double r = std::hypot(std::abs(x), std::abs(y));
            cplx cs(1.0), sn(0.0);
            if (r > 0.0) {
                cs = x / r;
                sn = y / r;
            }
            rot[k - lo] = {cs, sn};
            for (std::size_t j = k; j <= hi; ++j) {
                const cplx t1 = H(k, j), t2 = H(k + 1, j);
                H(k, j) = std::conj(cs) * t1 + std::conj(sn) * t2;
                H(k + 1, j) = -sn * t1 + cs * t2;
            }
        }
        for (std::size_t k = lo; k < hi; ++k) {
            const cplx cs = rot[k - lo][0], sn = rot[k - lo][1];
            for (std::size_t i = lo; i <= std::min(hi, k + 2); ++i) {
                const cplx t1 = H(i, k), t2 = H(i, k + 1);
                H(i, k) = t1 * cs + t2 * sn;
                H(i, k + 1) = -t1 * std::conj(sn) + t2 * std::conj(cs);
            }
        }
        for (std::size_t i = lo; i <= hi; ++i) H(i, i) += shift;
    }
}

} // namespace crnhull
