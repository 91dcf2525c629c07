#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "crnhull/errors.hpp"
#include "crnhull/linalg.hpp"
#include "crnhull/network.hpp"
#include "crnhull/polynomial.hpp"

namespace crnhull {

/// Eigen-decomposition of A_kappa with biorthogonal left/right eigenvectors
/// (l_j . r_k = delta_jk; left vectors are rows of the inverse of the right
/// eigenvector matrix).
struct EigenSolution {
    CVec eigenvalues;    // ascending by (Re, Im)
    CMat right;          // column k is r_k
    CMat left;           // row k is l_k
    double condition_estimate = 0.0;
};

namespace detail {

/// Clusters sorted eigenvalues whose pairwise distance is below tol.
inline std::vector<std::vector<std::size_t>> cluster_eigenvalues(const CVec& eig, double tol) {
    std::vector<std::size_t> order(eig.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (eig[a].real() != eig[b].real()) return eig[a].real() < eig[b].real();
        return eig[a].imag() < eig[b].imag();
    });
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t idx : order) {
        if (!clusters.empty()) {
            const cplx rep = eig[clusters.back().front()];
            if (std::abs(eig[idx] - rep) <= tol) {
                clusters.back().push_back(idx);
                continue;
            }
        }
        clusters.push_back({idx});
    }
    return clusters;
}

} // namespace detail

/// Throws NearDefective when an eigenvalue's eigenspace is smaller than its
/// multiplicity or the eigenvector matrix condition exceeds 1e8; callers
/// fall back to numerical integration in that case.
inline EigenSolution eigendecompose(const Mat& A) {
    if (A.rows != A.cols) throw DimensionMismatch("eigendecompose: matrix not square");
    const std::size_t n = A.rows;
    EigenSolution sol;
    if (n == 0) return sol;

    const CVec raw = qr_eigenvalues(A);
    const double scale = std::max(frobenius_norm(A), 1e-30);
    const double cluster_tol = 2e-8 * scale;
    const double null_cutoff = 5e-9 * scale;

    const auto clusters = detail::cluster_eigenvalues(raw, cluster_tol);

    sol.right = CMat(n, n);
    sol.eigenvalues.assign(n, cplx(0.0));
    std::size_t col = 0;
    const CMat Ac = CMat::from_real(A);
    for (const auto& cluster : clusters) {
        cplx mu(0.0);
        for (std::size_t idx : cluster) mu += raw[idx];
        mu /= static_cast<double>(cluster.size());
        if (std::abs(mu.imag()) <= cluster_tol) mu = cplx(mu.real(), 0.0);

        CMat shifted = Ac;
        for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= mu;
        const auto null_basis = cnullspace(shifted, null_cutoff);
        if (null_basis.size() != cluster.size())
            throw NearDefective("eigendecompose: eigenvalue " + std::to_string(mu.real()) +
                                (mu.imag() >= 0 ? "+" : "") + std::to_string(mu.imag()) +
                                "i has eigenspace of dimension " + std::to_string(null_basis.size()) +
                                " but multiplicity " + std::to_string(cluster.size()));
        for (const CVec& v : null_basis) {
            sol.eigenvalues[col] = mu;
            for (std::size_t i = 0; i < n; ++i) sol.right(i, col) = v[i];
            ++col;
        }
    }

    CMat left;
    try {
        left = cinverse(sol.right);
    } catch (const NumericalFailure&) {
        throw NearDefective("eigendecompose: eigenvector matrix is singular");
    }
    sol.left = std::move(left);
    sol.condition_estimate = one_norm(sol.right) * one_norm(sol.left);
    if (!(sol.condition_estimate < 1e8))
        throw NearDefective("eigendecompose: eigenvector matrix condition estimate " +
                            std::to_string(sol.condition_estimate) + " exceeds 1e8");
    return sol;
}

/// Closed-form solution x(t) = sum_k (x0 . r_k) l_k exp(lambda_k t) for the
/// row-vector linear dynamics x' = x A_kappa.
struct ClosedFormTrajectory {
    struct Mode {
        CVec coefficients; // (x0 . r_k) l_k, one complex vector in C^s
        cplx exponent;     // lambda_k
    };
    std::vector<Mode> terms; // ordered ascending by (Re, Im) of the exponent
    Vec start;

    std::size_t dimension() const { return start.size(); }

    /// Real-part evaluation; the imaginary residue must stay below 1e-9.
    Vec evaluate(double t) const {
        const std::size_t s = dimension();
        CVec acc(s, cplx(0.0));
        for (const Mode& m : terms) {
            const cplx g = std::exp(m.exponent * t);
            for (std::size_t i = 0; i < s; ++i) acc[i] += m.coefficients[i] * g;
        }
        Vec x(s);
        for (std::size_t i = 0; i < s; ++i) {
            if (std::abs(acc[i].imag()) > 1e-9 * (1.0 + std::abs(acc[i].real())))
                throw NumericalFailure("closed form: imaginary residue " +
                                       std::to_string(acc[i].imag()) + " at t=" + std::to_string(t));
            x[i] = acc[i].real();
        }
        return x;
    }
};

inline ClosedFormTrajectory solve_linear(const Laplacian& lap, const Vec& x0) {
    const std::size_t n = lap.size();
    if (x0.size() != n) throw DimensionMismatch("solve_linear: x0 has wrong dimension");
    for (double v : x0)
        if (!(v > 0.0)) throw InvalidInput("solve_linear: x0 must be componentwise positive");

    const EigenSolution eig = eigendecompose(lap.a_kappa);
    CVec cx0(n);
    for (std::size_t i = 0; i < n; ++i) cx0[i] = x0[i];

    ClosedFormTrajectory traj;
    traj.start = x0;
    for (std::size_t k = 0; k < n; ++k) {
        cplx amp(0.0);
        for (std::size_t i = 0; i < n; ++i) amp += cx0[i] * eig.right(i, k);
        ClosedFormTrajectory::Mode mode;
        mode.exponent = eig.eigenvalues[k];
        mode.coefficients.resize(n);
        for (std::size_t j = 0; j < n; ++j) mode.coefficients[j] = amp * eig.left(k, j);
        traj.terms.push_back(std::move(mode));
    }
    return traj;
}

/// Limit t -> infinity: the sum of the zero-exponent terms. Requires all
/// exponents to have non-positive real part.
inline Vec steady_state(const ClosedFormTrajectory& traj) {
    const std::size_t s = traj.dimension();
    CVec acc(s, cplx(0.0));
    for (const auto& m : traj.terms) {
        if (m.exponent.real() > 1e-10)
            throw InvalidInput("steady_state: exponent with positive real part " +
                               std::to_string(m.exponent.real()));
        if (std::abs(m.exponent) <= 1e-10)
            for (std::size_t i = 0; i < s; ++i) acc[i] += m.coefficients[i];
    }
    Vec x(s);
    for (std::size_t i = 0; i < s; ++i) x[i] = acc[i].real();
    return x;
}

/// Rational p/q with q <= max_den recovered by continued fractions, or
/// throws IrrationalEigenvalue.
struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline Rational recognize_rational(double x, double tol, long long max_den = 64) {
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int it = 0; it < 64; ++it) {
        const double fl = std::floor(v);
        const long long a = static_cast<long long>(fl);
        const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double approx = static_cast<double>(p1) / static_cast<double>(q1);
        if (std::abs(approx - x) <= tol) return {p1, q1};
        const double frac = v - fl;
        if (frac < 1e-15) break;
        v = 1.0 / frac;
    }
    throw IrrationalEigenvalue("no rational with denominator <= " + std::to_string(max_den) +
                               " within " + std::to_string(tol) + " of " + std::to_string(x));
}

/// Affine factorization of the trajectory onto the monomial curve
/// u -> (u^{a_1}, ..., u^{a_n}) with u = exp(-t): x(t) = phi . u^a.
struct MonomialFactorization {
    std::vector<Rational> exponents; // a_k = -lambda_k, ascending
    Mat affine_map;                  // s x n; column k multiplies u^{a_k}

    Vec evaluate_at_u(double u) const {
        const std::size_t n = exponents.size();
        Vec powers(n);
        for (std::size_t k = 0; k < n; ++k)
            powers[k] = std::pow(u, exponents[k].value());
        return matvec(affine_map, powers);
    }
};

inline MonomialFactorization monomial_factorization(const ClosedFormTrajectory& traj,
                                                    double tol_rational = 1e-9) {
    const std::size_t s = traj.dimension();
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t k = 0; k < traj.terms.size(); ++k) {
        const cplx lam = traj.terms[k].exponent;
        if (std::abs(lam.imag()) > 1e-10)
            throw ComplexEigenvalue("monomial factorization undefined for complex eigenvalue");
        double a = -lam.real();
        if (a < 0.0) {
            if (a < -1e-9) throw InvalidInput("monomial factorization: positive-real eigenvalue");
            a = 0.0;
        }
        order.emplace_back(a, k);
    }
    std::sort(order.begin(), order.end());

    MonomialFactorization fac;
    fac.affine_map = Mat(s, traj.terms.size());
    for (std::size_t col = 0; col < order.size(); ++col) {
        fac.exponents.push_back(recognize_rational(order[col].first, tol_rational));
        const auto& coeff = traj.terms[order[col].second].coefficients;
        for (std::size_t i = 0; i < s; ++i) fac.affine_map(i, col) = coeff[i].real();
    }
    return fac;
}

/// Max over sampled times of |p(x(t))| / (1 + ||coefficients of p||_2).
inline double verify_implicit_equations(const ClosedFormTrajectory& traj,
                                        const std::vector<SparsePoly>& polys,
                                        const std::vector<double>& t_samples) {
    double worst = 0.0;
    for (double t : t_samples) {
        const Vec x = traj.evaluate(t);
        for (const SparsePoly& p : polys) {
            double cn = 0.0;
            for (const Term& term : p.terms) cn += term.coeff * term.coeff;
            const double residual = std::abs(p.evaluate(x)) / (1.0 + std::sqrt(cn));
            worst = std::max(worst, residual);
        }
    }
    return worst;
}

} // namespace crnhull
