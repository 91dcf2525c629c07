#include <doctest.h>

#include <cmath>
#include <complex>

#include "crnhull/integrate.hpp"
#include "crnhull/linear.hpp"
#include "crnhull/random_network.hpp"
#include "crnhull/rng.hpp"
#include "support.hpp"

using namespace crnhull;
using namespace testsupport;

namespace {

/// Coefficient vector of the mode with exponent closest to lambda.
Vec mode_coefficients(const ClosedFormTrajectory& traj, double lambda) {
    double best = 1e300;
    const ClosedFormTrajectory::Mode* pick = nullptr;
    for (const auto& m : traj.terms)
        if (std::abs(m.exponent.real() - lambda) < best) {
            best = std::abs(m.exponent.real() - lambda);
            pick = &m;
        }
    REQUIRE(pick != nullptr);
    Vec out;
    for (const cplx& c : pick->coefficients) out.push_back(c.real());
    return out;
}

Laplacian random_diagonalizable_laplacian(std::size_t s, std::uint64_t seed) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const ReactionNetwork net = random_linear_network(s, 0.5, 3.0, derive_seed(seed, attempt));
        const Laplacian lap = build_laplacian(net);
        try {
            eigendecompose(lap.a_kappa);
            return lap;
        } catch (const NearDefective&) {
            continue;
        }
    }
    throw std::runtime_error("no diagonalizable draw found");
}

} // namespace

TEST_CASE("eigendecompose satisfies the eigenvector residual and biorthogonality bounds") {
    const Laplacian lap = build_laplacian(linear_triangle());
    const Mat& A = lap.a_kappa;
    const EigenSolution eig = eigendecompose(A);
    const double scale = frobenius_norm(A);
    const CMat Ac = CMat::from_real(A);

    for (std::size_t k = 0; k < 3; ++k) {
        CVec r(3), l(3);
        for (std::size_t i = 0; i < 3; ++i) {
            r[i] = eig.right(i, k);
            l[i] = eig.left(k, i);
        }
        const CVec Ar = cmatvec(Ac, r);
        const CVec lA = cvecmat(l, Ac);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::abs(Ar[i] - eig.eigenvalues[k] * r[i]) < 1e-8 * scale);
            CHECK(std::abs(lA[i] - eig.eigenvalues[k] * l[i]) < 1e-8 * scale);
        }
        for (std::size_t j = 0; j < 3; ++j) {
            cplx dotlr = 0.0;
            for (std::size_t i = 0; i < 3; ++i) dotlr += eig.left(j, i) * eig.right(i, k);
            CHECK(std::abs(dotlr - (j == k ? cplx(1.0) : cplx(0.0))) < 1e-8);
        }
    }
    // Ascending eigenvalue order.
    CHECK(eig.eigenvalues[0].real() == doctest::Approx(-12.0));
    CHECK(eig.eigenvalues[1].real() == doctest::Approx(-8.0));
    CHECK(eig.eigenvalues[2].real() == doctest::Approx(0.0));
}

TEST_CASE("solve_linear reproduces the triangle system's closed form") {
    const Laplacian lap = build_laplacian(linear_triangle());
    const ClosedFormTrajectory traj = solve_linear(lap, {2, 3, 5});

    const Vec c0 = mode_coefficients(traj, 0.0);
    const Vec c8 = mode_coefficients(traj, -8.0);
    const Vec c12 = mode_coefficients(traj, -12.0);
    CHECK(std::abs(c0[0] - 5.0 / 4.0) < 1e-9);
    CHECK(std::abs(c0[1] - 15.0 / 2.0) < 1e-9);
    CHECK(std::abs(c0[2] - 5.0 / 4.0) < 1e-9);
    CHECK(std::abs(c8[0] - 9.0 / 4.0) < 1e-9);
    CHECK(std::abs(c8[1] + 9.0 / 2.0) < 1e-9);
    CHECK(std::abs(c8[2] - 9.0 / 4.0) < 1e-9);
    CHECK(std::abs(c12[0] + 3.0 / 2.0) < 1e-9);
    CHECK(std::abs(c12[1]) < 1e-9);
    CHECK(std::abs(c12[2] - 3.0 / 2.0) < 1e-9);

    // Evaluation at t = 0 returns the start.
    const Vec at0 = traj.evaluate(0.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(at0[i] - traj.start[i]) < 1e-9);

    // Mass conservation along the curve.
    for (double t : {0.0, 0.05, 0.3, 1.0, 4.0}) {
        const Vec x = traj.evaluate(t);
        CHECK(std::abs(x[0] + x[1] + x[2] - 10.0) < 1e-9);
    }
}

TEST_CASE("solve_linear on the zero matrix gives a constant trajectory") {
    Laplacian zero{Mat(3, 3)};
    const ClosedFormTrajectory traj = solve_linear(zero, {1, 2, 3});
    for (double t : {0.0, 1.0, 17.0}) {
        const Vec x = traj.evaluate(t);
        CHECK(x[0] == doctest::Approx(1.0));
        CHECK(x[1] == doctest::Approx(2.0));
        CHECK(x[2] == doctest::Approx(3.0));
    }
    const Vec ss = steady_state(traj);
    CHECK(ss[0] == doctest::Approx(1.0));
    CHECK(ss[2] == doctest::Approx(3.0));
}

TEST_CASE("steady_state of the triangle system") {
    const ClosedFormTrajectory traj = solve_linear(build_laplacian(linear_triangle()), {2, 3, 5});
    const Vec ss = steady_state(traj);
    CHECK(std::abs(ss[0] - 1.25) < 1e-9);
    CHECK(std::abs(ss[1] - 7.5) < 1e-9);
    CHECK(std::abs(ss[2] - 1.25) < 1e-9);
}

TEST_CASE("steady_state matches long-horizon RK4 on random linear systems") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const Laplacian lap = random_diagonalizable_laplacian(3, seed);
        const Vec x0 = {1.0, 2.0, 0.5};
        const ClosedFormTrajectory traj = solve_linear(lap, x0);
        const Vec ss = steady_state(traj);

        double slowest = 1e300;
        for (const auto& m : traj.terms)
            if (std::abs(m.exponent) > 1e-10) slowest = std::min(slowest, -m.exponent.real());
        const double horizon = 50.0 / slowest;

        const ReactionNetwork lin = [&] {
            // Rebuild a network carrying this Laplacian so RK4 can run on it.
            ReactionNetwork net;
            net.species_count = 3;
            for (std::size_t i = 0; i < 3; ++i) {
                std::vector<int> e(3, 0);
                e[i] = 1;
                net.complexes.push_back(Complex{std::move(e)});
            }
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    if (i != j && lap.a_kappa(i, j) > 0.0)
                        net.edges.push_back({i, j, lap.a_kappa(i, j)});
            return net;
        }();
        IntegratorConfig cfg;
        cfg.step = 1e-3;
        cfg.max_time = horizon + 1.0;
        cfg.max_points = 2'000'000;
        cfg.steady_tol = 1e-13;
        const Trajectory num = integrate(build_vector_field(lin), x0, cfg);
        for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(num.points.back()[i] - ss[i]) < 1e-7);
    }
}

TEST_CASE("closed form agrees with RK4 on random diagonalizable systems") {
    for (std::uint64_t seed : {5u, 21u}) {
        const Laplacian lap = random_diagonalizable_laplacian(4, seed);
        const Vec x0 = {1.0, 0.5, 2.0, 1.5};
        const ClosedFormTrajectory cf = solve_linear(lap, x0);

        ReactionNetwork net;
        net.species_count = 4;
        for (std::size_t i = 0; i < 4; ++i) {
            std::vector<int> e(4, 0);
            e[i] = 1;
            net.complexes.push_back(Complex{std::move(e)});
        }
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                if (i != j && lap.a_kappa(i, j) > 0.0) net.edges.push_back({i, j, lap.a_kappa(i, j)});
        IntegratorConfig cfg;
        cfg.step = 1e-3;
        cfg.max_time = 2.5;
        cfg.steady_tol = 1e-16;
        cfg.max_points = 10000;
        const Trajectory num = integrate(build_vector_field(net), x0, cfg);
        for (double t = 0.1; t <= 2.0; t += 0.1) {
            const std::size_t idx = static_cast<std::size_t>(std::round(t / cfg.step));
            REQUIRE(idx < num.points.size());
            const Vec xc = cf.evaluate(num.times[idx]);
            for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(xc[i] - num.points[idx][i]) < 1e-6);
        }
    }
}

TEST_CASE("semigroup property of the closed form") {
    const Laplacian lap = build_laplacian(linear_triangle());
    const ClosedFormTrajectory traj = solve_linear(lap, {2, 3, 5});
    for (double t1 : {0.1, 0.7}) {
        const ClosedFormTrajectory shifted = solve_linear(lap, traj.evaluate(t1));
        for (double t : {0.0, 0.2, 1.3}) {
            const Vec a = shifted.evaluate(t);
            const Vec b = traj.evaluate(t1 + t);
            for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);
        }
    }
}

TEST_CASE("convex combinations evolve as combinations of shifted trajectories") {
    // Superposition: starting from c = sum mu_i x(t_i), the new trajectory
    // is sum mu_i x(t_i + t); this is why linear hulls are forward closed.
    for (std::uint64_t seed : {31u, 32u, 33u}) {
        const Laplacian lap = random_diagonalizable_laplacian(3, seed);
        const ClosedFormTrajectory base = solve_linear(lap, {1.5, 0.75, 2.0});
        Rng rng(seed);
        const double times[3] = {rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)};
        double mu[3] = {rng.u01() + 0.1, rng.u01() + 0.1, rng.u01() + 0.1};
        const double total = mu[0] + mu[1] + mu[2];
        for (double& m : mu) m /= total;

        Vec c(3, 0.0);
        for (int i = 0; i < 3; ++i) axpy(mu[i], base.evaluate(times[i]), c);
        const ClosedFormTrajectory shifted = solve_linear(lap, c);
        for (double t : {0.0, 0.4, 1.7}) {
            Vec expect(3, 0.0);
            for (int i = 0; i < 3; ++i) axpy(mu[i], base.evaluate(times[i] + t), expect);
            const Vec got = shifted.evaluate(t);
            for (int k = 0; k < 3; ++k) CHECK(std::abs(got[k] - expect[k]) < 1e-8);
        }
    }
}

TEST_CASE("near-defective rate matrices are rejected") {
    // Chain 1 -> 2 -> 3 with unit rates: eigenvalue -1 has a 2x2 Jordan block.
    Mat A(3, 3);
    A(0, 0) = -1;
    A(0, 1) = 1;
    A(1, 1) = -1;
    A(1, 2) = 1;
    CHECK_THROWS_AS(solve_linear(Laplacian{A}, {1, 1, 1}), NearDefective);
}

TEST_CASE("steady_state rejects positive exponents") {
    ClosedFormTrajectory traj;
    traj.start = {1.0};
    traj.terms.push_back({{cplx(1.0)}, cplx(0.5, 0.0)});
    CHECK_THROWS_AS(steady_state(traj), InvalidInput);
}

TEST_CASE("rational recognition via continued fractions") {
    CHECK(recognize_rational(8.0, 1e-9).num == 8);
    CHECK(recognize_rational(8.0, 1e-9).den == 1);
    CHECK(recognize_rational(0.0, 1e-9).num == 0);
    const Rational third = recognize_rational(1.0 / 3.0, 1e-9);
    CHECK(third.num == 1);
    CHECK(third.den == 3);
    const Rational r = recognize_rational(37.0 / 64.0, 1e-9);
    CHECK(r.num == 37);
    CHECK(r.den == 64);
    CHECK_THROWS_AS(recognize_rational(1.0 / 65.0, 1e-12), IrrationalEigenvalue);
    CHECK_THROWS_AS(recognize_rational(std::sqrt(2.0), 1e-9), IrrationalEigenvalue);
}

TEST_CASE("monomial factorization of the triangle system") {
    const ClosedFormTrajectory traj = solve_linear(build_laplacian(linear_triangle()), {2, 3, 5});
    const MonomialFactorization fac = monomial_factorization(traj, 1e-9);
    REQUIRE(fac.exponents.size() == 3);
    CHECK(fac.exponents[0].value() == doctest::Approx(0.0));
    CHECK(fac.exponents[1].value() == doctest::Approx(8.0));
    CHECK(fac.exponents[2].value() == doctest::Approx(12.0));

    const double expected[3][3] = {{5.0 / 4, 9.0 / 4, -3.0 / 2},
                                   {15.0 / 2, -9.0 / 2, 0.0},
                                   {5.0 / 4, 9.0 / 4, 3.0 / 2}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::abs(fac.affine_map(i, j) - expected[i][j]) < 1e-9);

    // x(t) = phi . (u^a) with u = exp(-t), over a u-grid.
    for (int g = 1; g <= 100; ++g) {
        const double u = g / 100.0;
        const Vec via_u = fac.evaluate_at_u(u);
        const Vec via_t = traj.evaluate(-std::log(u));
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(std::abs(via_u[i] - via_t[i]) < 1e-8 * (1.0 + std::abs(via_t[i])));
    }

    // The curve's endpoint u = 0 (infinite time) is the steady state, carried
    // by the zero-exponent column.
    const Vec at_zero = fac.evaluate_at_u(0.0);
    const Vec steady = steady_state(traj);
    for (std::size_t i = 0; i < 3; ++i) CHECK(at_zero[i] == doctest::Approx(steady[i]).epsilon(1e-12));
}

TEST_CASE("monomial factorization of the zero matrix is the constant map") {
    const ClosedFormTrajectory traj = solve_linear(Laplacian{Mat(2, 2)}, {3, 4});
    const MonomialFactorization fac = monomial_factorization(traj);
    for (const Rational& a : fac.exponents) CHECK(a.num == 0);
    const Vec at1 = fac.evaluate_at_u(1.0);
    CHECK(at1[0] == doctest::Approx(3.0));
    CHECK(at1[1] == doctest::Approx(4.0));
}

TEST_CASE("monomial factorization residual on a symmetric spectrum") {
    // Symmetric rate matrix with spectrum {0, -1, -3}: rates chosen so that
    // A = [[-1,1,0],[1,-2,1],[0,1,-1]] scaled to shift eigenvalues.
    Mat A(3, 3);
    const double vals[9] = {-1, 1, 0, 1, -2, 1, 0, 1, -1};
    std::copy(vals, vals + 9, A.a.begin());
    // Spectrum of this path Laplacian is {0, -1, -3}.
    const ClosedFormTrajectory traj = solve_linear(Laplacian{A}, {1, 2, 3});
    const MonomialFactorization fac = monomial_factorization(traj, 1e-9);
    CHECK(fac.exponents[0].value() == doctest::Approx(0.0));
    CHECK(fac.exponents[1].value() == doctest::Approx(1.0));
    CHECK(fac.exponents[2].value() == doctest::Approx(3.0));
    for (int g = 1; g <= 100; ++g) {
        const double u = g / 100.0;
        const Vec via_u = fac.evaluate_at_u(u);
        const Vec via_t = traj.evaluate(-std::log(u));
        for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(via_u[i] - via_t[i]) < 1e-8);
    }
}

TEST_CASE("monomial factorization rejects complex spectra") {
    // Strongly one-directional triangle: rotation-dominated spectrum.
    ReactionNetwork net;
    net.species_count = 3;
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<int> e(3, 0);
        e[i] = 1;
        net.complexes.push_back(Complex{std::move(e)});
    }
    net.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}};
    const ClosedFormTrajectory traj = solve_linear(build_laplacian(net), {1, 2, 3});
    CHECK_THROWS_AS(monomial_factorization(traj), ComplexEigenvalue);
}

TEST_CASE("verify_implicit_equations on the triangle trajectory") {
    const ClosedFormTrajectory traj = solve_linear(build_laplacian(linear_triangle()), {2, 3, 5});
    std::vector<double> ts;
    for (int i = 0; i <= 1000; ++i) ts.push_back(8.0 * i / 1000.0);

    const SparsePoly plane = poly({{1, {1, 0, 0}}, {1, {0, 1, 0}}, {1, {0, 0, 1}}, {-10, {0, 0, 0}}});
    CHECK(verify_implicit_equations(traj, {plane}, ts) < 1e-10);

    const SparsePoly cubic = poly({{8, {0, 3, 0}},
                                   {-99, {0, 2, 0}},
                                   {324, {0, 1, 1}},
                                   {324, {0, 0, 2}},
                                   {-270, {0, 1, 0}},
                                   {-3240, {0, 0, 1}},
                                   {4725, {0, 0, 0}}});
    CHECK(verify_implicit_equations(traj, {cubic}, ts) < 1e-7);

    // Constant trajectory against x1 - start.
    const ClosedFormTrajectory flat = solve_linear(Laplacian{Mat(2, 2)}, {3, 4});
    const SparsePoly probe = poly({{1, {1, 0}}, {-3, {0, 0}}});
    CHECK(verify_implicit_equations(flat, {probe}, ts) == 0.0);
}
