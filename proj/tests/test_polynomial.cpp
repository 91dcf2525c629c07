#include <doctest.h>

#include <cmath>

#include "crnhull/polynomial.hpp"
#include "crnhull/rng.hpp"
#include "support.hpp"

using namespace crnhull;
using namespace testsupport;

namespace {

// Independent oracle: evaluate a term list directly with std::pow, no
// sharing with SparsePoly::evaluate.
double naive_eval(const std::vector<Term>& terms, const Vec& x) {
    double s = 0.0;
    for (const Term& t : terms) {
        double m = t.coeff;
        for (std::size_t j = 0; j < x.size(); ++j) m *= std::pow(x[j], t.exponents[j]);
        s += m;
    }
    return s;
}

double coefficient(const SparsePoly& p, const std::vector<int>& exps) {
    for (const Term& t : p.terms)
        if (t.exponents == exps) return t.coeff;
    return 0.0;
}

} // namespace

TEST_CASE("build_vector_field reproduces the five-species ODE system") {
    const std::array<double, 6> k = {1.5, 2.0, 0.5, 3.0, 1.25, 2.75};
    const PolynomialVectorField f = build_vector_field(triangle5(k));
    const std::vector<int> m13 = {1, 0, 1, 0, 0}; // x1 x3
    const std::vector<int> m4 = {0, 0, 0, 1, 0};  // x4
    const std::vector<int> m25 = {0, 1, 0, 0, 2}; // x2 x5^2

    // dx1 = (-k1-k5) x1 x3 + k2 x4 + k6 x2 x5^2, and dx3 identical.
    for (std::size_t comp : {std::size_t{0}, std::size_t{2}}) {
        CHECK(coefficient(f.components[comp], m13) == -k[0] - k[4]);
        CHECK(coefficient(f.components[comp], m4) == k[1]);
        CHECK(coefficient(f.components[comp], m25) == k[5]);
    }
    // dx2 = k5 x1 x3 + k4 x4 - (k3+k6) x2 x5^2; dx5 = 2 dx2.
    CHECK(coefficient(f.components[1], m13) == k[4]);
    CHECK(coefficient(f.components[1], m4) == k[3]);
    CHECK(coefficient(f.components[1], m25) == -k[2] - k[5]);
    CHECK(coefficient(f.components[4], m13) == 2 * k[4]);
    CHECK(coefficient(f.components[4], m4) == 2 * k[3]);
    CHECK(coefficient(f.components[4], m25) == 2 * (-k[2] - k[5]));
    // dx4 = k1 x1 x3 - (k2+k4) x4 + k3 x2 x5^2.
    CHECK(coefficient(f.components[3], m13) == k[0]);
    CHECK(coefficient(f.components[3], m4) == -k[1] - k[3]);
    CHECK(coefficient(f.components[3], m25) == k[2]);
}

TEST_CASE("symmetric two-species exchange") {
    ReactionNetwork net;
    net.species_count = 2;
    net.complexes = {Complex{{1, 0}}, Complex{{0, 1}}};
    net.edges = {{0, 1, 1.0}, {1, 0, 1.0}};
    const PolynomialVectorField f = build_vector_field(net);
    CHECK(coefficient(f.components[0], {1, 0}) == -1.0);
    CHECK(coefficient(f.components[0], {0, 1}) == 1.0);
    CHECK(coefficient(f.components[1], {1, 0}) == 1.0);
    CHECK(coefficient(f.components[1], {0, 1}) == -1.0);
}

TEST_CASE("evaluate_field on the linear triangle vanishes at the stable point") {
    const PolynomialVectorField f = build_vector_field(linear_triangle());
    const Vec dx = evaluate_field(f, {5.0 / 4.0, 15.0 / 2.0, 5.0 / 4.0});
    for (double v : dx) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("evaluate_field at the origin and against the naive oracle") {
    const PolynomialVectorField f = curve3d_field();
    const Vec zero = evaluate_field(f, {0, 0, 0, 0});
    for (double v : zero) CHECK(v == 0.0);

    const Vec x0 = curve3d_x0();
    const Vec dx = evaluate_field(f, x0);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(dx[i] == doctest::Approx(naive_eval(f.components[i].terms, x0)).epsilon(1e-13));

    CHECK_THROWS_AS(evaluate_field(f, {1.0, 2.0}), DimensionMismatch);

    // Random points, all three pinned systems.
    Rng rng(99);
    for (const PolynomialVectorField& field : {curve3d_field(), curve4d_field(), curve5d_field()}) {
        for (int rep = 0; rep < 10; ++rep) {
            Vec x(field.species_count);
            for (double& v : x) v = rng.uniform(0.0, 4.0);
            const Vec got = evaluate_field(field, x);
            for (std::size_t i = 0; i < field.species_count; ++i)
                CHECK(got[i] ==
                      doctest::Approx(naive_eval(field.components[i].terms, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("mass-action admissibility") {
    CHECK(check_mass_action_admissible(curve3d_field()));
    CHECK(check_mass_action_admissible(curve4d_field()));
    CHECK(check_mass_action_admissible(curve5d_field()));

    // dx1 = -x2 has a negative term not divisible by x1.
    PolynomialVectorField bad;
    bad.species_count = 2;
    bad.components = {poly({{-1, {0, 1}}}), poly({})};
    CHECK_FALSE(check_mass_action_admissible(bad));

    // Every mass-action field is admissible by construction.
    for (const auto& net : {triangle5(), linear_triangle(), curve3d_network(), curve5d_network()})
        CHECK(check_mass_action_admissible(build_vector_field(net)));
}

TEST_CASE("realize_network round-trips the 3d system exactly") {
    const PolynomialVectorField f = curve3d_field();
    const ReactionNetwork net = realize_network(f);
    CHECK(fields_equal(build_vector_field(net), f));
}

TEST_CASE("realize_network handles in/outflow terms via the empty complex") {
    const PolynomialVectorField f = curve4d_field();
    const ReactionNetwork net = realize_network(f);
    CHECK(fields_equal(build_vector_field(net), f));
    bool has_empty = false;
    for (const Complex& c : net.complexes)
        if (c.total_degree() == 0) has_empty = true;
    CHECK(has_empty);
}

TEST_CASE("realize_network rejects inadmissible fields") {
    PolynomialVectorField bad;
    bad.species_count = 1;
    bad.components = {poly({{-1, {0}}})};
    CHECK_THROWS_AS(realize_network(bad), InvalidInput);
}

TEST_CASE("hand-built realizations reproduce the pinned systems exactly") {
    CHECK(fields_equal(build_vector_field(curve3d_network()), curve3d_field()));
    CHECK(fields_equal(build_vector_field(curve5d_network()), curve5d_field()));

    // They are weakly reversible with one linkage class, unlike the generic
    // per-term realization.
    for (const auto& net : {curve3d_network(), curve5d_network()}) {
        const LinkageInfo li = linkage_and_reversibility(net);
        CHECK(li.linkage_class_count == 1);
        CHECK(li.is_weakly_reversible);
    }
    CHECK(stoichiometry_subspace(curve3d_network()).rank() == 3);
    CHECK(stoichiometry_subspace(curve5d_network()).rank() == 5);
}

TEST_CASE("field values lie in the stoichiometry subspace") {
    Rng rng(7);
    for (const auto& net : {triangle5({2, 1, 4, 3, 6, 5}), curve3d_network(), curve5d_network()}) {
        const PolynomialVectorField f = build_vector_field(net);
        const StoichiometrySubspace sub = stoichiometry_subspace(net);
        for (int rep = 0; rep < 20; ++rep) {
            Vec x(net.species_count);
            for (double& v : x) v = rng.uniform(0.0, 3.0);
            const Vec dx = evaluate_field(f, x);
            CHECK(norm2(sub.project_residual(dx)) < 1e-9 * (1.0 + norm2(dx)));
        }
    }
}
