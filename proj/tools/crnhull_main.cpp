// Command-line front end: network generation, simulation, linear analysis,
// forward-closure experiments and face-vertex sign maps, all seeded and
// reproducible.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crnhull/chart.hpp"
#include "crnhull/closure.hpp"
#include "crnhull/errors.hpp"
#include "crnhull/faces.hpp"
#include "crnhull/hull.hpp"
#include "crnhull/integrate.hpp"
#include "crnhull/io.hpp"
#include "crnhull/linear.hpp"
#include "crnhull/network.hpp"
#include "crnhull/polynomial.hpp"
#include "crnhull/random_network.hpp"

namespace {

using namespace crnhull;

Vec parse_point(const std::string& text) {
    Vec out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw InvalidInput("bad coordinate '" + cell + "' in point '" + text + "'");
        }
    }
    if (out.empty()) throw InvalidInput("empty point '" + text + "'");
    return out;
}

std::string format_point(const Vec& x) {
    std::string s = "(";
    char buf[48];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", x[i]);
        s += buf;
        if (i + 1 < x.size()) s += ", ";
    }
    return s + ")";
}

struct IntegratorFlags {
    double step = 1e-3;
    double max_time = 10.0;
    double steady_tol = 1e-9;
    std::size_t max_points = 10000;

    void attach(CLI::App* cmd) {
        cmd->add_option("--step", step, "RK4 step size");
        cmd->add_option("--max-time", max_time, "integration horizon");
        cmd->add_option("--max-points", max_points, "maximum points per trajectory");
        cmd->add_option("--steady-tol", steady_tol, "relative steady-state threshold on |x'|");
    }

    IntegratorConfig config() const { return {step, max_time, steady_tol, max_points}; }
};

int cmd_gen(std::size_t species, std::size_t complexes, int degree, double rate_lo, double rate_hi,
            bool allow_constant, std::uint64_t seed, const std::string& out) {
    RandomNetworkParams params;
    params.species = species;
    params.complexes = complexes;
    params.max_degree = degree;
    params.rate_lo = rate_lo;
    params.rate_hi = rate_hi;
    params.allow_constant_complex = allow_constant;
    const ReactionNetwork net = random_network(params, seed);
    save_network(net, out);
    const LinkageInfo li = linkage_and_reversibility(net);
    std::cout << "species=" << net.species_count << " complexes=" << net.complex_count()
              << " edges=" << net.edges.size() << "\n"
              << "linkage_classes=" << li.linkage_class_count
              << " weakly_reversible=" << (li.is_weakly_reversible ? "true" : "false") << "\n"
              << "wrote " << out << "\n";
    return 0;
}

int cmd_simulate(const std::string& network_path, const std::string& field_path,
                 const std::string& x0_text, const IntegratorFlags& integ, const std::string& out) {
    std::optional<ReactionNetwork> net;
    PolynomialVectorField field;
    if (!network_path.empty()) {
        net = load_network(network_path);
        field = build_vector_field(*net);
    } else {
        field = load_field(field_path);
    }
    const Vec x0 = parse_point(x0_text);
    if (x0.size() != field.species_count)
        throw InvalidInput("x0 has " + std::to_string(x0.size()) + " coordinates but the system has " +
                           std::to_string(field.species_count) + " species");

    const Trajectory traj = integrate(field, x0, integ.config());
    if (!out.empty()) save_trajectory_csv(traj, out);

    double conservation = 0.0;
    if (net) {
        const StoichiometrySubspace sub = stoichiometry_subspace(*net);
        for (const Vec& p : traj.points)
            conservation = std::max(conservation, norm2(sub.project_residual(p - x0)));
    } else {
        const AffineChart chart = make_chart(traj);
        for (const Vec& p : traj.points)
            conservation = std::max(conservation, chart.off_chart_distance(p));
    }

    std::cout << "points=" << traj.size() << " final_t=" << traj.times.back()
              << " reached_steady=" << (traj.reached_steady ? "true" : "false") << "\n"
              << "steady_estimate=" << format_point(traj.points.back()) << "\n"
              << "conservation_residual=" << conservation << "\n";
    if (!out.empty()) std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_linear(const std::string& network_path, const std::string& x0_text, double tol_rational) {
    const ReactionNetwork net = load_network(network_path);
    if (net.complex_count() != net.species_count)
        throw InvalidInput("linear analysis needs n = s (one single-unit complex per species)");
    for (std::size_t i = 0; i < net.complex_count(); ++i) {
        const auto& e = net.complexes[i].exponents;
        for (std::size_t j = 0; j < e.size(); ++j)
            if (e[j] != (i == j ? 1 : 0))
                throw InvalidInput("linear analysis needs the exponent matrix to be the identity; "
                                   "complex " +
                                   std::to_string(i) + " is not the unit species " + std::to_string(i));
    }
    const Vec x0 = parse_point(x0_text);
    const Laplacian lap = build_laplacian(net);
    const ClosedFormTrajectory traj = solve_linear(lap, x0);

    std::cout << "eigenvalues:";
    for (const auto& m : traj.terms) {
        std::cout << " " << m.exponent.real();
        if (std::abs(m.exponent.imag()) > 1e-12) std::cout << (m.exponent.imag() > 0 ? "+" : "")
                                                           << m.exponent.imag() << "i";
    }
    std::cout << "\n";
    for (const auto& m : traj.terms) {
        Vec re(m.coefficients.size());
        for (std::size_t i = 0; i < re.size(); ++i) re[i] = m.coefficients[i].real();
        std::cout << "mode lambda=" << m.exponent.real() << " coeff=" << format_point(re) << "\n";
    }
    std::cout << "steady_state=" << format_point(steady_state(traj)) << "\n";

    try {
        const MonomialFactorization fac = monomial_factorization(traj, tol_rational);
        std::cout << "monomial_exponents:";
        for (const Rational& a : fac.exponents) {
            std::cout << " " << a.num;
            if (a.den != 1) std::cout << "/" << a.den;
        }
        std::cout << "\n";
        double residual = 0.0;
        for (int g = 1; g <= 100; ++g) {
            const double u = g / 100.0;
            const Vec via_u = fac.evaluate_at_u(u);
            const Vec via_t = traj.evaluate(-std::log(u));
            for (std::size_t i = 0; i < via_u.size(); ++i)
                residual = std::max(residual,
                                    std::abs(via_u[i] - via_t[i]) / (1.0 + std::abs(via_t[i])));
        }
        std::cout << "factorization_residual=" << residual << "\n";
    } catch (const IrrationalEigenvalue& e) {
        std::cout << "monomial_factorization_error=IrrationalEigenvalue: " << e.what() << "\n";
    } catch (const ComplexEigenvalue& e) {
        std::cout << "monomial_factorization_error=ComplexEigenvalue: " << e.what() << "\n";
    }
    return 0;
}

int cmd_closure(const ExperimentParams& params, std::size_t trials, std::uint64_t seed,
                bool assert_linear, const std::string& out) {
    const ClosureReport report = closure_experiment(params, trials, seed);
    if (!out.empty()) write_json_file(report_to_json(report, params, seed), out);

    std::size_t errors = 0;
    for (const TrialOutcome& t : report.outcomes)
        if (!t.error.empty()) ++errors;
    const std::size_t raw = report.all_violations().size();
    const std::size_t near = report.count_status(kNearDuplicate);
    const std::size_t rehull = report.count_status(kContainedAfterRehull);
    const std::size_t confirmed = report.count_status(kConfirmedOutlier);
    std::size_t multistationary = 0;
    for (const TrialOutcome& t : report.outcomes)
        if (t.steady_states.size() > 1) ++multistationary;

    std::cout << "trials=" << trials << " errors=" << errors << "\n"
              << "raw_violations=" << raw << " near_duplicate=" << near
              << " contained_after_rehull=" << rehull << " confirmed_outliers=" << confirmed << "\n"
              << "multistationary_trials=" << multistationary << "\n";
    for (const TrialOutcome& t : report.outcomes)
        for (const Violation& v : t.violations)
            if (v.status == kConfirmedOutlier)
                std::cout << "outlier trial=" << v.trial << " seed=" << t.seed
                          << " t=" << v.time << " margin=" << v.margin << " point="
                          << format_point(v.point) << "\n";
    if (!out.empty()) std::cout << "wrote " << out << "\n";
    if (assert_linear && confirmed > 0) {
        std::cerr << "assertion failed: " << confirmed << " confirmed outliers on a linear corpus\n";
        return 2;
    }
    return 0;
}

int cmd_faces(const std::string& traj_path, const std::string& network_path,
              const std::string& field_path, const std::string& x0_text,
              const IntegratorFlags& integ, std::size_t every, const GridOptions& opt,
              bool pin_x0_flag, std::size_t slices, bool dump_csv, const std::string& prefix) {
    Trajectory traj;
    std::optional<ReactionNetwork> net;
    if (!traj_path.empty()) {
        traj = load_trajectory_csv(traj_path);
    } else {
        PolynomialVectorField field;
        Vec x0 = parse_point(x0_text);
        if (!network_path.empty()) {
            net = load_network(network_path);
            field = build_vector_field(*net);
        } else {
            field = load_field(field_path);
        }
        traj = integrate(field, x0, integ.config());
    }
    if (every > 1) traj = decimate_trajectory(traj, every);

    const AffineChart chart =
        net ? make_chart(*net, traj.points.front()) : make_chart(traj);
    const std::size_t d = chart.dim();
    std::cout << "hull_dimension=" << d << " trajectory_points=" << traj.size() << "\n";

    SignGrid grid;
    if (d == 3) {
        if (pin_x0_flag) throw WrongDimension("--pin-x0 applies to 4-dimensional hulls");
        grid = sign_grid_pairs(traj, chart, opt);
    } else if (d == 4) {
        grid = sign_grid_pairs(traj, chart, opt); // start point pinned automatically
    } else if (d == 5) {
        grid = sign_grid_triples(traj, chart, opt);
    } else {
        throw WrongDimension(
            "face grids are available for hull dimensions 3 (pairs), 4 (pairs with the start "
            "point pinned) and 5 (triples); this trajectory has dimension " +
            std::to_string(d));
    }

    std::size_t pos = 0, neg = 0, zero = 0;
    for (auto s : grid.signs) {
        if (s > 0) ++pos;
        else if (s < 0) ++neg;
        else ++zero;
    }
    std::cout << "grid_count=" << grid.count << " positive=" << pos << " negative=" << neg
              << " deadband_zero=" << zero << "\n";

    std::vector<std::string> files;
    if (grid.arity == 2) {
        const std::string path = prefix + ".ppm";
        render_sign_grid(grid, path);
        files.push_back(path);
    } else {
        const std::size_t panels = std::min<std::size_t>(std::max<std::size_t>(slices, 1), grid.count);
        for (std::size_t p = 0; p < panels; ++p) {
            const std::size_t k = (panels == 1) ? grid.count / 2
                                                : 2 + p * (grid.count - 3) / (panels - 1);
            const std::string path = prefix + "_k" + std::to_string(grid.start + k) + ".ppm";
            render_sign_grid(grid, path, k);
            files.push_back(path);
        }
    }
    if (dump_csv) {
        const std::string path = prefix + ".csv";
        write_grid_csv(grid, path);
        files.push_back(path);
    }
    for (const std::string& f : files) std::cout << "wrote " << f << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mass-action trajectory hulls: generation, integration, closure experiments "
                 "and face-vertex sign maps"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read flags from an INI/TOML config file");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random weakly reversible network");
    std::size_t g_species = 3, g_complexes = 3;
    int g_degree = 2;
    double g_rate_lo = 1.0, g_rate_hi = 10.0;
    bool g_allow_constant = false;
    std::uint64_t g_seed = 1;
    std::string g_out = "network.json";
    gen->add_option("-s,--species", g_species, "number of species")->required();
    gen->add_option("-n,--complexes", g_complexes, "number of complexes")->required();
    gen->add_option("-d,--max-degree", g_degree, "max total degree of complex monomials (1..4)");
    gen->add_option("--rate-lo", g_rate_lo, "rate range lower bound");
    gen->add_option("--rate-hi", g_rate_hi, "rate range upper bound");
    gen->add_flag("--allow-constant", g_allow_constant, "allow the constant (empty) complex");
    gen->add_option("--seed", g_seed, "generator seed");
    gen->add_option("-o,--out", g_out, "output network JSON path");

    // simulate
    auto* sim = app.add_subcommand("simulate", "integrate a system with fixed-step RK4");
    std::string s_network, s_field, s_x0, s_out;
    IntegratorFlags s_integ;
    sim->add_option("--network", s_network, "network JSON input");
    sim->add_option("--field", s_field, "field JSON input (system given as ODEs)");
    sim->add_option("--x0", s_x0, "start point, comma separated")->required();
    sim->add_option("-o,--out", s_out, "trajectory CSV output");
    s_integ.attach(sim);

    // linear
    auto* lin = app.add_subcommand("linear", "closed-form analysis of a linear network");
    std::string l_network, l_x0;
    double l_tol_rational = 1e-9;
    lin->add_option("--network", l_network, "network JSON input (must be linear)")->required();
    lin->add_option("--x0", l_x0, "start point, comma separated")->required();
    lin->add_option("--tol-rational", l_tol_rational, "rational recognition tolerance");

    // closure
    auto* clo = app.add_subcommand("closure", "run the forward-closure experiment");
    ExperimentParams c_params;
    std::size_t c_trials = 20;
    std::uint64_t c_seed = 1;
    bool c_assert_linear = false;
    std::string c_out;
    IntegratorFlags c_integ;
    c_integ.step = c_params.trial.integrator.step;
    c_integ.max_time = c_params.trial.integrator.max_time;
    c_integ.steady_tol = c_params.trial.integrator.steady_tol;
    c_integ.max_points = c_params.trial.integrator.max_points;
    clo->add_flag("--linear", c_params.linear_corpus, "draw random linear systems");
    clo->add_option("-s,--species", c_params.network.species, "species per system");
    clo->add_option("-n,--complexes", c_params.network.complexes, "complexes per system");
    clo->add_option("-d,--max-degree", c_params.network.max_degree, "max monomial degree");
    clo->add_option("--rate-lo", c_params.network.rate_lo, "rate range lower bound");
    clo->add_option("--rate-hi", c_params.network.rate_hi, "rate range upper bound");
    clo->add_option("--x0-lo", c_params.x0_lo, "start point range lower bound");
    clo->add_option("--x0-hi", c_params.x0_hi, "start point range upper bound");
    clo->add_option("--trials", c_trials, "number of random systems");
    clo->add_option("--inner", c_params.inner_trials, "probe trajectories per system");
    clo->add_option("--tol", c_params.trial.membership_tol, "membership tolerance");
    clo->add_option("--hull-points", c_params.trial.target_hull_points,
                    "target generator count for the hull");
    clo->add_option("--spacing", c_params.trial.spacing, "explicit thinning spacing (0 = auto)");
    clo->add_option("--jobs", c_params.jobs, "parallel trial workers");
    clo->add_option("--seed", c_seed, "master seed");
    clo->add_flag("--assert-linear", c_assert_linear,
                  "exit nonzero if a linear corpus yields confirmed outliers");
    clo->add_option("-o,--out", c_out, "report JSON output");
    c_integ.attach(clo);

    // faces
    auto* fac = app.add_subcommand("faces", "face-vertex determinant sign maps");
    std::string f_traj, f_network, f_field, f_x0;
    IntegratorFlags f_integ;
    std::size_t f_every = 1, f_slices = 3;
    GridOptions f_opt;
    bool f_pin = false, f_csv = false;
    std::string f_prefix = "faces";
    fac->add_option("--traj", f_traj, "trajectory CSV input (with tangents)");
    fac->add_option("--network", f_network, "network JSON input");
    fac->add_option("--field", f_field, "field JSON input");
    fac->add_option("--x0", f_x0, "start point (when integrating)");
    fac->add_option("--every", f_every, "keep every k-th trajectory sample before gridding");
    fac->add_option("--stride", f_opt.stride, "grid index stride over samples");
    fac->add_option("--start", f_opt.start, "first grid index");
    fac->add_option("--deadband", f_opt.deadband, "zero band relative to column norms");
    fac->add_option("--jobs", f_opt.jobs, "worker threads for grid evaluation");
    fac->add_flag("--pin-x0", f_pin, "pin the start point as the tangent-free face vertex (d=4)");
    fac->add_option("--slices", f_slices, "rendered k-slices for triple grids");
    fac->add_flag("--csv", f_csv, "also dump grid values as CSV");
    fac->add_option("--out-prefix", f_prefix, "output file prefix");
    f_integ.attach(fac);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(g_species, g_complexes, g_degree, g_rate_lo, g_rate_hi, g_allow_constant,
                           g_seed, g_out);
        if (sim->parsed()) {
            if (s_network.empty() == s_field.empty())
                throw InvalidInput("simulate needs exactly one of --network or --field");
            return cmd_simulate(s_network, s_field, s_x0, s_integ, s_out);
        }
        if (lin->parsed()) return cmd_linear(l_network, l_x0, l_tol_rational);
        if (clo->parsed()) {
            c_params.trial.integrator = c_integ.config();
            return cmd_closure(c_params, c_trials, c_seed, c_assert_linear, c_out);
        }
        if (fac->parsed()) {
            const int sources = (!f_traj.empty()) + (!f_network.empty()) + (!f_field.empty());
            if (sources != 1)
                throw InvalidInput("faces needs exactly one of --traj, --network or --field");
            if (f_traj.empty() && f_x0.empty())
                throw InvalidInput("faces needs --x0 when integrating from --network/--field");
            return cmd_faces(f_traj, f_network, f_field, f_x0, f_integ, f_every, f_opt, f_pin,
                             f_slices, f_csv, f_prefix);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
