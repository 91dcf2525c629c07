#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "crnhull/chart.hpp"
#include "crnhull/errors.hpp"
#include "crnhull/hull.hpp"
#include "crnhull/integrate.hpp"
#include "crnhull/linear.hpp"
#include "crnhull/network.hpp"
#include "crnhull/polynomial.hpp"
#include "crnhull/random_network.hpp"
#include "crnhull/rng.hpp"

namespace crnhull {

inline constexpr const char* kNearDuplicate = "near-duplicate-of-C";
inline constexpr const char* kContainedAfterRehull = "contained-after-rehull";
inline constexpr const char* kConfirmedOutlier = "confirmed-outlier";

struct Violation {
    std::size_t trial = 0;
    std::size_t inner_trial = 0;
    double time = 0.0;
    Vec point;             // ambient coordinates
    double margin = 0.0;   // normalized residual distance reported by the LP
    std::string status;    // empty until rechecked
};

struct ClosureTrialConfig {
    IntegratorConfig integrator;
    double membership_tol = 1e-6;
    /// Spacing used to thin both the hull generators and the probe
    /// trajectory; 0 picks diameter / target_hull_points.
    double spacing = 0.0;
    std::size_t target_hull_points = 250;
};

inline double effective_spacing(const Trajectory& traj, const ClosureTrialConfig& cfg) {
    if (cfg.spacing > 0.0) return cfg.spacing;
    Vec lo = traj.points.front(), hi = lo;
    for (const Vec& p : traj.points)
        for (std::size_t k = 0; k < p.size(); ++k) {
            lo[k] = std::min(lo[k], p[k]);
            hi[k] = std::max(hi[k], p[k]);
        }
    const double diam = dist2(lo, hi);
    return diam > 0.0 ? diam / static_cast<double>(cfg.target_hull_points) : 1e-12;
}

/// Integrates a probe trajectory from the given start and returns the
/// thinned points that fail hull membership.
inline std::vector<Violation> forward_closure_from(const PolynomialVectorField& field,
                                                   const HullSample& hull, const Vec& start,
                                                   const ClosureTrialConfig& cfg,
                                                   double spacing) {
    const Trajectory probe = integrate(field, start, cfg.integrator);
    const Trajectory thinned = thin_trajectory(probe, spacing);
    std::vector<Violation> out;
    for (std::size_t i = 0; i < thinned.size(); ++i) {
        const MembershipResult res = contains(hull, thinned.points[i], cfg.membership_tol);
        if (!res.inside) {
            Violation v;
            v.time = thinned.times[i];
            v.point = thinned.points[i];
            v.margin = res.margin;
            out.push_back(std::move(v));
        }
    }
    return out;
}

/// One forward-closure probe: sample a random interior point of the hull,
/// integrate the same field from it, and report the probe points that the
/// membership test rejects.
inline std::vector<Violation> forward_closure_trial(const PolynomialVectorField& field,
                                                    const HullSample& hull, std::uint64_t seed,
                                                    const ClosureTrialConfig& cfg,
                                                    double spacing) {
    return forward_closure_from(field, hull, sample_interior(hull, seed), cfg, spacing);
}

/// Classifies raw violations the way the experiment double-checks them:
/// close to some point of the raw source trajectory, contained in a hull
/// rebuilt from a different (denser) subset of it, or a confirmed outlier.
inline void recheck_violations(std::vector<Violation>& violations, const Trajectory& raw,
                               const AffineChart& chart, double spacing, double tol) {
    if (violations.empty()) return;
    const HullSample base_hull = make_hull_sample(chart, thin_trajectory(raw, spacing));
    const double diam = std::max(base_hull.bounding_diameter(), 1e-300);

    std::optional<HullSample> denser, densest, full;
    auto membership = [&](const HullSample& h, const Vec& p) -> MembershipResult {
        try {
            return contains(h, p, tol);
        } catch (const OffChart&) {
            return {};
        }
    };
    for (Violation& v : violations) {
        double nearest = 1e300;
        for (const Vec& p : raw.points) nearest = std::min(nearest, dist2(p, v.point));
        if (nearest / diam <= 10.0 * tol) {
            v.status = kNearDuplicate;
            continue;
        }
        if (!denser) denser = make_hull_sample(chart, thin_trajectory(raw, spacing / 2.0));
        if (membership(*denser, v.point).inside) {
            v.status = kContainedAfterRehull;
            continue;
        }
        // Chord sag shrinks with the spacing squared; an 8x denser subset
        // settles most sampling artifacts.
        if (!densest) densest = make_hull_sample(chart, thin_trajectory(raw, spacing / 8.0));
        const MembershipResult at8 = membership(*densest, v.point);
        if (at8.inside) {
            v.status = kContainedAfterRehull;
            continue;
        }
        // Margins this far out exceed any plausible chord sag of the dense
        // subset; only near-boundary residues justify the expensive rebuild
        // from every raw sample.
        if (at8.margin <= 50.0 * tol) {
            if (!full) full = make_hull_sample(chart, raw);
            if (membership(*full, v.point).inside) {
                v.status = kContainedAfterRehull;
                continue;
            }
        }
        v.status = kConfirmedOutlier;
    }
}

struct ExperimentParams {
    RandomNetworkParams network{.species = 3, .complexes = 4, .max_degree = 2, .rate_lo = 0.5,
                                .rate_hi = 2.0};
    /// Draw random strongly connected linear systems instead of monomial
    /// networks (rejecting near-defective rate matrices).
    bool linear_corpus = false;
    double x0_lo = 0.5;
    double x0_hi = 2.0;
    std::size_t inner_trials = 5;
    /// The conjecture concerns trajectories reaching a stable point, so the
    /// experiment budget is sized for convergence, not the generic horizon.
    ClosureTrialConfig trial{.integrator = {1e-3, 60.0, 1e-7, 60001}};
    std::size_t jobs = 1;
};

struct TrialOutcome {
    std::uint64_t seed = 0;
    std::string error;                // empty on success
    std::vector<Violation> violations;
    std::vector<Vec> steady_states;   // cluster representatives
    std::size_t probe_points = 0;
    bool reached_steady = false;
};

struct ClosureReport {
    std::size_t trials = 0;
    std::vector<TrialOutcome> outcomes;

    std::vector<const Violation*> all_violations() const {
        std::vector<const Violation*> out;
        for (const TrialOutcome& t : outcomes)
            for (const Violation& v : t.violations) out.push_back(&v);
        return out;
    }

    std::size_t count_status(const std::string& status) const {
        std::size_t n = 0;
        for (const TrialOutcome& t : outcomes)
            for (const Violation& v : t.violations)
                if (v.status == status) ++n;
        return n;
    }
};

namespace detail {

/// Single-linkage clustering with radius 1e-5 (1 + |x|); representatives
/// are the first member seen.
inline std::vector<Vec> cluster_points(const std::vector<Vec>& pts) {
    std::vector<Vec> reps;
    for (const Vec& p : pts) {
        bool merged = false;
        for (const Vec& r : reps)
            if (dist2(p, r) <= 1e-5 * (1.0 + norm2(p))) {
                merged = true;
                break;
            }
        if (!merged) reps.push_back(p);
    }
    return reps;
}

inline TrialOutcome run_closure_trial(const ExperimentParams& params, std::size_t trial_index,
                                      std::uint64_t master_seed) {
    TrialOutcome outcome;
    outcome.seed = derive_seed(master_seed, trial_index);
    try {
        ReactionNetwork net;
        if (params.linear_corpus) {
            std::uint64_t draw = outcome.seed;
            for (int attempt = 0;; ++attempt) {
                net = random_linear_network(params.network.species, params.network.rate_lo,
                                            params.network.rate_hi, draw);
                try {
                    eigendecompose(build_laplacian(net).a_kappa);
                    break;
                } catch (const NearDefective&) {
                    if (attempt >= 63) throw;
                    draw = derive_seed(outcome.seed, 7000 + attempt);
                }
            }
        } else {
            net = random_network(params.network, outcome.seed);
        }
        const PolynomialVectorField field = build_vector_field(net);

        Rng x0_rng(derive_seed(outcome.seed, 1));
        Vec x0(net.species_count);
        for (double& v : x0) v = x0_rng.uniform(params.x0_lo, params.x0_hi);

        const Trajectory raw = integrate(field, x0, params.trial.integrator);
        outcome.reached_steady = raw.reached_steady;
        if (!raw.reached_steady)
            throw NumericalFailure(
                "trajectory did not reach a steady state within the budget (final |x'| = " +
                std::to_string(norm2(raw.tangents.back())) +
                "); the forward-closure statement assumes a converging trajectory");
        const AffineChart chart = make_chart(net, x0);
        const double spacing = effective_spacing(raw, params.trial);
        const HullSample hull = make_hull_sample(chart, thin_trajectory(raw, spacing));

        std::vector<Vec> finals;
        if (raw.reached_steady) finals.push_back(raw.points.back());
        for (std::size_t k = 0; k < params.inner_trials; ++k) {
            const Vec c = sample_interior(hull, derive_seed(outcome.seed, 100 + k));
            const Trajectory probe = integrate(field, c, params.trial.integrator);
            const Trajectory thinned = thin_trajectory(probe, spacing);
            outcome.probe_points += thinned.size();
            if (probe.reached_steady) finals.push_back(probe.points.back());
            for (std::size_t i = 0; i < thinned.size(); ++i) {
                const MembershipResult res =
                    contains(hull, thinned.points[i], params.trial.membership_tol);
                if (!res.inside) {
                    Violation v;
                    v.trial = trial_index;
                    v.inner_trial = k;
                    v.time = thinned.times[i];
                    v.point = thinned.points[i];
                    v.margin = res.margin;
                    outcome.violations.push_back(std::move(v));
                }
            }
        }
        recheck_violations(outcome.violations, raw, chart, spacing, params.trial.membership_tol);
        outcome.steady_states = cluster_points(finals);
    } catch (const std::exception& e) {
        outcome.error = e.what();
        outcome.violations.clear();
    }
    return outcome;
}

} // namespace detail

/// Runs `trials` independent seeded experiments; per-trial failures are
/// recorded, not fatal. The report is a pure function of the parameters and
/// master seed regardless of the job count.
inline ClosureReport closure_experiment(const ExperimentParams& params, std::size_t trials,
                                        std::uint64_t master_seed) {
    ClosureReport report;
    report.trials = trials;
    report.outcomes.resize(trials);
    const std::size_t jobs = std::max<std::size_t>(1, params.jobs);
    if (jobs == 1 || trials <= 1) {
        for (std::size_t t = 0; t < trials; ++t)
            report.outcomes[t] = detail::run_closure_trial(params, t, master_seed);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                const std::size_t t = next.fetch_add(1);
                if (t >= trials) return;
                report.outcomes[t] = detail::run_closure_trial(params, t, master_seed);
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < std::min(jobs, trials); ++j) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    return report;
}

} // namespace crnhull
