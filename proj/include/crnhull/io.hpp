#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crnhull/closure.hpp"
#include "crnhull/errors.hpp"
#include "crnhull/integrate.hpp"
#include "crnhull/network.hpp"
#include "crnhull/polynomial.hpp"

namespace crnhull {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Network JSON:
//   {"species": s, "complexes": [[e1..es], ...],
//    "edges": [{"from": i, "to": j, "rate": k}, ...]}    (0-based indices)
// ---------------------------------------------------------------------------

inline json network_to_json(const ReactionNetwork& net) {
    json j;
    j["species"] = net.species_count;
    j["complexes"] = json::array();
    for (const Complex& c : net.complexes) j["complexes"].push_back(c.exponents);
    j["edges"] = json::array();
    for (const Reaction& r : net.edges)
        j["edges"].push_back({{"from", r.from}, {"to", r.to}, {"rate", r.rate}});
    return j;
}

inline ReactionNetwork network_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("network: top level must be an object");
    if (!j.contains("species") || !j["species"].is_number_unsigned())
        throw ParseError("network: field 'species' missing or not a non-negative integer");
    if (!j.contains("complexes") || !j["complexes"].is_array())
        throw ParseError("network: field 'complexes' missing or not an array");
    if (!j.contains("edges") || !j["edges"].is_array())
        throw ParseError("network: field 'edges' missing or not an array");
    ReactionNetwork net;
    net.species_count = j["species"].get<std::size_t>();
    std::size_t ci = 0;
    for (const json& c : j["complexes"]) {
        if (!c.is_array()) throw ParseError("network: complexes[" + std::to_string(ci) + "] not an array");
        Complex cx;
        for (const json& e : c) {
            if (!e.is_number_integer() || e.get<long long>() < 0)
                throw ParseError("network: complexes[" + std::to_string(ci) +
                                 "] has a non-integer or negative entry");
            cx.exponents.push_back(e.get<int>());
        }
        net.complexes.push_back(std::move(cx));
        ++ci;
    }
    std::size_t ei = 0;
    for (const json& e : j["edges"]) {
        const std::string where = "network: edges[" + std::to_string(ei) + "]";
        if (!e.is_object()) throw ParseError(where + " not an object");
        for (const char* key : {"from", "to", "rate"})
            if (!e.contains(key)) throw ParseError(where + " missing field '" + key + "'");
        if (!e["from"].is_number_unsigned() || !e["to"].is_number_unsigned())
            throw ParseError(where + ": 'from'/'to' must be non-negative integers");
        if (!e["rate"].is_number()) throw ParseError(where + ": 'rate' must be a number");
        net.edges.push_back(
            {e["from"].get<std::size_t>(), e["to"].get<std::size_t>(), e["rate"].get<double>()});
        ++ei;
    }
    // Files written by this tool may carry the empty (constant) complex.
    validate(net, {.allow_empty_complex = true});
    return net;
}

inline json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

inline void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path);
}

inline ReactionNetwork load_network(const std::string& path) {
    try {
        return network_from_json(parse_json_file(path));
    } catch (const InvalidInput& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline void save_network(const ReactionNetwork& net, const std::string& path) {
    write_json_file(network_to_json(net), path);
}

// ---------------------------------------------------------------------------
// Field JSON (for systems given directly as ODEs):
//   {"species": s, "components": [[[coeff, [e1..es]], ...], ...]}
// ---------------------------------------------------------------------------

inline json field_to_json(const PolynomialVectorField& f) {
    json j;
    j["species"] = f.species_count;
    j["components"] = json::array();
    for (const SparsePoly& p : f.components) {
        json terms = json::array();
        for (const Term& t : p.terms) terms.push_back(json::array({t.coeff, t.exponents}));
        j["components"].push_back(std::move(terms));
    }
    return j;
}

inline PolynomialVectorField field_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("field: top level must be an object");
    if (!j.contains("species") || !j["species"].is_number_unsigned())
        throw ParseError("field: field 'species' missing or not a non-negative integer");
    if (!j.contains("components") || !j["components"].is_array())
        throw ParseError("field: field 'components' missing or not an array");
    PolynomialVectorField f;
    f.species_count = j["species"].get<std::size_t>();
    f.components.resize(f.species_count);
    if (j["components"].size() != f.species_count)
        throw ParseError("field: expected " + std::to_string(f.species_count) + " components, got " +
                         std::to_string(j["components"].size()));
    std::size_t ci = 0;
    for (const json& comp : j["components"]) {
        const std::string where = "field: components[" + std::to_string(ci) + "]";
        if (!comp.is_array()) throw ParseError(where + " not an array");
        std::vector<Term> terms;
        std::size_t ti = 0;
        for (const json& t : comp) {
            if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_array())
                throw ParseError(where + "[" + std::to_string(ti) + "] must be [coeff, [exponents]]");
            Term term;
            term.coeff = t[0].get<double>();
            for (const json& e : t[1]) {
                if (!e.is_number_integer() || e.get<long long>() < 0)
                    throw ParseError(where + "[" + std::to_string(ti) + "] has a bad exponent");
                term.exponents.push_back(e.get<int>());
            }
            if (term.exponents.size() != f.species_count)
                throw ParseError(where + "[" + std::to_string(ti) + "] exponent length mismatch");
            terms.push_back(std::move(term));
            ++ti;
        }
        f.components[ci] = make_poly(terms);
        ++ci;
    }
    return f;
}

inline PolynomialVectorField load_field(const std::string& path) {
    return field_from_json(parse_json_file(path));
}

// ---------------------------------------------------------------------------
// Trajectory CSV: header t,x1..xs,dx1..dxs, full double precision.
// ---------------------------------------------------------------------------

inline void save_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    const std::size_t s = traj.dimension();
    out << 't';
    for (std::size_t i = 1; i <= s; ++i) out << ",x" << i;
    for (std::size_t i = 1; i <= s; ++i) out << ",dx" << i;
    out << '\n';
    char buf[64];
    for (std::size_t r = 0; r < traj.size(); ++r) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.times[r]);
        out << buf;
        for (double v : traj.points[r]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        }
        for (double v : traj.tangents[r]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

/// Reads a trajectory CSV; `reached_steady` is not part of the format and
/// comes back false.
inline Trajectory load_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": missing header line");
    std::size_t columns = 1;
    for (char c : line) columns += (c == ',');
    if (columns < 3 || columns % 2 == 0)
        throw ParseError(path + ": header must be t,x1..xs,dx1..dxs");
    const std::size_t s = (columns - 1) / 2;
    Trajectory traj;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError(path + ": line " + std::to_string(lineno) + ": bad number '" +
                                 cell + "'");
            }
        }
        if (row.size() != columns)
            throw ParseError(path + ": line " + std::to_string(lineno) + ": expected " +
                             std::to_string(columns) + " columns, got " + std::to_string(row.size()));
        traj.times.push_back(row[0]);
        traj.points.emplace_back(row.begin() + 1, row.begin() + 1 + s);
        traj.tangents.emplace_back(row.begin() + 1 + s, row.end());
    }
    if (traj.points.empty()) throw ParseError(path + ": no data rows");
    return traj;
}

// ---------------------------------------------------------------------------
// Closure report JSON.
// ---------------------------------------------------------------------------

inline json experiment_params_to_json(const ExperimentParams& p) {
    json j;
    j["linear_corpus"] = p.linear_corpus;
    j["species"] = p.network.species;
    j["complexes"] = p.network.complexes;
    j["max_degree"] = p.network.max_degree;
    j["rate_range"] = {p.network.rate_lo, p.network.rate_hi};
    j["x0_range"] = {p.x0_lo, p.x0_hi};
    j["inner_trials"] = p.inner_trials;
    j["membership_tol"] = p.trial.membership_tol;
    j["spacing"] = p.trial.spacing;
    j["target_hull_points"] = p.trial.target_hull_points;
    j["step"] = p.trial.integrator.step;
    j["max_time"] = p.trial.integrator.max_time;
    j["max_points"] = p.trial.integrator.max_points;
    j["steady_tol"] = p.trial.integrator.steady_tol;
    return j;
}

inline json report_to_json(const ClosureReport& report, const ExperimentParams& params,
                           std::uint64_t master_seed) {
    json j;
    j["trials"] = report.trials;
    j["master_seed"] = master_seed;
    j["params"] = experiment_params_to_json(params);
    j["seeds"] = json::array();
    j["violations"] = json::array();
    j["steady_states"] = json::array();
    j["errors"] = json::array();
    for (std::size_t t = 0; t < report.outcomes.size(); ++t) {
        const TrialOutcome& o = report.outcomes[t];
        j["seeds"].push_back(o.seed);
        if (!o.error.empty()) j["errors"].push_back({{"trial", t}, {"message", o.error}});
        for (const Violation& v : o.violations)
            j["violations"].push_back({{"trial", v.trial},
                                       {"inner_trial", v.inner_trial},
                                       {"time", v.time},
                                       {"point", v.point},
                                       {"margin", v.margin},
                                       {"status", v.status}});
        json ss = json::array();
        for (const Vec& p : o.steady_states) ss.push_back(p);
        j["steady_states"].push_back({{"trial", t}, {"points", std::move(ss)}});
    }
    return j;
}

} // namespace crnhull
