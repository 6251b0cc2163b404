#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "constructor.hpp"
#include "core.hpp"
#include "estimates.hpp"
#include "measure.hpp"
#include "potentials.hpp"
#include "repr.hpp"

// Persistence: JSON round trips for the domain types, CSV emission for
// per-sample data, and the flat key=value config format.  All schemas carry
// "schema_version": 1.

namespace nlpot {
namespace io {

using nlohmann::json;

constexpr int schema_version = 1;

// thrown when a named input file cannot be opened (mapped to exit code 2)
struct FileError : std::runtime_error {
    explicit FileError(const std::string& path)
        : std::runtime_error("cannot open file: " + path), path(path) {}
    std::string path;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError(path);
    out << content;
}

inline json parse_json_file(const std::string& path) {
    return json::parse(read_file(path));
}

inline void check_schema(const json& j, const char* what) {
    if (!j.is_object())
        throw std::invalid_argument(std::string(what) + ": expected a JSON object");
    if (j.value("schema_version", 0) != schema_version)
        throw std::invalid_argument(std::string(what) +
                                    ": missing or unsupported schema_version");
}

// ---------------------------------------------------------------- numbers ----

// shortest round-trip decimal for doubles keeps CSV byte-deterministic
inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------- measure ----

inline json measure_to_json(const Measure& mu) {
    json j;
    j["schema_version"] = schema_version;
    j["dim"] = mu.dim();
    switch (mu.kind()) {
        case MeasureKind::Atomic: {
            j["kind"] = "atomic";
            j["points"] = mu.points();
            j["masses"] = mu.masses();
            break;
        }
        case MeasureKind::Grid: {
            j["kind"] = "grid";
            j["box_min"] = mu.box_min();
            j["box_side"] = mu.box_side();
            j["cells_per_axis"] = mu.cells_per_axis();
            j["values"] = mu.values();
            break;
        }
        case MeasureKind::Radial: {
            j["kind"] = "radial";
            j["knots"] = mu.knots();
            j["cumulative"] = mu.cumulative();
            break;
        }
    }
    return j;
}

inline Measure measure_from_json(const json& j) {
    check_schema(j, "measure");
    int n = j.at("dim").get<int>();
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "atomic")
        return Measure::atomic(n, j.at("points").get<std::vector<Vec>>(),
                               j.at("masses").get<Vec>());
    if (kind == "grid")
        return Measure::grid(n, j.at("box_min").get<Vec>(),
                             j.at("box_side").get<double>(),
                             j.at("cells_per_axis").get<int>(),
                             j.at("values").get<Vec>());
    if (kind == "radial")
        return Measure::radial(n, j.at("knots").get<Vec>(),
                               j.at("cumulative").get<Vec>());
    throw std::invalid_argument("measure: unknown kind '" + kind + "'");
}

// ------------------------------------------------------------------- spec ----

inline json spec_to_json(const PotentialSpec& s) {
    json j;
    j["schema_version"] = schema_version;
    j["alpha"] = s.alpha;
    j["p"] = s.p;
    j["sigma"] = s.sigma;
    j["c"] = s.c;
    j["r_max"] = s.r_max;
    j["quad_rings"] = s.quad_rings;
    j["grid"] = s.grid;
    j["trunc_R"] = s.trunc_R;
    return j;
}

inline PotentialSpec spec_from_json(const json& j) {
    check_schema(j, "spec");
    PotentialSpec s;
    s.alpha = j.value("alpha", s.alpha);
    s.p = j.value("p", s.p);
    s.sigma = j.value("sigma", s.sigma);
    s.c = j.value("c", s.c);
    s.r_max = j.value("r_max", s.r_max);
    s.quad_rings = j.value("quad_rings", s.quad_rings);
    s.grid = j.value("grid", s.grid);
    s.trunc_R = j.value("trunc_R", s.trunc_R);
    s.validate();
    return s;
}

// ---------------------------------------------------------------- reports ----

inline json report_to_json(const EstimateReport& r) {
    json j;
    j["schema_version"] = schema_version;
    j["estimate"] = estimate_name(r.id);
    j["verdict"] = verdict_name(r.verdict);
    j["max_ratio"] = r.max_ratio;
    j["min_ratio"] = r.min_ratio;
    j["fitted_C"] = r.fitted_C;
    j["params"] = r.params;
    j["notes"] = r.notes;
    j["sample_count"] = r.samples.size();
    return j;
}

// ------------------------------------------------------------------ seeds ----

inline json seed_to_json(const SeedSequence& s) {
    json j;
    j["schema_version"] = schema_version;
    j["dim"] = s.dim;
    j["points"] = s.points;
    j["radii"] = s.radii;
    j["phi_values"] = s.phi_values;
    return j;
}

inline SeedSequence seed_from_json(const json& j) {
    check_schema(j, "seed");
    SeedSequence s;
    s.dim = j.at("dim").get<int>();
    s.points = j.at("points").get<std::vector<Vec>>();
    s.radii = j.at("radii").get<Vec>();
    s.phi_values = j.at("phi_values").get<Vec>();
    s.validate();
    return s;
}

// ---------------------------------------------------------- decomposition ----

// Harmonic parts are persisted as coefficient lists of a degree <= 2
// harmonic polynomial: constant + linear + off-diagonal bilinear terms.
struct HarmonicSpec {
    double constant = 0.0;
    Vec linear;                                    // one coefficient per axis
    std::vector<std::array<double, 3>> bilinear;   // (i, j, coeff), i < j

    double operator()(const Vec& x) const {
        double v = constant;
        for (std::size_t i = 0; i < linear.size() && i < x.size(); ++i)
            v += linear[i] * x[i];
        for (const auto& t : bilinear) {
            auto i = static_cast<std::size_t>(t[0]);
            auto j = static_cast<std::size_t>(t[1]);
            if (i < x.size() && j < x.size()) v += t[2] * x[i] * x[j];
        }
        return v;
    }

    bool trivial() const {
        if (constant != 0.0 || !bilinear.empty()) return false;
        for (double c : linear)
            if (c != 0.0) return false;
        return true;
    }
};

inline json decomposition_to_json(double m, const Measure* mu,
                                  const HarmonicSpec& h, double epsilon) {
    json j;
    j["schema_version"] = schema_version;
    j["m"] = m;
    j["epsilon"] = epsilon;
    j["measure"] = mu ? measure_to_json(*mu) : json(nullptr);
    j["harmonic"] = {{"constant", h.constant},
                     {"linear", h.linear},
                     {"bilinear", h.bilinear}};
    return j;
}

struct LoadedDecomposition {
    Decomposition dec;
    HarmonicSpec harmonic;
};

inline LoadedDecomposition decomposition_from_json(const json& j) {
    check_schema(j, "decomposition");
    LoadedDecomposition out;
    out.dec.m = j.at("m").get<double>();
    out.dec.epsilon = j.at("epsilon").get<double>();
    if (!j.at("measure").is_null())
        out.dec.mu = measure_from_json(j.at("measure"));
    if (j.contains("harmonic")) {
        const json& h = j.at("harmonic");
        out.harmonic.constant = h.value("constant", 0.0);
        if (h.contains("linear")) out.harmonic.linear = h.at("linear").get<Vec>();
        if (h.contains("bilinear"))
            out.harmonic.bilinear =
                h.at("bilinear").get<std::vector<std::array<double, 3>>>();
    }
    if (!out.harmonic.trivial()) {
        HarmonicSpec copy = out.harmonic;
        out.dec.harmonic_part = [copy](const Vec& x) { return copy(x); };
    }
    return out;
}

// -------------------------------------------------------------------- CSV ----

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw FileError(path);
    }

    void header(const std::vector<std::string>& cols) { line(cols); }

    void row(const std::vector<double>& vals) {
        std::vector<std::string> cols;
        cols.reserve(vals.size());
        for (double v : vals) cols.push_back(num(v));
        line(cols);
    }

    void line(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out_ << ',';
            out_ << cols[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

inline std::vector<std::string> estimate_csv_header() {
    return {"sample", "input", "lhs", "rhs", "lhs_err", "rhs_err", "ratio"};
}

inline void write_estimate_csv(const std::string& path, const EstimateReport& r) {
    CsvWriter w(path);
    w.header(estimate_csv_header());
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
        const SampleRow& s = r.samples[i];
        double ratio = (s.rhs > 0.0) ? s.lhs / s.rhs : inf;
        w.line({std::to_string(i), s.input, num(s.lhs), num(s.rhs),
                num(s.lhs_err), num(s.rhs_err), num(ratio)});
    }
}

// ----------------------------------------------------------------- config ----

// Flat key=value format: one pair per line, '#' starts a comment, blank
// lines ignored.  Malformed lines report their line number.
inline std::map<std::string, std::string> parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        std::size_t a = s.find_first_not_of(" \t\r");
        std::size_t b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": empty key");
        kv[key] = val;
    }
    return kv;
}

inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
    return parse_config(read_file(path));
}

}  // namespace io
}  // namespace nlpot
