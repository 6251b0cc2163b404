// Command-line surface for the nonlinear-potential toolkit: evaluate
// potentials against stored measures, run the inequality verifiers, build
// singular ladders, classify blow-up regions, emit sweep tables, trace the
// integrability ladder, and exercise the representation round trip.
//
// Exit codes: 0 success (including Inconclusive verdicts), 1 usage or
// contract violation, 2 missing input file, 3 a verifier returned Violated.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlpot/asymptotics.hpp"
#include "nlpot/constructor.hpp"
#include "nlpot/core.hpp"
#include "nlpot/estimates.hpp"
#include "nlpot/io.hpp"
#include "nlpot/measure.hpp"
#include "nlpot/parallel.hpp"
#include "nlpot/potentials.hpp"
#include "nlpot/repr.hpp"

using nlohmann::json;
using namespace nlpot;

namespace {

struct Globals {
    std::string config_path;
    std::string out = ".";
    long long seed = 1;
    int grid = 0;    // 0 = keep the spec default
    int rings = 0;
    int probes = 0;
    int workers = 1;
};

Globals G;
CLI::Option* opt_seed = nullptr;
CLI::Option* opt_out = nullptr;
CLI::Option* opt_grid = nullptr;
CLI::Option* opt_rings = nullptr;
CLI::Option* opt_probes = nullptr;
CLI::Option* opt_workers = nullptr;

void apply_config() {
    if (G.config_path.empty()) return;
    auto kv = io::parse_config_file(G.config_path);
    for (const auto& [key, val] : kv) {
        if (key == "seed") {
            if (!opt_seed->count()) G.seed = std::stoll(val);
        } else if (key == "out") {
            if (!opt_out->count()) G.out = val;
        } else if (key == "grid") {
            if (!opt_grid->count()) G.grid = std::stoi(val);
        } else if (key == "rings") {
            if (!opt_rings->count()) G.rings = std::stoi(val);
        } else if (key == "probes") {
            if (!opt_probes->count()) G.probes = std::stoi(val);
        } else if (key == "workers") {
            if (!opt_workers->count()) G.workers = std::stoi(val);
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
}

std::string out_path(const std::string& name) {
    std::filesystem::create_directories(G.out);
    return (std::filesystem::path(G.out) / name).string();
}

// JSON refuses non-finite numbers; keep them readable as strings
json jnum(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

json bound_to_json(const BoundDescriptor& d, bool at_infinity = false) {
    return {{"base_exponent", jnum(d.base_exponent)},
            {"log_power", d.log_power},
            {"flavor", flavor_name(d.flavor)},
            {"epsilon_slack", d.epsilon_slack},
            {"display", format_bound(d, at_infinity)}};
}

PotentialSpec load_spec(const std::string& file) {
    PotentialSpec spec;
    if (!file.empty()) spec = io::spec_from_json(io::parse_json_file(file));
    if (G.grid > 0) spec.grid = G.grid;
    if (G.rings > 0) spec.quad_rings = G.rings;
    spec.validate();
    return spec;
}

std::vector<Vec> load_probes(const std::string& file) {
    json j = io::parse_json_file(file);
    io::check_schema(j, "probes");
    return j.at("points").get<std::vector<Vec>>();
}

// rate strings for target profiles of r in (0,1):
//   "pow:e" -> r^{-e}, "log" -> log(2/r), "powlog:e,p" -> r^{-e} log(2/r)^p,
//   "const:c" -> c
std::function<double(double)> parse_rate(const std::string& s) {
    auto colon = s.find(':');
    std::string head = s.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (head == "const") {
        double c = std::stod(args);
        return [c](double) { return c; };
    }
    if (head == "log")
        return [](double r) { return std::log(2.0 / r); };
    if (head == "pow") {
        double e = std::stod(args);
        return [e](double r) { return std::pow(r, -e); };
    }
    if (head == "powlog") {
        auto comma = args.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("rate: powlog needs 'e,p'");
        double e = std::stod(args.substr(0, comma));
        double p = std::stod(args.substr(comma + 1));
        return [e, p](double r) {
            return std::pow(r, -e) * std::pow(std::log(2.0 / r), p);
        };
    }
    throw std::invalid_argument("rate: unknown form '" + s + "'");
}

Vec parse_point(const std::string& s) {
    Vec v;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ',')) v.push_back(std::stod(tok));
    if (v.empty()) throw std::invalid_argument("point: expected comma-separated reals");
    return v;
}

// ------------------------------------------------------------- potential ----

struct PotentialArgs {
    std::string op, measure_file, spec_file, probe_file;
};

int cmd_potential(const PotentialArgs& a) {
    apply_config();
    PotentialOp op = op_from_name(a.op);
    Measure mu = io::measure_from_json(io::parse_json_file(a.measure_file));
    PotentialSpec spec = load_spec(a.spec_file);
    std::vector<Vec> probes = load_probes(a.probe_file);

    io::CsvWriter csv(out_path("potential.csv"));
    std::vector<std::string> header;
    for (int d = 0; d < mu.dim(); ++d) header.push_back("x" + std::to_string(d + 1));
    header.push_back("value");
    header.push_back("error_estimate");
    csv.header(header);
    for (const Vec& x : probes) {
        PotentialValue pv = evaluate(op, mu, x, spec);
        std::vector<double> row(x);
        row.push_back(pv.value);
        row.push_back(pv.error);
        csv.row(row);
    }
    std::cout << "wrote " << probes.size() << " rows\n";
    return 0;
}

// ---------------------------------------------------------------- verify ----

struct VerifyArgs {
    std::string id, measure_file, spec_file, x0 = "0.25,0,0";
    double alpha = 1.0, p = 2.0, c = 1.0, sigma = 3.0, s = 1.0, K = 0.0, R = 0.5;
};

Measure default_dirac() {
    return Measure::atomic(3, {{0.0, 0.0, 0.0}}, {1.0});
}

Measure default_density(int cells) {
    return grid_from_function(3, {-0.5, -0.5, -0.5}, 1.0, cells, [](const Vec& y) {
        double r2 = sq(y[0]) + sq(y[1]) + sq(y[2]);
        return std::exp(-4.0 * r2);
    });
}

int cmd_verify(const VerifyArgs& a) {
    apply_config();
    EstimateId id = estimate_from_name(a.id);
    PotentialSpec spec = load_spec(a.spec_file);
    int probes = G.probes > 0 ? G.probes : 0;

    EstimateReport rep;
    switch (id) {
        case EstimateId::Thm41_ub1:
        case EstimateId::Thm41_ub2: {
            Measure f = a.measure_file.empty()
                            ? default_density(spec.grid)
                            : io::measure_from_json(io::parse_json_file(a.measure_file));
            rep = verify_thm41(f, a.sigma, a.s, spec, probes ? probes : 8);
            break;
        }
        case EstimateId::Cor41_super:
        case EstimateId::Cor41_crit: {
            Measure g = a.measure_file.empty()
                            ? default_density(spec.grid)
                            : io::measure_from_json(io::parse_json_file(a.measure_file));
            rep = verify_cor41(g, a.sigma, spec, probes ? probes : 8);
            break;
        }
        case EstimateId::Thm42_lower:
        case EstimateId::Thm42_upper:
        case EstimateId::Thm42_phi: {
            Measure mu = a.measure_file.empty()
                             ? default_dirac()
                             : io::measure_from_json(io::parse_json_file(a.measure_file));
            rep = verify_thm42(mu, a.alpha, a.p, a.c, id, spec, probes ? probes : 16);
            break;
        }
        case EstimateId::Thm43_a:
        case EstimateId::Thm43_b: {
            Measure mu = a.measure_file.empty()
                             ? default_dirac()
                             : io::measure_from_json(io::parse_json_file(a.measure_file));
            double K = a.K;
            if (K <= 0.0)
                throw std::invalid_argument("verify: --K must be positive for this id");
            rep = verify_thm43(mu, a.alpha, a.p, K, spec, probes ? probes : 16);
            break;
        }
        case EstimateId::Thm44_est1:
        case EstimateId::Thm44_est2:
        case EstimateId::Thm44_est3:
        case EstimateId::Thm44_est4: {
            Measure f = a.measure_file.empty()
                            ? default_density(spec.grid)
                            : io::measure_from_json(io::parse_json_file(a.measure_file));
            rep = verify_thm44(f, a.alpha, a.p, a.s, id, spec, probes ? probes : 12);
            break;
        }
        case EstimateId::Lemma42: {
            Vec x0 = parse_point(a.x0);
            int count = probes ? probes : 16;
            std::vector<Vec> pts;
            std::size_t cursor = static_cast<std::size_t>(G.seed);
            for (int i = 0; i < count; ++i) {
                Vec h = halton_point(cursor++, static_cast<int>(x0.size()));
                Vec p(x0.size());
                for (std::size_t d = 0; d < x0.size(); ++d)
                    p[d] = x0[d] + (2.0 * h[d] - 1.0) * 2.0 * a.R;
                pts.push_back(p);
            }
            rep = verify_lemma42(x0, a.R, pts, spec);
            break;
        }
    }

    json j = io::report_to_json(rep);
    j["max_ratio"] = jnum(rep.max_ratio);
    j["min_ratio"] = jnum(rep.min_ratio);
    j["fitted_C"] = jnum(rep.fitted_C);
    io::write_file(out_path("verify_" + a.id + ".json"), j.dump(2) + "\n");
    io::write_estimate_csv(out_path("verify_" + a.id + "_samples.csv"), rep);
    std::cout << j.dump(2) << "\n";
    return rep.verdict == Verdict::Violated ? 3 : 0;
}

// ------------------------------------------------------------- construct ----

struct ConstructArgs {
    std::string tag;
    int n = 3, count = 8, samples = 48;
    double lambda = 4.0, sigma = 2.9, ratio = 0.2, first_norm = 0.2;
    double phi_power = 1.0, psi_power = 1.0, profile_power = 2.0, factor = 4.0;
    std::string rate;  // empty: per-tag default
};

json lemma41_report_json(const Lemma41Report& rep) {
    return {{"density_cap_ok", rep.density_cap_ok},
            {"harmonic_ok", rep.harmonic_ok},
            {"lower_bound_ok", rep.lower_bound_ok},
            {"floor_ok", rep.floor_ok},
            {"integral_ok", rep.integral_ok},
            {"max_density_excess", jnum(rep.max_density_excess)},
            {"max_harmonic_residual", jnum(rep.max_harmonic_residual)},
            {"max_harmonic_allowance", jnum(rep.max_harmonic_allowance)},
            {"min_lower_margin", jnum(rep.min_lower_margin)},
            {"min_u", jnum(rep.min_u)},
            {"integral_rel_dev", jnum(rep.integral_rel_dev)},
            {"skipped_balls", rep.skipped_balls},
            {"all_ok", rep.all_ok()}};
}

int cmd_construct(const ConstructArgs& a) {
    apply_config();
    SeedSequence seed;
    std::function<double(double)> target;  // rate the blow-up is measured against
    std::string tag = a.tag;

    if (tag == "lemma41") {
        seed.dim = a.n;
        seed.points = make_xseq(a.ratio, a.first_norm, a.count, a.n);
        for (const Vec& p : seed.points) seed.radii.push_back(0.5 * norm2(p));
        double q = a.phi_power;
        for (const Vec& p : seed.points)
            seed.phi_values.push_back(std::pow(norm2(p), q));
        int n = a.n;
        target = [n](double r) { return gamma_kernel(r, n); };
    } else if (tag == "thm22") {
        auto growth = [](double t) { return std::exp(t * t); };
        auto h = parse_rate(a.rate.empty() ? "log" : a.rate);
        double onset = 0.0;
        seed = schedule_thm22(growth, growth, h, a.ratio,
                              a.first_norm > 0.0 ? a.first_norm : 0.45, a.count,
                              &onset);
        // the schedule guarantees u(x_j) clears h(|x_j|)^2 on each center
        target = [h](double r) { return sq(h(r)); };
    } else if (tag == "thm62") {
        double k = a.profile_power;
        if (!(k > 1.0))
            throw std::invalid_argument("construct: --profile-power must exceed 1");
        seed = schedule_thm62([k](double t) { return std::pow(t, k); }, a.ratio,
                              a.first_norm, a.count);
        target = [](double r) { return gamma_kernel(r, 2); };
    } else if (tag == "thm33") {
        double q = a.psi_power;
        seed = schedule_thm33(a.lambda, a.n,
                              [q](double r) { return std::pow(r, q); }, a.ratio,
                              a.first_norm, a.count);
        double e = sq(a.n - 2.0) * a.lambda / a.n;
        target = [q, e](double r) { return std::pow(r, q) * std::pow(r, -e); };
    } else if (tag == "thm34") {
        auto h = parse_rate(a.rate.empty() ? "pow:0.5" : a.rate);
        Thm34Seeds pair = schedule_thm34(a.lambda, a.sigma, a.n, h, a.ratio,
                                         a.first_norm, a.count);
        io::write_file(out_path("construct_thm34_vseed.json"),
                       io::seed_to_json(pair.v_seed).dump(2) + "\n");
        seed = pair.u_seed;
        target = h;  // the paired schedule outruns the prescribed rate itself
    } else {
        throw std::invalid_argument("construct: unknown tag '" + tag + "'");
    }

    SingularSolution sol = lemma41_build(seed, seed.dim);
    Lemma41Report checks = check_lemma41(sol, a.samples);
    BlowupReport blow = measure_blowup(sol, target, a.factor);

    io::write_file(out_path("construct_" + tag + "_seed.json"),
                   io::seed_to_json(seed).dump(2) + "\n");
    io::CsvWriter csv(out_path("construct_" + tag + "_rates.csv"));
    csv.header({"j", "center_norm", "radius", "u", "ratio"});
    for (std::size_t j = 0; j < blow.ratios.size(); ++j)
        csv.row({static_cast<double>(j + 1), blow.center_norms[j], blow.radii[j],
                 blow.u_values[j], blow.ratios[j]});

    json j;
    j["schema_version"] = io::schema_version;
    j["tag"] = tag;
    j["checks"] = lemma41_report_json(checks);
    j["blowup"] = {{"verdict", blowup_verdict_name(blow.verdict)},
                   {"growth", jnum(blow.growth)}};
    io::write_file(out_path("construct_" + tag + "_checks.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

// -------------------------------------------------------------- classify ----

struct ClassifyArgs {
    double lambda = 0.0, sigma = 0.0, alpha = 0.0, beta = 0.0;
    int n = 3;
    bool with_weights = false;
};

int cmd_classify(const ClassifyArgs& a) {
    apply_config();
    RegionOutcome cell = sweep_cell(a.lambda, a.sigma, a.n);
    json j;
    j["schema_version"] = io::schema_version;
    j["lambda"] = a.lambda;
    j["sigma"] = a.sigma;
    j["n"] = a.n;
    j["region"] = region_name(cell.region);
    j["has_pointwise_bounds"] = cell.has_bounds;
    if (cell.has_bounds) {
        j["u"] = bound_to_json(cell.u);
        j["v"] = bound_to_json(cell.v);
    } else {
        j["marker"] = "no pointwise bound";
    }
    if (a.with_weights) {
        SystemBounds wb = bounds_thm37(a.lambda, a.sigma, a.n, a.alpha, a.beta);
        j["weighted"] = {{"alpha", a.alpha},
                         {"beta", a.beta},
                         {"u", bound_to_json(wb.u)},
                         {"v", bound_to_json(wb.v)}};
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

// ----------------------------------------------------------------- sweep ----

struct SweepArgs {
    int n = 3, steps = 200;
    double max = 6.0;
};

int cmd_sweep(const SweepArgs& a) {
    apply_config();
    if (a.steps < 2) throw std::invalid_argument("sweep: need at least 2 steps");
    struct RowData {
        double lambda, sigma;
        Region region;
        double ue, ve;
    };
    std::vector<std::vector<RowData>> rows(static_cast<std::size_t>(a.steps));
    parallel_for(static_cast<std::size_t>(a.steps), G.workers, [&](std::size_t i) {
        double lambda = a.max * static_cast<double>(i) / (a.steps - 1);
        for (std::size_t jx = 0; jx <= i; ++jx) {
            double sigma = a.max * static_cast<double>(jx) / (a.steps - 1);
            RegionOutcome cell = sweep_cell(lambda, std::min(sigma, lambda), a.n);
            double ue = cell.has_bounds ? cell.u.base_exponent
                                        : std::nan("");
            double ve = cell.has_bounds ? cell.v.base_exponent
                                        : std::nan("");
            rows[i].push_back({lambda, sigma, cell.region, ue, ve});
        }
    });
    io::CsvWriter csv(out_path("sweep.csv"));
    csv.header({"lambda", "sigma", "region", "u_exponent", "v_exponent"});
    std::size_t total = 0;
    for (const auto& line : rows)
        for (const RowData& r : line) {
            csv.line({io::num(r.lambda), io::num(r.sigma), region_name(r.region),
                      io::num(r.ue), io::num(r.ve)});
            ++total;
        }
    std::cout << "wrote " << total << " cells\n";
    return 0;
}

// ----------------------------------------------------------------- moser ----

struct MoserArgs {
    int n = 3;
    double lambda = 4.0, sigma = 2.2;
};

int cmd_moser(const MoserArgs& a) {
    apply_config();
    MoserTrace tr = moser_ledger(a.n, a.lambda, a.sigma);
    json steps = json::array();
    for (const MoserStep& s : tr.steps)
        steps.push_back({{"p", jnum(s.p)},
                         {"p2", jnum(s.p2)},
                         {"p3", jnum(s.p3)},
                         {"q", jnum(s.q)}});
    json j;
    j["schema_version"] = io::schema_version;
    j["epsilon"] = tr.epsilon;
    j["C0"] = tr.C0;
    j["C1"] = tr.C1;
    j["C2"] = tr.C2;
    j["steps"] = steps;
    j["m"] = tr.m;
    j["step_bound"] = tr.step_bound;
    j["reached_infinity"] = tr.reached_infinity;
    io::write_file(out_path("moser.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------------ repr ----

struct ReprArgs {
    std::string mode = "mass", file, probe_file;
};

int cmd_repr(const ReprArgs& a) {
    apply_config();
    io::LoadedDecomposition loaded =
        io::decomposition_from_json(io::parse_json_file(a.file));
    const Decomposition& dec = loaded.dec;
    int n = dec.mu ? dec.mu->dim() : 3;
    auto u = [&](const Vec& x) { return compose_brezis_lions(dec, x); };

    json j;
    j["schema_version"] = io::schema_version;
    j["mode"] = a.mode;
    if (a.mode == "compose") {
        if (a.probe_file.empty())
            throw std::invalid_argument("repr compose: --probes file required");
        std::vector<Vec> pts = load_probes(a.probe_file);
        io::CsvWriter csv(out_path("repr_compose.csv"));
        std::vector<std::string> header;
        for (int d = 0; d < n; ++d) header.push_back("x" + std::to_string(d + 1));
        header.push_back("value");
        csv.header(header);
        for (const Vec& x : pts) {
            std::vector<double> row(x);
            row.push_back(u(x));
            csv.row(row);
        }
        j["rows"] = pts.size();
    } else if (a.mode == "mass") {
        MassEstimate est = estimate_point_mass(u, n);
        j["m"] = jnum(est.m);
        j["verdict"] = verdict_name(est.verdict);
        j["drift"] = jnum(est.drift);
    } else if (a.mode == "bound") {
        HarmonicBoundReport rep = harmonic_bound_verdict(u, n);
        j["verdict"] = blowup_verdict_name(rep.verdict);
        j["sup_ratio"] = jnum(rep.sup_ratio);
    } else if (a.mode == "check") {
        std::vector<Vec> samples;
        std::size_t cursor = static_cast<std::size_t>(G.seed);
        double R = 0.8 * dec.epsilon;
        int count = G.probes > 0 ? G.probes : 12;
        while (static_cast<int>(samples.size()) < count) {
            Vec h = halton_point(cursor++, n);
            Vec p(static_cast<std::size_t>(n));
            double r2 = 0.0;
            for (int d = 0; d < n; ++d) {
                p[d] = (2.0 * h[d] - 1.0) * R;
                r2 += sq(p[d]);
            }
            if (std::sqrt(r2) < 0.1 * dec.epsilon) continue;
            samples.push_back(p);
        }
        SuperharmonicReport rep =
            superharmonic_check(u, samples, 0.02 * dec.epsilon, n);
        j["verdict"] = verdict_name(rep.verdict);
        j["max_laplacian"] = jnum(rep.max_laplacian);
        j["allowance_at_max"] = jnum(rep.allowance_at_max);
        j["samples"] = rep.samples;
    } else {
        throw std::invalid_argument("repr: unknown mode '" + a.mode + "'");
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

template <class F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const io::FileError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlinear potential toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--config", G.config_path, "flat key=value config file");
    opt_seed = app.add_option("--seed", G.seed, "probe-stream seed");
    opt_out = app.add_option("--out", G.out, "output directory");
    opt_grid = app.add_option("--grid", G.grid, "grid cells per axis override");
    opt_rings = app.add_option("--rings", G.rings, "quadrature ring override");
    opt_probes = app.add_option("--probes", G.probes, "probe count override");
    opt_workers = app.add_option("--workers", G.workers, "worker threads");

    PotentialArgs pa;
    auto* sp = app.add_subcommand("potential", "evaluate a potential over probes");
    sp->add_option("--op", pa.op, "operator name")->required();
    sp->add_option("--measure", pa.measure_file, "measure JSON file")->required();
    sp->add_option("--spec", pa.spec_file, "potential spec JSON file");
    sp->add_option("--probe-file", pa.probe_file, "probe points JSON file")
        ->required();
    sp->callback([&] { std::exit(guarded([&] { return cmd_potential(pa); })); });

    VerifyArgs va;
    auto* sv = app.add_subcommand("verify", "run a pointwise-estimate verifier");
    sv->add_option("--id", va.id, "estimate identifier")->required();
    sv->add_option("--measure", va.measure_file, "measure JSON file");
    sv->add_option("--spec", va.spec_file, "potential spec JSON file");
    sv->add_option("--alpha", va.alpha, "kernel order");
    sv->add_option("--p", va.p, "nonlinearity index");
    sv->add_option("--c", va.c, "exponential damping");
    sv->add_option("--sigma", va.sigma, "composition exponent");
    sv->add_option("--s", va.s, "integrability index");
    sv->add_option("--K", va.K, "uniform potential bound hypothesis");
    sv->add_option("--R", va.R, "ball radius");
    sv->add_option("--x0", va.x0, "ball center, comma separated");
    sv->callback([&] { std::exit(guarded([&] { return cmd_verify(va); })); });

    ConstructArgs ca;
    auto* sc = app.add_subcommand("construct", "build a singular ladder");
    sc->add_option("--tag", ca.tag, "lemma41|thm22|thm62|thm33|thm34")->required();
    sc->add_option("--n", ca.n, "dimension");
    sc->add_option("--count", ca.count, "number of centers");
    sc->add_option("--samples", ca.samples, "samples per ball for the checks");
    sc->add_option("--lambda", ca.lambda, "first exponent");
    sc->add_option("--sigma", ca.sigma, "second exponent");
    sc->add_option("--ratio", ca.ratio, "center shrink ratio");
    sc->add_option("--first-norm", ca.first_norm, "norm of the first center");
    sc->add_option("--phi-power", ca.phi_power, "bump height power for lemma41");
    sc->add_option("--psi-power", ca.psi_power, "target profile power for thm33");
    sc->add_option("--profile-power", ca.profile_power,
                   "superlinear profile power for thm62");
    sc->add_option("--rate", ca.rate, "target rate string for thm22/thm34");
    sc->add_option("--factor", ca.factor, "divergence factor");
    sc->callback([&] { std::exit(guarded([&] { return cmd_construct(ca); })); });

    ClassifyArgs cla;
    auto* scl = app.add_subcommand("classify", "region and rate for one pair");
    scl->add_option("--lambda", cla.lambda, "first exponent")->required();
    scl->add_option("--sigma", cla.sigma, "second exponent")->required();
    scl->add_option("--n", cla.n, "dimension");
    auto* oa = scl->add_option("--alpha", cla.alpha, "weight power for u");
    auto* ob = scl->add_option("--beta", cla.beta, "weight power for v");
    scl->callback([&] {
        cla.with_weights = oa->count() > 0 || ob->count() > 0;
        std::exit(guarded([&] { return cmd_classify(cla); }));
    });

    SweepArgs swa;
    auto* ss = app.add_subcommand("sweep", "region sweep CSV over the triangle");
    ss->add_option("--n", swa.n, "dimension");
    ss->add_option("--steps", swa.steps, "grid steps per axis");
    ss->add_option("--max", swa.max, "upper limit for both exponents");
    ss->callback([&] { std::exit(guarded([&] { return cmd_sweep(swa); })); });

    MoserArgs ma;
    auto* sm = app.add_subcommand("moser", "integrability ladder trace");
    sm->add_option("--n", ma.n, "dimension");
    sm->add_option("--lambda", ma.lambda, "first exponent")->required();
    sm->add_option("--sigma", ma.sigma, "second exponent")->required();
    sm->callback([&] { std::exit(guarded([&] { return cmd_moser(ma); })); });

    ReprArgs ra;
    auto* sr = app.add_subcommand("repr", "representation round trips");
    sr->add_option("--mode", ra.mode, "compose|mass|bound|check");
    sr->add_option("--file", ra.file, "decomposition JSON file")->required();
    sr->add_option("--probe-file", ra.probe_file, "probe points JSON file");
    sr->callback([&] { std::exit(guarded([&] { return cmd_repr(ra); })); });

    CLI11_PARSE(app, argc, argv);
    return 0;
}
