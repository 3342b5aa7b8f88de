// wcolab: command-line front end for the weighted-rotation laboratory.
//
// Eight subcommands cover the pipeline end to end: orbit discrepancy,
// Diophantine type certificates, fast-approximable angle generation, the
// closed-form spectral radius, operator power-bound scans, exceptional-set
// measure, the series functional calculus, and the invariant-subspace
// demonstration.
//
// Every run prints a human summary on stdout and writes a deterministic JSON
// report (schema_version, full configuration echo, results) to --out.
// Options may come from a flat key=value --config file; explicit flags win
// over the file, the file wins over built-in defaults.  Exit codes: 0
// success, 2 rejected input, 3 numeric abort (the message names the stage).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "wco/beurling.hpp"
#include "wco/calculus.hpp"
#include "wco/diophantine.hpp"
#include "wco/discrepancy.hpp"
#include "wco/errors.hpp"
#include "wco/gridfn.hpp"
#include "wco/irrational.hpp"
#include "wco/jsonio.hpp"
#include "wco/opbounds.hpp"
#include "wco/weights.hpp"

namespace {

using namespace wco;

RunConfig command_defaults(const std::string& cmd) {
    RunConfig cfg;
    cfg.command = cmd;
    if (cmd == "liouville-gen") {
        cfg.N = 8;
    } else if (cmd == "bounds-scan") {
        cfg.G = 20;
    } else if (cmd == "exceptional-measure") {
        cfg.M = 10000;
    } else if (cmd == "calculus-apply") {
        cfg.epsilon = 8.0;
    } else if (cmd == "demo-subspace") {
        cfg.epsilon = 8.0;
        cfg.M = 1024;
        cfg.G = 512;
    }
    return cfg;
}

void require_irrational(const IrrationalSpec& a, const std::string& cmd) {
    if (!a.exactly_rational()) return;
    throw UsageError(cmd +
                     ": a rational rotation makes every orbit periodic, so the composition map "
                     "is not ergodic and the operator already has a spectral invariant subspace; "
                     "this command needs an irrational angle");
}

// {10, 100, ...} up to and including N.
std::vector<long> decades_up_to(long N) {
    std::vector<long> out;
    for (long n = 10; n < N; n *= 10) out.push_back(n);
    out.push_back(N);
    return out;
}

double arg_double(const std::string& what, const std::string& text) {
    try {
        size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError(what + " is not a number: '" + text + "'");
    }
}

long arg_long(const std::string& what, const std::string& text) {
    try {
        size_t pos = 0;
        long v = std::stol(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError(what + " is not an integer: '" + text + "'");
    }
}

PsiSpec parse_psi(const std::string& text) {
    std::string kind = text, arg;
    size_t colon = text.find(':');
    if (colon != std::string::npos) {
        kind = text.substr(0, colon);
        arg = text.substr(colon + 1);
    }
    if (kind == "constant") return PsiSpec::constant(arg.empty() ? 1.0 : arg_double("psi constant", arg));
    if (kind == "power") return PsiSpec::power(arg.empty() ? 2 : arg_long("psi exponent", arg));
    if (kind == "stretched-exp")
        return PsiSpec::stretched_exp(arg.empty() ? 1.0 : arg_double("psi epsilon", arg));
    throw UsageError("unknown psi descriptor '" + text +
                     "' (expected constant:c, power:k, or stretched-exp:eps)");
}

std::string report_path(const RunConfig& cfg) {
    return cfg.out.empty() ? cfg.command + ".json" : cfg.out;
}

void write_report(const RunConfig& cfg, const Json& j) {
    std::string path = report_path(cfg);
    write_text_file(path, render_json(j));
    std::printf("  report: %s\n", path.c_str());
}

void check_precision(const RunConfig& cfg) {
    if (cfg.precision_bits < 8 || cfg.precision_bits > (1L << 20))
        throw UsageError("precision_bits must lie in [8, 1048576]");
}

// ---- subcommand runners ----

void run_discrepancy(const RunConfig& cfg) {
    if (cfg.N < 1) throw UsageError("discrepancy: N must be >= 1");
    if (!(cfg.x0 >= 0.0 && cfg.x0 < 1.0)) throw UsageError("discrepancy: x0 must lie in [0,1)");
    check_precision(cfg);
    auto a = IrrationalSpec::parse(cfg.alpha);
    auto seq = PointSequence::orbit(a, cfg.x0, cfg.N, true,
                                    static_cast<unsigned>(cfg.precision_bits));
    std::printf("discrepancy  alpha %s  x0 %.17g  N %ld\n", cfg.alpha.c_str(), cfg.x0, cfg.N);
    std::printf("  %10s  %12s  %s\n", "n", "D_n", "witness interval");
    Json rows = Json::array();
    DiscrepancyReport last;
    for (long n : decades_up_to(cfg.N)) {
        DiscrepancyReport r = discrepancy_fast(seq, n);
        std::printf("  %10ld  %12.8f  [%.8f, %.8f]\n", r.N, r.D_N, r.witness_lo, r.witness_hi);
        rows.push_back(json_of(r));
        last = r;
    }
    Json j = report_envelope(cfg);
    j["alpha_resolved"] = a.describe();
    j["rows"] = std::move(rows);
    j["D_N"] = last.D_N;
    write_report(cfg, j);
}

void run_type_check(const RunConfig& cfg) {
    if (cfg.N < 1) throw UsageError("type-check: N (the scan bound Q) must be >= 1");
    auto a = IrrationalSpec::parse(cfg.alpha);
    if (a.exactly_rational())
        throw UsageError("type-check: a rational angle has no approximation type, q<q alpha> "
                         "vanishes at its denominator; supply an irrational angle");
    PsiSpec psi = parse_psi(cfg.psi);
    TypeCertificate cert = type_check(a, psi, cfg.N);
    std::printf("type-check  alpha %s  psi %s  Q %ld\n", cfg.alpha.c_str(),
                cert.psi.describe().c_str(), cert.Q);
    std::printf("  min q<q alpha>  = %.6e at q = %ld\n", cert.min_product, cert.argmin_q);
    if (cert.consistent) {
        std::printf("  consistent: q<q alpha> >= 1/psi(q) for every q <= Q\n");
    } else {
        std::printf("  violated at %zu denominators (first q = %ld), clean from q = %ld on\n",
                    cert.violations.size(), cert.witness_q, cert.consistent_from);
    }
    Json j = report_envelope(cfg);
    j["alpha_resolved"] = a.describe();
    j["certificate"] = json_of(cert);
    write_report(cfg, j);
}

void run_liouville_gen(const RunConfig& cfg) {
    if (cfg.N < 2) throw UsageError("liouville-gen: N (= n_max) must be >= 2");
    if (!(cfg.epsilon > 0.0)) throw UsageError("liouville-gen: epsilon must be positive");
    LiouvilleReport rep = liouville_generate(10, cfg.epsilon, static_cast<unsigned>(cfg.N));
    std::printf("liouville-gen  base 10  epsilon %.17g  n_max %u (effective %u%s)\n", rep.epsilon,
                rep.n_max, rep.effective_n_max, rep.overflow ? ", exponent budget hit" : "");
    std::printf("  %4s  %12s  %8s  %8s\n", "n", "u_n", "growth", "type");
    for (unsigned n = 1; n <= rep.effective_n_max && n <= rep.u.size(); ++n) {
        bool has_cond = n < rep.effective_n_max && n - 1 < rep.cond_growth.size();
        std::printf("  %4u  %12lu  %8s  %8s\n", n, rep.u[n - 1],
                    has_cond ? (rep.cond_growth[n - 1] ? "ok" : "fail") : "-",
                    has_cond ? (rep.cond_type[n - 1] ? "ok" : "fail") : "-");
    }
    if (rep.n0 >= 0) std::printf("  both conditions hold from n0 = %ld onward\n", rep.n0);
    if (rep.alpha) std::printf("  alpha = %s\n", rep.alpha->describe().c_str());
    Json j = report_envelope(cfg);
    j["report"] = json_of(rep);
    write_report(cfg, j);
}

void run_spectral_radius(const RunConfig& cfg) {
    WeightP v = parse_weight(cfg.weight);
    SpectralData sd = spectral_radius(v);
    std::printf("spectral-radius  weight %s\n", cfg.weight.c_str());
    std::printf("  r            = %.15f\n", sd.r);
    std::printf("  normalized C = %.15f\n", sd.normalized_C);
    Json j = report_envelope(cfg);
    j.update(json_of(sd));
    write_report(cfg, j);
}

void run_bounds_scan(const RunConfig& cfg) {
    if (cfg.N < 1) throw UsageError("bounds-scan: N must be >= 1");
    if (cfg.G < 1) throw UsageError("bounds-scan: G must be >= 1");
    if (!(cfg.epsilon > 0.0)) throw UsageError("bounds-scan: epsilon must be positive");
    if (!(cfg.t > 0.0 && cfg.t < 1.0)) throw UsageError("bounds-scan: t must lie in (0,1)");
    check_precision(cfg);
    auto a = IrrationalSpec::parse(cfg.alpha);
    require_irrational(a, "bounds-scan");
    WeightP v = normalize(parse_weight(cfg.weight));
    BeurlingWeightFn wf(cfg.epsilon);
    ErgodicMap map = ErgodicMap::rotation(a);
    std::vector<std::vector<double>> x_grid;
    x_grid.reserve(cfg.G);
    for (long jx = 0; jx < cfg.G; ++jx) x_grid.push_back({(jx + 0.5) / cfg.G});
    std::vector<long> n_list = decades_up_to(cfg.N);
    auto fwd = forward_bound_scan(v, map, wf, n_list, x_grid,
                                  static_cast<unsigned>(cfg.precision_bits));
    auto bwd = backward_bound_scan(v, map, wf, n_list, cfg.t, x_grid, 0);
    long violations = 0;
    std::printf("bounds-scan  alpha %s  weight %s (normalized)  epsilon %.17g  t %.17g\n",
                cfg.alpha.c_str(), cfg.weight.c_str(), cfg.epsilon, cfg.t);
    std::printf("  %8s  %24s  %24s  %s\n", "n", "max ln U <= S*wt(n)", "max -ln L <= bound",
                "members");
    for (long n : n_list) {
        double fwd_max = 0.0, fwd_bound = 0.0, bwd_max = 0.0, bwd_bound = 0.0;
        long members = 0;
        for (const auto& r : fwd) {
            if (r.n != n) continue;
            fwd_max = std::max(fwd_max, r.value);
            fwd_bound = r.bound;
            if (r.value > r.bound) ++violations;
        }
        for (const auto& r : bwd) {
            if (r.n != n || !r.in_E_t) continue;
            ++members;
            bwd_max = std::max(bwd_max, r.value);
            bwd_bound = r.bound;
            if (r.value > r.bound) ++violations;
        }
        std::printf("  %8ld  %10.3f <= %10.3f  %10.3f <= %10.3f  %ld/%ld\n", n, fwd_max,
                    fwd_bound, bwd_max, bwd_bound, members, cfg.G);
    }
    std::printf("  violations: %ld\n", violations);
    Json j = report_envelope(cfg);
    j["alpha_resolved"] = a.describe();
    j["normalized_C"] = v.C;
    j["violations"] = violations;
    Json jf = Json::array(), jb = Json::array();
    for (const auto& r : fwd) jf.push_back(json_of(r));
    for (const auto& r : bwd) jb.push_back(json_of(r));
    j["forward"] = std::move(jf);
    j["backward"] = std::move(jb);
    write_report(cfg, j);
}

void run_exceptional_measure(const RunConfig& cfg) {
    if (cfg.N < 1) throw UsageError("exceptional-measure: N (orbit depth) must be >= 1");
    if (cfg.M < 1) throw UsageError("exceptional-measure: M (sample count) must be >= 1");
    if (!(cfg.t > 0.0 && cfg.t < 1.0)) throw UsageError("exceptional-measure: t must lie in (0,1)");
    auto a = IrrationalSpec::parse(cfg.alpha);
    require_irrational(a, "exceptional-measure");
    WeightP v = normalize(parse_weight(cfg.weight));
    ExceptionalSet set = ExceptionalSet::from_weight(cfg.t, v);
    ErgodicMap map = ErgodicMap::rotation(a);
    MeasureEstimate est = exceptional_set_measure(set, map, cfg.N, cfg.M,
                                                  static_cast<unsigned long>(cfg.seed), 0);
    std::printf("exceptional-measure  alpha %s  weight %s  t %.17g  depth %ld\n",
                cfg.alpha.c_str(), cfg.weight.c_str(), cfg.t, cfg.N);
    std::printf("  |E_t| ~ %.6f +/- %.6f  (%ld of %ld points stayed clear)\n", est.estimate,
                est.sigma, est.members, est.samples);
    std::printf("  analytic lower bound 1 - %ld*t*pi^2/3 = %.6f\n", set.zero_count(),
                set.measure_lower_bound());
    Json j = report_envelope(cfg);
    j["alpha_resolved"] = a.describe();
    j.update(json_of(est));
    j["zero_count"] = set.zero_count();
    j["analytic_lower_bound"] = set.measure_lower_bound();
    write_report(cfg, j);
}

void run_calculus_apply(const RunConfig& cfg) {
    if (cfg.M < 1) throw UsageError("calculus-apply: M must be >= 1");
    if (cfg.G < 2) throw UsageError("calculus-apply: G must be >= 2");
    if (!(cfg.epsilon > 0.0)) throw UsageError("calculus-apply: epsilon must be positive");
    if (!(cfg.t > 0.0 && cfg.t < 1.0)) throw UsageError("calculus-apply: t must lie in (0,1)");
    auto a = IrrationalSpec::parse(cfg.alpha);
    require_irrational(a, "calculus-apply");
    WeightP v = normalize(parse_weight(cfg.weight));
    BeurlingWeightFn wf(cfg.epsilon);
    ErgodicMap map = ErgodicMap::rotation(a);
    // 4M keeps the stored window well past the truncation point; the floor
    // keeps the bump's dropped-mass certificate below its 1e-8 tolerance.
    long trunc = std::max(4 * cfg.M, 1024L);
    BeurlingSymbol phi = bump(0.25, 0.1, wf, 8, trunc);
    GridFunction f = GridFunction::constant(1.0) + GridFunction::harmonic(1).scaled(0.25) +
                     GridFunction::harmonic(-1).scaled(0.25);

    std::vector<long> Ms;
    for (long m : {cfg.M / 4, cfg.M / 2, cfg.M})
        if (m >= 1 && (Ms.empty() || Ms.back() != m)) Ms.push_back(m);
    std::vector<CalculusResult> results;
    results.reserve(Ms.size());
    for (long m : Ms) results.push_back(apply_calculus(phi, v, map, f, m, cfg.t, cfg.G));

    std::printf("calculus-apply  phi = bump(0.25, 0.1)  f = 1 + cos(2 pi x)/2  grid %ld\n", cfg.G);
    std::printf("  %8s  %14s  %14s\n", "M", "residual", "tail bound");
    Json curve = Json::array();
    std::string csv_text = "M,residual,tail\n";
    for (size_t i = 0; i < results.size(); ++i) {
        double residual = 0.0;
        if (i > 0) {
            std::vector<Cplx> diff(results[i].samples);
            for (size_t k = 0; k < diff.size(); ++k) diff[k] -= results[i - 1].samples[k];
            residual = norm_of_samples_masked(diff, results[i].p, results[i].mask);
        }
        std::printf("  %8ld  %14.6e  %14.6e\n", results[i].M, residual, results[i].tail_bound);
        Json row;
        row["M"] = results[i].M;
        row["residual"] = residual;
        row["tail"] = results[i].tail_bound;
        curve.push_back(std::move(row));
        char line[96];
        std::snprintf(line, sizeof line, "%ld,%.17g,%.17g\n", results[i].M, residual,
                      results[i].tail_bound);
        csv_text += line;
    }
    const CalculusResult& fin = results.back();
    std::printf("  ||phi(T)f||_%g = %.9f  +/- %.3e  on %ld/%ld clear nodes\n", fin.p, fin.norm(),
                fin.tail_bound, fin.masked_count(), fin.grid);
    Json j = report_envelope(cfg);
    j["alpha_resolved"] = a.describe();
    j["normalized_C"] = v.C;
    j["curve"] = std::move(curve);
    j["result"] = json_of(fin, true);
    write_report(cfg, j);
    if (!cfg.csv.empty()) {
        write_text_file(cfg.csv, csv_text);
        std::printf("  curve csv: %s\n", cfg.csv.c_str());
    }
}

void run_demo_subspace(const RunConfig& cfg) {
    if (cfg.M < 1) throw UsageError("demo-subspace: M must be >= 1");
    if (cfg.G < 2) throw UsageError("demo-subspace: G must be >= 2");
    if (!(cfg.epsilon > 0.0)) throw UsageError("demo-subspace: epsilon must be positive");
    if (!(cfg.t > 0.0 && cfg.t < 1.0)) throw UsageError("demo-subspace: t must lie in (0,1)");
    DemoConfig dc = DemoConfig::defaults();
    dc.v = parse_weight(cfg.weight);
    dc.alpha = IrrationalSpec::parse(cfg.alpha);
    dc.epsilon = cfg.epsilon;
    dc.t = cfg.t;
    dc.M = cfg.M;
    dc.grid = cfg.G;
    dc.bump_trunc = std::max(4 * cfg.M, 1024L);
    DemoReport rep = hyperinvariant_demo(dc);
    std::printf("demo-subspace  alpha %s  weight %s  M %ld  grid %ld\n", cfg.alpha.c_str(),
                cfg.weight.c_str(), cfg.M, cfg.G);
    for (const auto& s : rep.stages)
        std::printf("  [%s] %-14s %.6e vs %.6e  (%s)\n", s.passed ? "OK" : "--", s.name.c_str(),
                    s.value, s.tolerance, s.note.c_str());
    std::printf("  verdict: %s\n", rep.all_passed
                                       ? "all four certificates hold"
                                       : "at least one certificate failed; see stages");
    Json j = report_envelope(cfg);
    j.update(json_of(rep));
    write_report(cfg, j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted-rotation operator laboratory"};
    app.require_subcommand(1);

    std::string config_path, alpha, weight, psi, out, csv;
    double epsilon = 0.0, t = 0.0, x0 = 0.0;
    long N = 0, M = 0, G = 0, bits = 0, seed = 0;

    auto* o_config = app.add_option("--config", config_path, "flat key=value configuration file");
    auto* o_alpha = app.add_option(
        "--alpha", alpha,
        "rotation angle: golden, silver, surd:p,d,q, liouville:b,eps,n, rational:p/q, or a decimal");
    auto* o_weight = app.add_option("--weight", weight, "weight descriptor, e.g. \"e*x\"");
    auto* o_psi =
        app.add_option("--psi", psi, "approximation-rate family: constant:c, power:k, stretched-exp:eps");
    auto* o_eps = app.add_option("--epsilon", epsilon, "weight-function strength");
    auto* o_t = app.add_option("--t", t, "exceptional-set clearance in (0,1)");
    auto* o_x0 = app.add_option("--x0", x0, "orbit starting point in [0,1)");
    auto* o_N = app.add_option("--N", N, "sequence length / scan depth / type bound Q");
    auto* o_M = app.add_option("--M", M, "series truncation / Monte-Carlo sample count");
    auto* o_G = app.add_option("--G", G, "evaluation grid size");
    auto* o_bits = app.add_option("--precision-bits", bits, "orbit arithmetic precision");
    auto* o_seed = app.add_option("--seed", seed, "Monte-Carlo seed");
    auto* o_out = app.add_option("--out", out, "JSON report path (default <command>.json)");
    auto* o_csv = app.add_option("--csv", csv, "CSV path for the (M, residual, tail) curve");

    const std::pair<const char*, const char*> kCommands[] = {
        {"discrepancy", "orbit discrepancy D_N with witness intervals"},
        {"type-check", "certified scan of q<q alpha> >= 1/psi(q)"},
        {"liouville-gen", "generate the base-10 factorial-series angle and check its growth"},
        {"spectral-radius", "closed-form spectral radius of the weighted rotation"},
        {"bounds-scan", "forward/backward operator power bounds along the orbit"},
        {"exceptional-measure", "Monte-Carlo measure of the clearance set E_t"},
        {"calculus-apply", "apply a bump symbol through the series calculus"},
        {"demo-subspace", "end-to-end invariant-subspace demonstration"},
    };
    for (const auto& [name, blurb] : kCommands) app.add_subcommand(name, blurb)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        RunConfig cfg = command_defaults(cmd);
        if (o_config->count()) cfg = parse_config_file(config_path, std::move(cfg));
        cfg.command = cmd;  // the invoked subcommand wins over any command= line
        if (o_alpha->count()) cfg.alpha = alpha;
        if (o_weight->count()) cfg.weight = weight;
        if (o_psi->count()) cfg.psi = psi;
        if (o_eps->count()) cfg.epsilon = epsilon;
        if (o_t->count()) cfg.t = t;
        if (o_x0->count()) cfg.x0 = x0;
        if (o_N->count()) cfg.N = N;
        if (o_M->count()) cfg.M = M;
        if (o_G->count()) cfg.G = G;
        if (o_bits->count()) cfg.precision_bits = bits;
        if (o_seed->count()) cfg.seed = seed;
        if (o_out->count()) cfg.out = out;
        if (o_csv->count()) cfg.csv = csv;

        if (cmd == "discrepancy") run_discrepancy(cfg);
        else if (cmd == "type-check") run_type_check(cfg);
        else if (cmd == "liouville-gen") run_liouville_gen(cfg);
        else if (cmd == "spectral-radius") run_spectral_radius(cfg);
        else if (cmd == "bounds-scan") run_bounds_scan(cfg);
        else if (cmd == "exceptional-measure") run_exceptional_measure(cfg);
        else if (cmd == "calculus-apply") run_calculus_apply(cfg);
        else run_demo_subspace(cfg);
        return 0;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const LabError& e) {
        std::fprintf(stderr, "abort: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "abort: %s\n", e.what());
        return 3;
    }
}
