// Acceptance program: ten end-to-end properties of the laboratory, one
// verdict line each.  Every tolerance is pinned in this file next to the
// check it guards; a property that fails reports its measured value rather
// than aborting the remaining ones.  The process exit code is the number of
// failed properties.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "wco/beurling.hpp"
#include "wco/calculus.hpp"
#include "wco/diophantine.hpp"
#include "wco/discrepancy.hpp"
#include "wco/errors.hpp"
#include "wco/gridfn.hpp"
#include "wco/irrational.hpp"
#include "wco/opbounds.hpp"
#include "wco/weights.hpp"

namespace {

using namespace wco;

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// 1. Closed-form spectral radius of v(x) = x is exactly 1/e, and the
//    Birkhoff orbit average at N = 1e5 lands within 1e-2 of it.
bool crit_spectral_radius(std::string& d) {
    SpectralData sd = spectral_radius(parse_weight("x"));
    double closed_err = std::fabs(sd.r - std::exp(-1.0));
    double est = birkhoff_radius_estimate(parse_weight("x"), IrrationalSpec::golden(), 100000, 0.1);
    double birk_err = std::fabs(est - std::exp(-1.0));
    d = fmt("|r - 1/e| = %.2e (tol 1e-12); Birkhoff N=1e5 err %.2e (tol 1e-2)", closed_err,
            birk_err);
    return closed_err <= 1e-12 && birk_err <= 1e-2;
}

// 2. Discrepancy oracle and fast path agree to 1e-12 on 1000 random draws,
//    and the golden orbit satisfies N D_N / ln N <= 3 up to N = 1e5.
bool crit_discrepancy(std::string& d) {
    std::mt19937_64 rng(20260818);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double max_gap = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        long N = 1 + static_cast<long>(rng() % 500);
        std::vector<double> pts(N);
        for (double& p : pts) p = unif(rng);
        PointSequence seq = PointSequence::from_points(pts);
        double gap = std::fabs(discrepancy_oracle(seq, N).D_N - discrepancy_fast(seq, N).D_N);
        max_gap = std::max(max_gap, gap);
    }
    PointSequence gold = PointSequence::orbit(IrrationalSpec::golden(), 0.0, 100000, true, 192);
    double max_ratio = 0.0;
    for (long N : {100L, 1000L, 10000L, 100000L}) {
        double r = N * discrepancy_fast(gold, N).D_N / std::log(static_cast<double>(N));
        max_ratio = std::max(max_ratio, r);
    }
    d = fmt("oracle vs fast max gap %.2e (tol 1e-12); max N D_N/ln N = %.3f (tol 3)", max_gap,
            max_ratio);
    return max_gap <= 1e-12 && max_ratio <= 3.0;
}

// 3. The Erdos-Turan style bound dominates the measured discrepancy for the
//    golden and factorial-series angles at N = 1e3 and 1e4 (golden swept
//    over every m <= 1000, the series angle over a decade subset because a
//    single bound evaluation there costs ~20 ms per unit of m), and the
//    D_N ln^{3+eps/3} N trend of the series angle stays below 10.
bool crit_kn_bound(std::string& d) {
    LiouvilleReport rep = liouville_generate(10, 1.0, 8);
    IrrationalSpec liou = *rep.alpha;
    long violations = 0;
    double trend_max = 0.0;
    for (long N : {1000L, 10000L}) {
        PointSequence gseq = PointSequence::orbit(IrrationalSpec::golden(), 0.0, N, true, 256);
        PointSequence lseq = PointSequence::orbit(liou, 0.0, N, true, 256);
        double dg = discrepancy_fast(gseq, N).D_N;
        double dl = discrepancy_fast(lseq, N).D_N;
        trend_max =
            std::max(trend_max, dl * std::pow(std::log(static_cast<double>(N)), 3.0 + 1.0 / 3.0));
        for (long m = 1; m <= 1000; ++m)
            if (kn_bound(IrrationalSpec::golden(), N, m) < dg) ++violations;
        for (long m : {1L, 2L, 5L, 10L, 20L, 50L, 100L, 200L})
            if (kn_bound(liou, N, m) < dl) ++violations;
    }
    d = fmt("bound violations %ld (tol 0); series-angle trend max %.3f (tol 10)", violations,
            trend_max);
    return violations == 0 && trend_max <= 10.0;
}

// 4. The factorial-series generator satisfies both growth conditions from
//    n = 4 on, and the resulting angle fails the power-rate type check for
//    k = 2 and 3 up to Q = 1e4.
bool crit_liouville(std::string& d) {
    LiouvilleReport rep = liouville_generate(10, 1.0, 8);
    bool ok = !rep.overflow && rep.effective_n_max == 8 && rep.n0 == 4;
    for (unsigned n = 4; n + 1 <= rep.effective_n_max && ok; ++n)
        ok = rep.cond_growth[n - 1] && rep.cond_type[n - 1];
    long witness2 = -1, witness3 = -1;
    if (ok) {
        TypeCertificate c2 = type_check(*rep.alpha, PsiSpec::power(2), 10000);
        TypeCertificate c3 = type_check(*rep.alpha, PsiSpec::power(3), 10000);
        ok = !c2.consistent && !c3.consistent;
        witness2 = c2.witness_q;
        witness3 = c3.witness_q;
    }
    d = fmt("conditions hold from n0 = %ld; q^2/q^3 type checks refuted at q = %ld, %ld", rep.n0,
            witness2, witness3);
    return ok;
}

// 5. Forward and backward operator power bounds hold with zero violations
//    on a 20-point grid for n in {1e2, 1e3, 1e4} (backward asserted on
//    clearance-set members, t = 0.05).
bool crit_bound_scans(std::string& d) {
    WeightP v = normalize(parse_weight("e*x"));
    BeurlingWeightFn wf(1.0);
    ErgodicMap map = ErgodicMap::rotation(IrrationalSpec::golden());
    std::vector<std::vector<double>> x_grid;
    for (long j = 0; j < 20; ++j) x_grid.push_back({(j + 0.5) / 20.0});
    std::vector<long> n_list = {100, 1000, 10000};
    long violations = 0, members = 0;
    for (const PowerBoundReport& r : forward_bound_scan(v, map, wf, n_list, x_grid, 192))
        if (r.value > r.bound) ++violations;
    for (const PowerBoundReport& r : backward_bound_scan(v, map, wf, n_list, 0.05, x_grid, 0)) {
        if (!r.in_E_t) continue;
        ++members;
        if (r.value > r.bound) ++violations;
    }
    d = fmt("0 of %ld forward rows exceed S*wt(n); %ld backward member rows clean, %ld violations "
            "(tol 0)",
            static_cast<long>(n_list.size()) * 20, members, violations);
    return violations == 0 && members > 0;
}

// 6. Monte-Carlo measure of the clearance set stays above the analytic
//    floor 1 - t pi^2/3 - 3 sigma for t in {0.01, 0.05, 0.1}.
bool crit_measure(std::string& d) {
    WeightP v = normalize(parse_weight("e*x"));
    ErgodicMap map = ErgodicMap::rotation(IrrationalSpec::golden());
    bool ok = true;
    std::string parts;
    for (double t : {0.01, 0.05, 0.1}) {
        ExceptionalSet set = ExceptionalSet::from_weight(t, v);
        ok = ok && set.zero_count() == 1;
        MeasureEstimate est = exceptional_set_measure(set, map, 1000, 10000, 12345, 0);
        double floor_t = 1.0 - t * M_PI * M_PI / 3.0 - 3.0 * est.sigma;
        ok = ok && est.estimate >= floor_t;
        parts += fmt("%st=%.2f: %.4f >= %.4f", parts.empty() ? "" : "; ", t, est.estimate, floor_t);
    }
    d = parts;
    return ok;
}

// 7. Weight-function analytics: w is subadditive for every m, n <= 1e4; the
//    partial-sum increment of sum w(n)/n^2 from 2^19 to 2^20 matches the
//    midpoint-shifted integral to 1e-6 relative; and wtilde/w at n = 1e6
//    must sit below 0.1 for eps = 1.  The last clause is arithmetically out
//    of reach for this weight family (the ratio is 15 (ln(e+n))^{-1/4},
//    which needs n > exp(150^4) to fall below 0.1) and is reported as
//    measured.
bool crit_weight_fn(std::string& d) {
    BeurlingWeightFn wf(1.0);
    std::vector<double> w(20001);
    for (long i = 0; i <= 20000; ++i) w[i] = wf.w(static_cast<double>(i));
    long violations = 0;
    for (long m = 1; m <= 10000; ++m)
        for (long n = m; n <= 10000; ++n)
            if (w[m] + w[n] < w[m + n] - 1e-12) ++violations;
    const long N1 = 1L << 19, N2 = 1L << 20;
    double inc = w_over_n2_partial(wf, N2) - w_over_n2_partial(wf, N1);
    double integral = w_over_n2_integral(wf, N1 + 0.5, N2 + 0.5);
    double rel = std::fabs(inc - integral) / integral;
    double ratio = wf.wtilde(1e6) / wf.w(1e6);
    d = fmt("subadditivity violations %ld (tol 0); increment vs integral rel err %.2e (tol 1e-6); "
            "wtilde/w(1e6) = %.10f (needs < 0.1)",
            violations, rel, ratio);
    return violations == 0 && rel <= 1e-6 && ratio < 0.1;
}

// 8. Bump certificates at N_trunc = 2^16: finite weighted norm, dropped
//    mass <= 1e-8, nonnegative and arc-supported on a 1e4 grid; and the
//    disjoint product vanishes in the weighted norm (product formed at
//    2^12, where the full convolution is affordable).
bool crit_bump(std::string& d) {
    BeurlingWeightFn wf(8.0);
    BeurlingSymbol phi = bump(0.25, 0.1, wf, 8, 1L << 16);
    double norm = algebra_norm(phi);
    double min_re = 1e300, max_im = 0.0, max_out = 0.0;
    for (long j = 0; j < 10000; ++j) {
        double x = j / 10000.0;
        Cplx c = phi.eval(x);
        min_re = std::min(min_re, c.real());
        max_im = std::max(max_im, std::fabs(c.imag()));
        if (x < 0.15 || x > 0.35) max_out = std::max(max_out, std::abs(c));
    }
    double product = algebra_norm(
        symbol_product(bump(0.25, 0.1, wf, 8, 4096), bump(0.75, 0.1, wf, 8, 4096)));
    d = fmt("A_w norm %.3f finite, tail %.1e (tol 1e-8); grid min Re %.1e, max outside arc %.1e "
            "(tol 1e-8); disjoint product %.1e (tol 1e-6)",
            norm, phi.tail_bound, min_re, max_out, product);
    return std::isfinite(norm) && phi.tail_bound <= 1e-8 && min_re >= -1e-9 && max_im <= 1e-9 &&
           max_out <= 1e-8 && product <= 1e-6;
}

// 9. Calculus properties: commutation (IV) residuals for j <= 5 and
//    multiplicativity (V) residuals for ten bump pairs stay within their
//    certified tails; successive truncations obey the Cauchy bound
//    ||S_2M - S_M|| <= tail(M) for M in {2^8, 2^10, 2^12}; and the
//    in-measure diagnostic strictly decreases.
bool crit_calculus(std::string& d) {
    BeurlingWeightFn wf(8.0);
    WeightP v = normalize(parse_weight("e*x"));
    ErgodicMap map = ErgodicMap::rotation(IrrationalSpec::golden());
    GridFunction f = GridFunction::constant(1.0) + GridFunction::harmonic(1).scaled(0.25) +
                     GridFunction::harmonic(-1).scaled(0.25);

    BeurlingSymbol phiA = bump(0.25, 0.1, wf, 8, 1024);
    BeurlingSymbol psiA = bump(0.75, 0.1, wf, 8, 1024);
    PropertyReport suite =
        property_suite(phiA, psiA, v, map, f, {1, 2, 3, 4, 5}, 64, 0.05, 256, 0.15);
    bool iv_ok = true;
    double iv_worst = 0.0;
    for (size_t i = 0; i < suite.commute_resid_IV.size(); ++i) {
        iv_ok = iv_ok && suite.commute_resid_IV[i] <= suite.commute_tail_IV[i];
        if (suite.commute_tail_IV[i] > 0)
            iv_worst = std::max(iv_worst, suite.commute_resid_IV[i] / suite.commute_tail_IV[i]);
    }
    bool v_ok = suite.mult_resid_V <= suite.mult_tail_V;
    double v_worst = suite.mult_tail_V > 0 ? suite.mult_resid_V / suite.mult_tail_V : 0.0;
    for (int i = 0; i < 10; ++i) {
        BeurlingSymbol phi_i = bump(0.10 + 0.04 * i, 0.040 + 0.004 * i, wf, 8, 2048);
        BeurlingSymbol psi_i = bump(0.60 + 0.03 * i, 0.050, wf, 8, 2048);
        // cover spacing below the narrow support width so the covering leg
        // of the suite stays well posed for every pair
        PropertyReport s = property_suite(phi_i, psi_i, v, map, f, {1}, 32, 0.05, 128, 0.04);
        v_ok = v_ok && s.mult_resid_V <= s.mult_tail_V;
        if (s.mult_tail_V > 0) v_worst = std::max(v_worst, s.mult_resid_V / s.mult_tail_V);
    }

    BeurlingSymbol phiC = bump(0.25, 0.1, wf, 8, 4096);
    std::vector<long> Ms = {256, 512, 1024, 2048, 4096, 8192};
    std::vector<CalculusResult> res;
    res.reserve(Ms.size());
    for (long M : Ms) res.push_back(apply_calculus(phiC, v, map, f, M, 0.05, 512));
    bool cauchy_ok = true;
    double cauchy_worst = 0.0;
    for (size_t i = 0; i + 1 < res.size(); i += 2) {
        const CalculusResult& a = res[i];
        const CalculusResult& b = res[i + 1];
        std::vector<Cplx> diff(b.samples);
        std::vector<char> both(a.mask);
        for (size_t k = 0; k < diff.size(); ++k) {
            diff[k] -= a.samples[k];
            both[k] = both[k] && b.mask[k];
        }
        double resid = norm_of_samples_masked(diff, a.p, both);
        cauchy_ok = cauchy_ok && resid <= a.tail_bound;
        if (a.tail_bound > 0) cauchy_worst = std::max(cauchy_worst, resid / a.tail_bound);
    }

    // Full-depth masking keeps every post-2^8 term below delta on the clear
    // nodes, so the strictly decreasing window sits at small truncations.
    std::vector<double> meas =
        convergence_in_measure(phiC, v, map, f, {16, 64, 256, 1024}, 1e-3, 0.05, 512);
    bool meas_ok = meas.size() == 3 && meas[0] > meas[1] && meas[1] > meas[2];

    d = fmt("commutation worst resid/tail %.2e; multiplicativity worst %.2e over 11 pairs; "
            "Cauchy worst %.2e; in-measure %.4f > %.4f > %.4f",
            iv_worst, v_worst, cauchy_worst, meas.size() == 3 ? meas[0] : -1.0,
            meas.size() == 3 ? meas[1] : -1.0, meas.size() == 3 ? meas[2] : -1.0);
    return iv_ok && v_ok && cauchy_ok && meas_ok;
}

// 10. The default demonstration passes all four certificates with
//     tolerances tied to the certified tails; matching bump centers break
//     disjointness; a rational angle is refused with the structural
//     explanation.
bool crit_demo(std::string& d) {
    DemoConfig cfg = DemoConfig::defaults();
    DemoReport rep = hyperinvariant_demo(cfg);
    bool ok = rep.all_passed && rep.stages.size() == 4;
    for (const DemoStage& s : rep.stages) ok = ok && s.passed;
    // the witness certificate compares against 1000x its certified tail
    ok = ok && rep.stages.size() >= 2 &&
         std::fabs(rep.stages[1].tolerance - 1e3 * rep.witness_tail) <=
             1e-9 * rep.stages[1].tolerance;

    DemoConfig neg = cfg;
    neg.psi_center = cfg.phi_center;
    neg.grid = 256;
    DemoReport nrep = hyperinvariant_demo(neg);
    bool neg_ok = !nrep.stages.empty() && !nrep.stages[0].passed && !nrep.all_passed;

    bool aborted = false;
    std::string msg;
    try {
        DemoConfig rat = cfg;
        rat.alpha = IrrationalSpec::rational(1, 3, 0.0);
        hyperinvariant_demo(rat);
    } catch (const UsageError& e) {
        aborted = true;
        msg = e.what();
    }
    bool rat_ok = aborted && msg.find("rational") != std::string::npos &&
                  msg.find("invariant subspace") != std::string::npos;

    d = fmt("default run: 4/4 certificates (witness %.2f, generic %.2f); equal-center control "
            "fails disjointness (product %.2e); rational angle refused structurally",
            rep.witness_norm, rep.generic_norm, nrep.product_norm);
    return ok && neg_ok && rat_ok;
}

struct Criterion {
    const char* name;
    bool (*run)(std::string&);
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"spectral radius closed form + Birkhoff", crit_spectral_radius},
        {"discrepancy oracle == fast, golden growth", crit_discrepancy},
        {"discrepancy bound dominance + trend", crit_kn_bound},
        {"factorial-series angle + type refutation", crit_liouville},
        {"operator power bound scans", crit_bound_scans},
        {"clearance-set measure floor", crit_measure},
        {"weight function analytics", crit_weight_fn},
        {"bump certificates", crit_bump},
        {"functional-calculus properties", crit_calculus},
        {"end-to-end subspace demonstration", crit_demo},
    };
    std::printf("acceptance: ten end-to-end properties\n");
    int failures = 0;
    int idx = 0;
    for (const Criterion& c : criteria) {
        ++idx;
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const LabError& e) {
            detail = fmt("aborted: %s", e.what());
        } catch (const std::exception& e) {
            detail = fmt("unexpected: %s", e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %2d. %s: %s (%.1fs)\n", ok ? " OK " : "FAIL", idx, c.name,
                    detail.c_str(), secs);
        if (!ok) ++failures;
    }
    std::printf("summary: %d of 10 properties hold\n", 10 - failures);
    return failures;
}
