// Symbol algebra: weighted norms, products, bump witnesses, covering sums.
//
// Numeric targets marked "frozen" were produced by an independent
// double-precision implementation of the same formulas and are pinned here
// as regression anchors.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "wco/beurling.hpp"
#include "wco/errors.hpp"

using wco::BeurlingSymbol;
using wco::BeurlingWeightFn;
using wco::Cplx;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double rel_diff(double a, double b) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300});
}

double circle_dist(double a, double b) {
    double d = std::fabs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

}  // namespace

TEST_CASE("constant and harmonic symbols carry the expected norms") {
    const BeurlingWeightFn wf(1.0);

    const BeurlingSymbol one = BeurlingSymbol::constant(Cplx(1.0, 0.0), wf);
    CHECK(one.half == 0);
    CHECK(wco::algebra_norm(one) == 1.0);
    CHECK(std::abs(one.eval(0.37) - Cplx(1.0, 0.0)) < 1e-15);

    // cos(2 pi t) = (e^{2 pi i t} + e^{-2 pi i t})/2: norm e^{w(1)}
    BeurlingSymbol cosn = BeurlingSymbol::harmonic(1, Cplx(0.5, 0.0), wf);
    cosn.set_coeff(-1, Cplx(0.5, 0.0));
    CHECK(cosn.conjugate_symmetric());
    const double norm = wco::algebra_norm(cosn);
    CHECK(rel_diff(norm, std::exp(wf.w(1.0))) < 1e-14);
    CHECK(rel_diff(norm, 2.0366641797864018) < 1e-13);  // frozen
    for (double t : {0.0, 0.125, 0.3, 0.77}) {
        const Cplx v = cosn.eval(t);
        CHECK(std::abs(v.imag()) < 1e-15);
        CHECK(std::fabs(v.real() - std::cos(kTwoPi * t)) < 1e-14);
    }
}

TEST_CASE("set_coeff grows the window and keeps old entries") {
    BeurlingSymbol s = BeurlingSymbol::constant(Cplx(2.0, 0.0));
    s.set_coeff(5, Cplx(0.0, 1.0));
    s.set_coeff(-3, Cplx(1.0, -1.0));
    CHECK(s.half == 5);
    CHECK(s.coeff(0) == Cplx(2.0, 0.0));
    CHECK(s.coeff(5) == Cplx(0.0, 1.0));
    CHECK(s.coeff(-3) == Cplx(1.0, -1.0));
    CHECK(s.coeff(4) == Cplx(0.0, 0.0));
    CHECK(s.coeff(99) == Cplx(0.0, 0.0));  // outside the window
}

TEST_CASE("squaring the cosine symbol gives the half-angle coefficients") {
    const BeurlingWeightFn wf(1.0);
    BeurlingSymbol cosn = BeurlingSymbol::harmonic(1, Cplx(0.5, 0.0), wf);
    cosn.set_coeff(-1, Cplx(0.5, 0.0));

    const BeurlingSymbol sq = wco::symbol_product(cosn, cosn);
    CHECK(sq.half == 2);
    CHECK(sq.coeff(-2) == Cplx(0.25, 0.0));
    CHECK(sq.coeff(-1) == Cplx(0.0, 0.0));
    CHECK(sq.coeff(0) == Cplx(0.5, 0.0));
    CHECK(sq.coeff(1) == Cplx(0.0, 0.0));
    CHECK(sq.coeff(2) == Cplx(0.25, 0.0));
    CHECK(rel_diff(wco::algebra_norm(sq), 0.5 + 0.5 * std::exp(wf.w(2.0))) < 1e-14);

    // multiplying by the constant 1 reproduces the factor exactly
    const BeurlingSymbol unit = BeurlingSymbol::constant(Cplx(1.0, 0.0), wf);
    const BeurlingSymbol same = wco::symbol_product(unit, cosn);
    CHECK(same.half == cosn.half);
    for (long n = -1; n <= 1; ++n) CHECK(same.coeff(n) == cosn.coeff(n));
}

TEST_CASE("product norm is submultiplicative on random pairs") {
    const BeurlingWeightFn wf(1.0);
    std::mt19937_64 rng(20240117);
    std::uniform_int_distribution<long> pick_n(-50, 50);
    std::uniform_int_distribution<int> pick_count(1, 8);
    std::uniform_real_distribution<double> pick_v(-1.0, 1.0);

    auto random_symbol = [&]() {
        BeurlingSymbol s = BeurlingSymbol::constant(Cplx(0.0, 0.0), wf);
        const int count = pick_count(rng);
        for (int i = 0; i < count; ++i)
            s.set_coeff(pick_n(rng), Cplx(pick_v(rng), pick_v(rng)));
        return s;
    };

    long violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const BeurlingSymbol a = random_symbol();
        const BeurlingSymbol b = random_symbol();
        const double lhs = wco::algebra_norm(wco::symbol_product(a, b));
        const double rhs = wco::algebra_norm(a) * wco::algebra_norm(b);
        if (lhs > rhs * (1.0 + 1e-12)) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("product combines truncation certificates and rejects mixed weights") {
    const BeurlingWeightFn wf(1.0);
    BeurlingSymbol a = BeurlingSymbol::harmonic(2, Cplx(0.5, 0.5), wf);
    BeurlingSymbol b = BeurlingSymbol::harmonic(-1, Cplx(0.0, -2.0), wf);
    a.tail_bound = 1e-4;
    b.tail_bound = 3e-5;
    const double la = std::abs(a.coeff(2));
    const double lb = std::abs(b.coeff(-1));
    const BeurlingSymbol p = wco::symbol_product(a, b);
    CHECK(rel_diff(p.tail_bound, la * 3e-5 + lb * 1e-4 + 1e-4 * 3e-5) < 1e-15);

    const BeurlingSymbol other = BeurlingSymbol::constant(Cplx(1.0, 0.0), BeurlingWeightFn(2.0));
    CHECK_THROWS_AS((void)wco::symbol_product(a, other), wco::UsageError);
}

TEST_CASE("bump coefficients, certificate, and weighted norm match the oracle") {
    const BeurlingWeightFn wf(8.0);
    const long N = 1L << 16;
    const BeurlingSymbol s = wco::bump(0.25, 0.1, wf, 8, N);

    CHECK(s.half == N);
    CHECK(s.has_support);
    CHECK(s.support_center == 0.25);
    CHECK(s.support_half == 0.1);
    CHECK(s.coeff(0) == Cplx(1.0, 0.0));  // unit mass
    CHECK(s.conjugate_symmetric());

    // frozen coefficient anchors (center 1/4 makes c(n) = (-i)^n * radial)
    CHECK(rel_diff(std::abs(s.coeff(1)), 0.97537519518618443) < 1e-13);
    CHECK(std::fabs(s.coeff(1).real()) < 1e-12);
    CHECK(s.coeff(1).imag() == doctest::Approx(-0.97537519518618443).epsilon(1e-13));
    CHECK(rel_diff(std::abs(s.coeff(100)), 2.2148494578143363e-06) < 1e-11);
    CHECK(s.coeff(-7).imag() == doctest::Approx(-0.19463362980055768).epsilon(1e-12));
    CHECK(std::fabs(s.coeff(-7).real()) < 1e-12);

    CHECK(rel_diff(s.tail_bound, 1.3635850399149276e-23) < 1e-12);  // frozen
    CHECK(s.tail_bound <= 1e-8);

    double l1 = 0.0;
    for (const Cplx& c : s.coeffs) l1 += std::abs(c);
    CHECK(rel_diff(l1, 11.604618582412169) < 1e-12);                       // frozen
    CHECK(rel_diff(wco::algebra_norm(s), 19.509094166331646) < 1e-12);     // frozen
}

TEST_CASE("bump grid values: nonnegative, supported on the arc, flat plateau") {
    const BeurlingWeightFn wf(8.0);
    const long N = 1L << 16;
    const BeurlingSymbol s = wco::bump(0.25, 0.1, wf, 8, N);

    const long G = 1L << 18;
    const std::vector<Cplx> vals = wco::circle_samples(s, G);
    double min_real = 1e300, max_outside = 0.0, max_imag = 0.0;
    for (long j = 0; j < G; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(G);
        min_real = std::min(min_real, vals[static_cast<size_t>(j)].real());
        max_imag = std::max(max_imag, std::fabs(vals[static_cast<size_t>(j)].imag()));
        if (circle_dist(t, 0.25) > 0.1)
            max_outside = std::max(max_outside, std::abs(vals[static_cast<size_t>(j)]));
    }
    CHECK(min_real > -1e-10);
    CHECK(max_imag < 1e-10);
    CHECK(max_outside <= 1e-8);

    // direct synthesis agrees with the FFT samples
    for (long j : {0L, 7L, G / 4, G / 3, G - 1}) {
        const double t = static_cast<double>(j) / static_cast<double>(G);
        CHECK(std::abs(s.eval(t) - vals[static_cast<size_t>(j)]) < 1e-9);
    }

    // the widest uniform factor exceeds the rest combined, so the profile
    // has a flat top around the center at height 1/(2 a_1)
    const double peak = s.eval(0.25).real();
    CHECK(rel_diff(peak, 8.6887852909661092) < 1e-10);  // frozen
    CHECK(rel_diff(s.eval(0.26).real(), peak) < 1e-10);
    CHECK(rel_diff(s.eval(0.24).real(), peak) < 1e-10);
}

TEST_CASE("bump certificate scales with truncation and rejects hopeless budgets") {
    const BeurlingWeightFn wf(8.0);
    const double t12 = wco::bump(0.25, 0.1, wf, 8, 1L << 12, 1.0).tail_bound;
    const double t13 = wco::bump(0.25, 0.1, wf, 8, 1L << 13, 1.0).tail_bound;
    CHECK(rel_diff(t12, 3.6603457198434178e-15) < 1e-12);  // frozen
    CHECK(rel_diff(t12 / t13, 128.0) < 1e-12);  // N^{1-K} halving: factor 2^7

    CHECK_THROWS_AS((void)wco::bump(0.25, 0.1, wf, 8, 64), wco::TailNotSummable);
    CHECK_THROWS_WITH_AS((void)wco::bump(0.25, 0.1, wf, 8, 64),
                         doctest::Contains("dropped mass"), wco::TailNotSummable);

    // a single factor is the plain indicator profile: sinc coefficients,
    // divergent coefficient mass, honest infinite certificate
    const BeurlingWeightFn w1(1.0);
    CHECK_THROWS_AS((void)wco::bump(0.0, 0.1, w1, 1, 8), wco::TailNotSummable);
    const BeurlingSymbol ind =
        wco::bump(0.0, 0.1, w1, 1, 8, std::numeric_limits<double>::infinity());
    CHECK(rel_diff(ind.coeff(3).real(), 0.50455115242710469) < 1e-14);  // sin(x)/x at x=.6pi
    CHECK(std::isinf(ind.tail_bound));
    CHECK(std::isinf(wco::algebra_norm(ind)));
}

TEST_CASE("bump rejects out-of-range parameters") {
    const BeurlingWeightFn wf(8.0);
    CHECK_THROWS_AS((void)wco::bump(0.25, 0.0, wf, 8, 16), wco::UsageError);
    CHECK_THROWS_AS((void)wco::bump(0.25, 0.5, wf, 8, 16), wco::UsageError);
    CHECK_THROWS_AS((void)wco::bump(0.25, -0.1, wf, 8, 16), wco::UsageError);
    CHECK_THROWS_AS((void)wco::bump(0.25, 0.1, wf, 0, 16), wco::UsageError);
    CHECK_THROWS_AS((void)wco::bump(0.25, 0.1, wf, 8, 0), wco::UsageError);
    CHECK_THROWS_AS((void)wco::bump(0.25, 0.1, wf, 8, 16, 0.0), wco::UsageError);
}

TEST_CASE("rotation modulates coefficients and moves the support arc") {
    const BeurlingWeightFn wf(8.0);
    const long N = 1L << 12;
    const BeurlingSymbol s = wco::bump(0.25, 0.1, wf, 8, N);

    const BeurlingSymbol r = wco::rotate_symbol(s, 0.5);
    CHECK(rel_diff(wco::algebra_norm(r), wco::algebra_norm(s)) < 1e-14);
    CHECK(r.support_center == doctest::Approx(0.75).epsilon(1e-15));

    // rotating by 1/2 lands on the bump constructed at 3/4
    const BeurlingSymbol direct = wco::bump(0.75, 0.1, wf, 8, N);
    const long G = 1L << 14;
    const std::vector<Cplx> rv = wco::circle_samples(r, G);
    const std::vector<Cplx> dv = wco::circle_samples(direct, G);
    double worst = 0.0;
    for (long j = 0; j < G; ++j)
        worst = std::max(worst, std::abs(rv[static_cast<size_t>(j)] - dv[static_cast<size_t>(j)]));
    CHECK(worst < 1e-9);

    // rotating back restores the coefficients
    const BeurlingSymbol back = wco::rotate_symbol(r, -0.5);
    double coeff_diff = 0.0;
    for (long n = -N; n <= N; ++n)
        coeff_diff = std::max(coeff_diff, std::abs(back.coeff(n) - s.coeff(n)));
    CHECK(coeff_diff < 1e-15);
    CHECK(back.support_center == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("disjoint bumps multiply to a numerically zero symbol") {
    const BeurlingWeightFn wf(8.0);
    const long N = 1L << 12;
    const BeurlingSymbol a = wco::bump(0.25, 0.1, wf, 8, N);
    const BeurlingSymbol b = wco::bump(0.75, 0.1, wf, 8, N);

    const BeurlingSymbol p = wco::symbol_product(a, b);
    CHECK(p.half == 2 * N);
    double max_coeff = 0.0;
    for (const Cplx& c : p.coeffs) max_coeff = std::max(max_coeff, std::abs(c));
    CHECK(max_coeff < 1e-12);
    CHECK(wco::algebra_norm(p) <= 1e-6);  // near-cancellation certificate
}

TEST_CASE("covering the circle with a constant symbol inverts exactly") {
    const BeurlingWeightFn wf(8.0);
    const BeurlingSymbol one = BeurlingSymbol::constant(Cplx(1.0, 0.0), wf);
    const wco::CoverResult res = wco::cover_and_invert(one, 0.3);
    CHECK(res.N == 4);  // floor(1/0.3) + 1
    CHECK(res.G.coeff(0) == Cplx(5.0, 0.0));
    CHECK(res.grid == 16384);
    CHECK(res.grid_min == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(std::abs(res.Psi.coeff(0) - Cplx(0.2, 0.0)) < 1e-13);
    double psi_rest = 0.0;
    for (long n = 1; n <= res.Psi.half; ++n)
        psi_rest = std::max({psi_rest, std::abs(res.Psi.coeff(n)), std::abs(res.Psi.coeff(-n))});
    CHECK(psi_rest < 1e-13);
    CHECK(res.residual < 1e-12);
}

TEST_CASE("covering a bump produces a certified inverse") {
    const BeurlingWeightFn wf(8.0);
    const long N = 1L << 12;
    const BeurlingSymbol s = wco::bump(0.25, 0.1, wf, 8, N);

    const wco::CoverResult res = wco::cover_and_invert(s, 0.15);
    CHECK(res.N == 7);
    CHECK(res.grid == 16384);
    CHECK(res.grid_min == doctest::Approx(1.4809571908758334).epsilon(1e-9));  // frozen
    CHECK(res.residual <= 1e-8);
    const double psi_norm = wco::algebra_norm(res.Psi);
    CHECK(std::isfinite(psi_norm));
    CHECK(rel_diff(psi_norm, 1.8040814643027896) < 1e-8);  // frozen

    // the inverse actually multiplies back to 1 away from the sample grid
    for (double t : {0.123456, 0.5, 0.987})
        CHECK(std::abs(res.G.eval(t) * res.Psi.eval(t) - 1.0) < 1e-8);
}

TEST_CASE("shifts that leave a gap are rejected") {
    const BeurlingWeightFn wf(8.0);
    const long N = 1L << 12;
    const BeurlingSymbol s = wco::bump(0.25, 0.1, wf, 8, N);
    // step 1/2 only covers two arcs of total length 0.4
    CHECK_THROWS_AS((void)wco::cover_and_invert(s, 0.5), wco::NotCovering);
    CHECK_THROWS_WITH_AS((void)wco::cover_and_invert(s, 0.5), doctest::Contains("uncovered"),
                         wco::NotCovering);
}

TEST_CASE("covering and sampling reject malformed parameters") {
    const BeurlingWeightFn wf(8.0);
    const BeurlingSymbol one = BeurlingSymbol::constant(Cplx(1.0, 0.0), wf);
    CHECK_THROWS_AS((void)wco::cover_and_invert(one, 0.0), wco::UsageError);
    CHECK_THROWS_AS((void)wco::cover_and_invert(one, 1.0), wco::UsageError);
    CHECK_THROWS_AS((void)wco::cover_and_invert(one, -0.2), wco::UsageError);
    CHECK_THROWS_AS((void)wco::cover_and_invert(one, 0.3, 100), wco::UsageError);  // not a power of 2

    const BeurlingSymbol wide = BeurlingSymbol::harmonic(9, Cplx(1.0, 0.0), wf);
    CHECK_THROWS_AS((void)wco::circle_samples(wide, 16), wco::UsageError);  // 16 < 2*9+1
    CHECK_THROWS_AS((void)wco::circle_samples(wide, 24), wco::UsageError);
}
