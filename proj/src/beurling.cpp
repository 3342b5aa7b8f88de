#include "wco/beurling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>

#include "wco/errors.hpp"

namespace wco {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double sinc(double x) {
    if (std::fabs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

bool is_pow2(long g) { return g > 0 && (g & (g - 1)) == 0; }

long next_pow2(long n) {
    long g = 1;
    while (g < n) g <<= 1;
    return g;
}

// in-place iterative radix-2 transform; sign = +1 synthesizes
// v[j] = sum_k x[k] e^{+2 pi i jk/G}, sign = -1 the adjoint (no 1/G factor)
void fft(std::vector<Cplx>& x, int sign) {
    const size_t n = x.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * kTwoPi / static_cast<double>(len);
        const Cplx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            Cplx w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                Cplx u = x[i + k];
                Cplx v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

double stored_l1(const BeurlingSymbol& s) {
    double m = 0.0;
    for (const Cplx& c : s.coeffs) m += std::abs(c);
    return m;
}

double frac_part(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;
    return f;
}

}  // namespace

Cplx BeurlingSymbol::coeff(long n) const {
    if (n < -half || n > half) return Cplx(0.0, 0.0);
    return coeffs[static_cast<size_t>(n + half)];
}

void BeurlingSymbol::set_coeff(long n, Cplx v) {
    const long a = std::labs(n);
    if (a > half) {
        std::vector<Cplx> grown(static_cast<size_t>(2 * a + 1), Cplx(0.0, 0.0));
        for (long m = -half; m <= half; ++m)
            grown[static_cast<size_t>(m + a)] = coeffs[static_cast<size_t>(m + half)];
        coeffs = std::move(grown);
        half = a;
    }
    coeffs[static_cast<size_t>(n + half)] = v;
}

Cplx BeurlingSymbol::eval(double t) const {
    Cplx acc(0.0, 0.0);
    for (long n = -half; n <= half; ++n) {
        const Cplx c = coeffs[static_cast<size_t>(n + half)];
        if (c == Cplx(0.0, 0.0)) continue;
        acc += c * std::polar(1.0, kTwoPi * static_cast<double>(n) * t);
    }
    return acc;
}

BeurlingSymbol BeurlingSymbol::constant(Cplx c, BeurlingWeightFn wf) {
    BeurlingSymbol s;
    s.coeffs = {c};
    s.half = 0;
    s.weight = wf;
    return s;
}

BeurlingSymbol BeurlingSymbol::harmonic(long n, Cplx c, BeurlingWeightFn wf) {
    BeurlingSymbol s;
    s.half = std::labs(n);
    s.coeffs.assign(static_cast<size_t>(2 * s.half + 1), Cplx(0.0, 0.0));
    s.weight = wf;
    s.set_coeff(n, c);
    return s;
}

bool BeurlingSymbol::conjugate_symmetric(double tol) const {
    double scale = 0.0;
    for (const Cplx& c : coeffs) scale = std::max(scale, std::abs(c));
    for (long n = 0; n <= half; ++n) {
        if (std::abs(coeff(-n) - std::conj(coeff(n))) > tol * (1.0 + scale)) return false;
    }
    return true;
}

double algebra_norm(const BeurlingSymbol& s) {
    double sum = 0.0;
    for (long n = -s.half; n <= s.half; ++n) {
        const double a = std::abs(s.coeff(n));
        if (a == 0.0) continue;
        // form |c(n)| e^{w(|n|)} through its logarithm: the weight can reach
        // thousands while the coefficient is tiny, and only the sum matters
        const double e = s.weight.w(static_cast<double>(std::labs(n))) + std::log(a);
        if (e > 709.0) return std::numeric_limits<double>::infinity();
        sum += std::exp(e);
    }
    return sum + s.tail_bound;
}

BeurlingSymbol symbol_product(const BeurlingSymbol& a, const BeurlingSymbol& b) {
    if (a.weight.epsilon != b.weight.epsilon)
        throw UsageError("symbol_product: factors use different weight parameters");
    BeurlingSymbol out;
    out.weight = a.weight;
    out.half = a.half + b.half;
    out.coeffs.assign(static_cast<size_t>(2 * out.half + 1), Cplx(0.0, 0.0));
    for (long k = -a.half; k <= a.half; ++k) {
        const Cplx ak = a.coeffs[static_cast<size_t>(k + a.half)];
        if (ak == Cplx(0.0, 0.0)) continue;
        const size_t base = static_cast<size_t>(k + a.half);  // index of k + (-b.half) + out.half
        for (long l = -b.half; l <= b.half; ++l)
            out.coeffs[base + static_cast<size_t>(l + b.half)] +=
                ak * b.coeffs[static_cast<size_t>(l + b.half)];
    }
    const double la = stored_l1(a);
    const double lb = stored_l1(b);
    out.tail_bound = la * b.tail_bound + lb * a.tail_bound + a.tail_bound * b.tail_bound;
    return out;
}

BeurlingSymbol bump(double center, double half_width, const BeurlingWeightFn& wf, long K,
                    long N_trunc, double tail_tol) {
    if (!(half_width > 0.0) || !(half_width < 0.5))
        throw UsageError("bump: half_width must lie in (0, 1/2)");
    if (K < 1) throw UsageError("bump: need at least one convolution factor");
    if (N_trunc < 1) throw UsageError("bump: need N_trunc >= 1");
    if (!(tail_tol > 0.0)) throw UsageError("bump: tail tolerance must be positive");
    center = frac_part(center);

    // widths a_k ~ 1/(k (ln(k+2))^{1+eps/8}), scaled to sum to half_width
    const double expo = 1.0 + wf.epsilon / 8.0;
    std::vector<double> a(static_cast<size_t>(K));
    double total = 0.0;
    for (long k = 1; k <= K; ++k) {
        a[static_cast<size_t>(k - 1)] =
            1.0 / (static_cast<double>(k) * std::pow(std::log(static_cast<double>(k) + 2.0), expo));
        total += a[static_cast<size_t>(k - 1)];
    }
    for (double& ak : a) ak *= half_width / total;

    // dropped-mass certificate: |c(n)| <= prod_k 1/(2 pi |n| a_k) = C' |n|^{-K}
    double cprime = 1.0;
    for (double ak : a) cprime /= kTwoPi * ak;
    double tail = std::numeric_limits<double>::infinity();
    if (K >= 2)
        tail = 2.0 * cprime * std::pow(static_cast<double>(N_trunc), 1.0 - static_cast<double>(K)) /
               (static_cast<double>(K) - 1.0);
    if (!(tail <= tail_tol)) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "bump: certified dropped mass %.3e exceeds tolerance %.3e at N_trunc=%ld "
                      "(raise N_trunc or K)",
                      tail, tail_tol, N_trunc);
        throw TailNotSummable(msg);
    }

    BeurlingSymbol s;
    s.weight = wf;
    s.half = N_trunc;
    s.coeffs.assign(static_cast<size_t>(2 * N_trunc + 1), Cplx(0.0, 0.0));
    s.tail_bound = tail;
    s.has_support = true;
    s.support_center = center;
    s.support_half = half_width;
    for (long n = -N_trunc; n <= N_trunc; ++n) {
        double prod = 1.0;
        for (double ak : a) prod *= sinc(kTwoPi * static_cast<double>(n) * ak);
        s.coeffs[static_cast<size_t>(n + N_trunc)] =
            std::polar(prod, -kTwoPi * static_cast<double>(n) * center);
    }
    return s;
}

BeurlingSymbol rotate_symbol(const BeurlingSymbol& s, double delta) {
    BeurlingSymbol out = s;
    for (long n = -s.half; n <= s.half; ++n)
        out.coeffs[static_cast<size_t>(n + s.half)] *=
            std::polar(1.0, kTwoPi * static_cast<double>(n) * delta);
    if (s.has_support) out.support_center = frac_part(s.support_center - delta);
    return out;
}

std::vector<Cplx> circle_samples(const BeurlingSymbol& s, long G, bool offset) {
    if (!is_pow2(G)) throw UsageError("circle_samples: grid size must be a power of two");
    if (G < 2 * s.half + 1)
        throw UsageError("circle_samples: grid too small for the stored coefficients");
    std::vector<Cplx> bins(static_cast<size_t>(G), Cplx(0.0, 0.0));
    for (long n = -s.half; n <= s.half; ++n) {
        Cplx c = s.coeffs[static_cast<size_t>(n + s.half)];
        if (offset) c *= std::polar(1.0, kTwoPi * static_cast<double>(n) * 0.5 / static_cast<double>(G));
        bins[static_cast<size_t>(((n % G) + G) % G)] += c;
    }
    fft(bins, +1);
    return bins;
}

CoverResult cover_and_invert(const BeurlingSymbol& s, double delta, long grid) {
    if (!(delta > 0.0) || !(delta < 1.0)) throw UsageError("cover_and_invert: need 0 < delta < 1");
    CoverResult res;
    res.N = static_cast<long>(std::floor(1.0 / delta)) + 1;

    res.G.weight = s.weight;
    res.G.half = s.half;
    res.G.coeffs.assign(static_cast<size_t>(2 * s.half + 1), Cplx(0.0, 0.0));
    res.G.tail_bound = static_cast<double>(res.N + 1) * s.tail_bound;
    for (long k = 0; k <= res.N; ++k) {
        const double shift = static_cast<double>(k) * delta;
        for (long n = -s.half; n <= s.half; ++n)
            res.G.coeffs[static_cast<size_t>(n + s.half)] +=
                s.coeffs[static_cast<size_t>(n + s.half)] *
                std::polar(1.0, kTwoPi * static_cast<double>(n) * shift);
    }

    if (grid == 0) grid = std::max<long>(16384, next_pow2(2 * s.half + 2));
    if (!is_pow2(grid) || grid < 2 * s.half + 1)
        throw UsageError("cover_and_invert: grid must be a power of two covering the coefficients");
    res.grid = grid;

    const std::vector<Cplx> gv = circle_samples(res.G, grid, false);
    const std::vector<Cplx> go = circle_samples(res.G, grid, true);
    double gmin = std::numeric_limits<double>::infinity();
    double gmax = -std::numeric_limits<double>::infinity();
    for (long j = 0; j < grid; ++j) {
        gmin = std::min({gmin, gv[static_cast<size_t>(j)].real(), go[static_cast<size_t>(j)].real()});
        gmax = std::max({gmax, gv[static_cast<size_t>(j)].real(), go[static_cast<size_t>(j)].real()});
    }
    res.grid_min = gmin;
    // a covering sum is bounded away from zero; values at the rounding floor
    // mean an uncovered gap, not a small positive minimum
    if (!(gmin > 1e-7 * std::max(gmax, 0.0))) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "shifted copies leave the circle uncovered: min %.3e vs max %.3e over %ld "
                      "grid points (delta=%.6g, N=%ld)",
                      gmin, gmax, 2 * grid, delta, res.N);
        throw NotCovering(msg);
    }

    // Fourier coefficients of 1/G from the plain-grid samples
    std::vector<Cplx> rec(static_cast<size_t>(grid));
    for (long j = 0; j < grid; ++j) rec[static_cast<size_t>(j)] = 1.0 / gv[static_cast<size_t>(j)];
    fft(rec, -1);
    res.Psi.weight = s.weight;
    res.Psi.half = grid / 2 - 1;
    res.Psi.coeffs.assign(static_cast<size_t>(2 * res.Psi.half + 1), Cplx(0.0, 0.0));
    const double inv_g = 1.0 / static_cast<double>(grid);
    for (long n = -res.Psi.half; n <= res.Psi.half; ++n)
        res.Psi.set_coeff(n, rec[static_cast<size_t>(((n % grid) + grid) % grid)] * inv_g);

    const std::vector<Cplx> po = circle_samples(res.Psi, grid, true);
    double worst = 0.0;
    for (long j = 0; j < grid; ++j)
        worst = std::max(worst,
                         std::abs(go[static_cast<size_t>(j)] * po[static_cast<size_t>(j)] - 1.0));
    res.residual = worst;
    return res;
}

}  // namespace wco
