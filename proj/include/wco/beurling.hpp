#pragma once

#include <complex>
#include <vector>

#include "wco/opbounds.hpp"

namespace wco {

// Trigonometric symbol phi(t) = sum_n c(n) e^{2 pi i n t} with finitely
// supported coefficients, measured in the weighted algebra norm
// sum |c(n)| e^{w(|n|)}.  tail_bound certifies the plain coefficient mass
// sum |c(n)| dropped by truncation (an l^1 certificate: it bounds the
// uniform error of the truncation on the circle; the weighted series of the
// discarded envelope need not converge, so no weighted tail is claimed).
struct BeurlingSymbol {
    std::vector<Cplx> coeffs;  // dense on [-half, half], index n + half
    long half = 0;
    BeurlingWeightFn weight{1.0};
    double tail_bound = 0.0;

    // declared support arc {t : circle-dist(t, center) <= half_width}
    bool has_support = false;
    double support_center = 0.0;
    double support_half = 0.0;

    Cplx coeff(long n) const;
    void set_coeff(long n, Cplx v);  // grows the stored window as needed
    Cplx eval(double t) const;       // direct synthesis, O(half) per point

    static BeurlingSymbol constant(Cplx c, BeurlingWeightFn wf = BeurlingWeightFn(1.0));
    static BeurlingSymbol harmonic(long n, Cplx c, BeurlingWeightFn wf = BeurlingWeightFn(1.0));

    // real-valued symbols have conjugate-symmetric coefficients
    bool conjugate_symmetric(double tol = 1e-12) const;
};

// sum over the stored window of |c(n)| e^{w(|n|)}, plus tail_bound.
// Per-term products are formed in the log domain, so large weights with
// tiny coefficients do not overflow prematurely.
double algebra_norm(const BeurlingSymbol& s);

// Pointwise product on the circle = coefficient convolution (direct, not
// FFT: the rounding error of each output stays proportional to its own
// magnitude, which the near-cancelling disjoint-support certificates need).
// Tail bounds combine as ||a||_l1 * tail_b + ||b||_l1 * tail_a + tail_a*tail_b.
BeurlingSymbol symbol_product(const BeurlingSymbol& a, const BeurlingSymbol& b);

// Bump witness with prescribed support: the K-fold convolution of uniform
// densities on [-a_k, a_k], a_k = c / (k (ln(k+2))^{1+eps/8}) with c scaled
// so the widths sum to half_width.  Coefficients
//   c(n) = e^{-2 pi i n center} prod_k sinc(2 pi n a_k)
// are stored for |n| <= N_trunc; the dropped mass is certified through the
// envelope |c(n)| <= prod_k min(1, 1/(2 pi |n| a_k)) <= C' |n|^{-K}, giving
// tail_bound = 2 C' N^{1-K}/(K-1) for K >= 2 (infinite for K = 1, where the
// symbol is the plain indicator profile).  Throws TailNotSummable when that
// certified tail exceeds tail_tol.
BeurlingSymbol bump(double center, double half_width, const BeurlingWeightFn& wf, long K,
                    long N_trunc, double tail_tol = 1e-8);

// Rotation by delta: c(n) -> e^{2 pi i n delta} c(n), i.e. phi(t + delta).
// Norm and coefficient magnitudes unchanged; the declared arc moves with it.
BeurlingSymbol rotate_symbol(const BeurlingSymbol& s, double delta);

// Values of the symbol at the G circle points t_j = (j + (offset?1/2:0))/G,
// j = 0..G-1, via FFT synthesis.  G must be a power of two at least
// 2*half+1 (no aliasing).
std::vector<Cplx> circle_samples(const BeurlingSymbol& s, long G, bool offset = false);

struct CoverResult {
    BeurlingSymbol G;    // sum of the N+1 rotated copies
    BeurlingSymbol Psi;  // approximate inverse of G
    long N = 0;          // floor(1/delta) + 1
    long grid = 0;       // certification grid size
    double grid_min = 0.0;       // min of G on the grid (also min over offset nodes)
    double residual = 0.0;       // max |G*Psi - 1| on the offset grid
};

// Covers the circle with N+1 = floor(1/delta)+2 rotated copies of a
// nonnegative symbol and inverts the sum: G = sum_{k=0}^{N} phi(. + k delta),
// Psi from 1/G sampled on the grid.  Certifies min G > 0 (else NotCovering)
// and the a-posteriori residual max |G Psi - 1| on the half-step-offset grid.
CoverResult cover_and_invert(const BeurlingSymbol& s, double delta, long grid = 0);

}  // namespace wco
