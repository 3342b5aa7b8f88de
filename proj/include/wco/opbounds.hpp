#pragma once

#include <complex>
#include <vector>

#include "wco/gridfn.hpp"
#include "wco/irrational.hpp"
#include "wco/weights.hpp"

namespace wco {

// Product rotation tau(x) = ({x_1+a_1}, ..., {x_d+a_d}) on [0,1]^d.
// Always invertible and measure-preserving.
struct ErgodicMap {
    std::vector<IrrationalSpec> alphas;

    long dimension() const { return static_cast<long>(alphas.size()); }
    static ErgodicMap rotation(IrrationalSpec a);
    static ErgodicMap product(std::vector<IrrationalSpec> as);

    // tau^k applied coordinate-wise at certified precision.
    std::vector<double> power(const std::vector<double>& x, long k, unsigned bits = 192) const;
};

// Slowly-growing weight pair driving the operator-norm bounds:
//   w(n)  = n / (ln(e+n))^{1+eps/4}
//   wt(n) = 15 n / (ln(e+n))^{1+eps/2}
//   ln C(n,t) = -(1/5) wt(n) ln t
// ln(e+n) replaces ln n so n = 1 is regular; w(0) = 0.
struct BeurlingWeightFn {
    double epsilon = 1.0;

    explicit BeurlingWeightFn(double eps = 1.0);
    double w(double n) const;
    double wtilde(double n) const;
    double log_C(double n, double t) const;

    // Proven upper bound on the tail sum_{n>N} w(n)/n^2:
    //   (1 + e/N) * (4/eps) * (ln(e+N))^(-eps/4).
    double summability_tail(double N) const;
};

// Partial sum sum_{n=1}^{N} w(n)/n^2 and the numeric integral of w(x)/x^2
// over [a,b] (adaptive quadrature) for Cauchy checks of the Beurling-Domar
// summability condition.
double w_over_n2_partial(const BeurlingWeightFn& wf, long N);
double w_over_n2_integral(const BeurlingWeightFn& wf, double a, double b, double tol = 1e-12);

// Points whose backward orbit keeps clear of every weight root:
// membership at depth n requires |tau^{-k}(x) - z| >= t/n^3 for all k <= n
// and all roots z (plain distance on [0,1], per coordinate).  The
// intersected set over all n tightens this to t/k^3 at each step k.
struct ExceptionalSet {
    double t = 0.1;
    std::vector<std::vector<double>> zeros;  // per coordinate

    static ExceptionalSet one_dim(double t, std::vector<double> zeros);
    static ExceptionalSet from_weight(double t, const WeightP& v);

    // fixed-depth set: |tau^{-k}x - z| >= t/n^3 for all k <= n
    bool member(const ErgodicMap& map, const std::vector<double>& x, long n,
                unsigned bits = 192) const;
    // intersection over depths: |tau^{-k}x - z| >= t/k^3 for all k <= n_max
    bool member_all(const ErgodicMap& map, const std::vector<double>& x, long n_max,
                    unsigned bits = 192) const;

    long zero_count() const;
    // 1 - (#zeros) * t * pi^2 / 3
    double measure_lower_bound() const;
};

// Precision needed to resolve backward orbits against the t/n^3 margin.
unsigned required_backward_bits(long n_max, double t);

struct PowerBoundReport {
    long n = 0;
    bool forward = true;
    double value = 0.0;  // ln U_{n,x} (forward) or -ln L_{n,x} (backward)
    double bound = 0.0;  // S*wt(n) (forward) or S*(1 - ln t/5)*wt(n) (backward)
    std::vector<double> x;
    double t = 0.0;       // backward only
    bool in_E_t = false;  // backward only: bound asserted only for members
};

// Signed power of the weighted composition operator: T^n f evaluated at x,
//   n >= 0:  prod_{k=0}^{n-1} v(tau^k x) * f(tau^n x)
//   n < 0:   f(tau^n x) / prod_{k=1}^{-n} v(tau^{-k} x)
// computed in the log domain with exact sign bookkeeping.  Throws
// DivisionAtZero when a backward orbit point lands on a root of v, and
// DomainError from signed fractional factors left of their root.
Cplx apply_power(const WeightP& v, const ErgodicMap& map, long n, const GridFunction& f,
                 const std::vector<double>& x, unsigned bits = 192);

// For every (n, x): value = ln U_{n,x} = sum_{k<n} ln prod_i |tau^k x - x_i|^{s_i}
// + n * sum_i s_i (X_i + X_i'), bound = S * wt(n) with S the total exponent
// sum.  Requires v normalized.  Exact hits give value = -inf (trivially
// bounded).
std::vector<PowerBoundReport> forward_bound_scan(const WeightP& v, const ErgodicMap& map,
                                                 const BeurlingWeightFn& wf,
                                                 const std::vector<long>& n_list,
                                                 const std::vector<std::vector<double>>& x_grid,
                                                 unsigned bits = 192);

// For every (n, x): value = -ln L_{n,x} over the backward orbit and
// bound = S * (1 - ln t / 5) * wt(n).  Membership in the intersected
// exceptional set is tested up to max(n_list) and reported; the bound is
// asserted only for members.  Requires v normalized.
std::vector<PowerBoundReport> backward_bound_scan(const WeightP& v, const ErgodicMap& map,
                                                  const BeurlingWeightFn& wf,
                                                  const std::vector<long>& n_list, double t,
                                                  const std::vector<std::vector<double>>& x_grid,
                                                  unsigned bits = 0);

// Smallest n >= 2 with S * wt(n) * (1 - ln t / 5) <= w(n), i.e. where the
// always-valid C-form backward bound drops below e^{w(n)}.  Throws
// OverflowError when no n below 10^9 qualifies (the usual case for small
// epsilon: the threshold grows like exp((15 S (1 - ln t/5))^{4/eps})).
long compute_nt(const BeurlingWeightFn& wf, double S, double t);

struct MeasureEstimate {
    double estimate = 0.0;  // Monte-Carlo member fraction
    double sigma = 0.0;     // binomial standard error
    double lower_bound = 0.0;
    long samples = 0;
    long members = 0;
};

// Monte-Carlo measure of the intersected exceptional set up to depth n_max.
MeasureEstimate exceptional_set_measure(const ExceptionalSet& set, const ErgodicMap& map,
                                        long n_max, long samples,
                                        unsigned long seed = 12345, unsigned bits = 0);

// e * (n/e)^n * sqrt(2 pi n), an upper bound for n!; the log form is exact
// for n far beyond double range.
double stirling_upper_log(long n);
double stirling_upper(long n);

// Coordinate-wise product operator: merges one-dimensional weights into a
// single d-coordinate weight paired with the product rotation.  Forward and
// backward scans then run through the same machinery with summed logs.
struct ProductOperator {
    WeightP v;
    ErgodicMap map;
};
ProductOperator product_operator(const std::vector<WeightP>& vs,
                                 const std::vector<IrrationalSpec>& alphas);

}  // namespace wco
