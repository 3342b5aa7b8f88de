#pragma once

#include <string>
#include <vector>

#include "wco/beurling.hpp"
#include "wco/gridfn.hpp"
#include "wco/opbounds.hpp"

namespace wco {

// Truncated series phi(T)f = sum_{|n|<=M} phi_hat(n) T^n f sampled on the
// midpoint grid, restricted to the nodes whose backward orbit keeps clear
// of the weight roots (the clearance mask).  Masked-out nodes hold 0 and
// norms divide by the full node count (restriction, not conditioning).
struct CalculusResult {
    std::vector<Cplx> samples;
    std::vector<char> mask;
    long grid = 0;
    double p = 2.0;
    long M = 0;
    double t = 0.0;
    // certified remainder of the series past M: every stored coefficient
    // beyond M is weighted by the larger of the empirically realized
    // orbit-product supremum and (once the threshold n_t is reached) the
    // analytic e^{w(|n|)} bound, all times ||f||_p; the symbol's own
    // dropped-mass certificate enters at the boundary weight.  Always
    // reported next to the value.
    double tail_bound = 0.0;

    long masked_count() const;
    double norm() const;              // masked L^p over the full node count
    GridFunction value() const;       // cell-lookup view of the samples
};

// Per-node clearance mask at the given depth: node j passes when
// |tau^{-k} x_j - z| >= t/k^3 for every root z and k <= depth.  Decided in
// double precision against a certified shift table; nodes within 1e-11 of a
// threshold are escalated to the exact multiprecision test, so the result
// always agrees with ExceptionalSet::member_all.
std::vector<char> exceptional_mask(const ExceptionalSet& set, const ErgodicMap& map, long depth,
                                   long grid, unsigned bits = 0);

// base with every grid cell outside the mask zeroed: h(y) =
// base(y) * mask[cell(y)].  This is how "vanishes off the exceptional set"
// is realized at grid resolution; on the matching grid the cells are exact.
GridFunction masked_function(const GridFunction& base, std::vector<char> mask);

// T^j f as a pointwise expression: v(y) v(tau y) ... f(tau^j y) walked in
// plain double arithmetic (drift ~ |j| ulp).  Throws DivisionAtZero if a
// backward factor vanishes at the requested point.
GridFunction power_function(const WeightP& v, const ErgodicMap& map, long j,
                            const GridFunction& f);

// phi(T)f as a pointwise expression (the same truncated series evaluated by
// a per-point orbit walk in double arithmetic).  This is what makes nested
// applications like phi(T)(psi(T)f) computable without symbol-level
// shortcuts.
GridFunction series_function(const BeurlingSymbol& phi, const WeightP& v, const ErgodicMap& map,
                             const GridFunction& f, long M);

// Evaluate the truncated series on the masked grid with a certified tail.
// pre: v normalized, map one-dimensional, M >= 0.
CalculusResult apply_calculus(const BeurlingSymbol& phi, const WeightP& v, const ErgodicMap& map,
                              const GridFunction& f, long M, double t, long grid = 1024);

// Grid measure of {|S_{M_{i+1}} - S_{M_i}| > delta} for consecutive
// truncations; one entry per adjacent pair, non-increasing toward 0 when
// the series converges in measure.
std::vector<double> convergence_in_measure(const BeurlingSymbol& phi, const WeightP& v,
                                           const ErgodicMap& map, const GridFunction& f,
                                           const std::vector<long>& M_list, double delta, double t,
                                           long grid = 1024);

// Numerical residuals for the calculus properties.  Every residual comes
// with the certified tail it must be compared against.
struct PropertyReport {
    std::vector<long> probes_I;          // truncations M/4, M/2, M
    std::vector<double> norms_I;         // ||S_M||_p per probe (all finite)
    std::vector<double> cauchy_resid_I;  // ||S_next - S_prev|| per adjacent pair
    std::vector<double> cauchy_tail_I;   // certified tail at the smaller truncation

    double symbol_linearity_II = 0.0;  // ||S(phi + rho/8) - S(phi) - S(rho)/8||
    double vector_linearity_III = 0.0; // ||S(phi, f + g/8) - S(phi,f) - S(phi,g)/8||

    std::vector<long> commute_j_IV;      // commutant powers tested
    std::vector<double> commute_resid_IV;  // ||psi(T)(T^j f) - T^j(psi(T)f)||
    std::vector<double> commute_tail_IV;

    double mult_resid_V = 0.0;  // ||phi(T)(psi(T)f) - (phi psi)(T)f||
    double mult_tail_V = 0.0;

    double covering_resid_VI = 0.0;  // ||Psi(T)(sum_k psi_k(T)f) - f||
    double covering_tail_VI = 0.0;
    double witness_norm_VI = 0.0;    // achieved ||psi(T)f||
};

// pre: f built on the same grid/mask convention; commutant_J nonempty.
PropertyReport property_suite(const BeurlingSymbol& phi, const BeurlingSymbol& psi,
                              const WeightP& v, const ErgodicMap& map, const GridFunction& f,
                              const std::vector<long>& commutant_J, long M, double t,
                              long grid = 1024, double cover_delta = 0.15);

struct DemoConfig {
    WeightP v;                     // normalized inside; default e*x
    IrrationalSpec alpha = IrrationalSpec::golden();
    double epsilon = 8.0;
    double t = 0.05;
    long M = 1024;       // series truncation in applications
    long grid = 512;     // evaluation grid
    long bump_trunc = 4096;
    long K = 8;
    double phi_center = 0.25;
    double psi_center = 0.75;
    double half_width = 0.1;
    std::vector<long> commutant_J = {1, 2, 3};

    static DemoConfig defaults();
};

struct DemoStage {
    std::string name;
    bool passed = false;
    double value = 0.0;      // the certified quantity (residual or norm)
    double tolerance = 0.0;  // the bound it was compared against
    std::string note;
};

struct DemoReport {
    std::vector<DemoStage> stages;  // disjointness, witness, membership, nontriviality
    bool all_passed = false;
    double product_norm = 0.0;              // (a)
    double witness_norm = 0.0;              // (b) ||h||_p, h = psi(T)g
    double witness_tail = 0.0;
    std::vector<double> membership_resid;   // (c) ||phi(T)(T^j h)|| / ||T^j h|| per j
    double membership_tol = 0.0;            // relative, like the residuals
    double generic_norm = 0.0;              // (d) ||phi(T)u|| / ||u|| for a generic u
};

// End-to-end subspace demonstration: disjoint bumps phi, psi; witness
// h = psi(T)g for a masked g; membership residuals phi(T)(T^j h) ~ 0; and a
// generic u with phi(T)u clearly nonzero.  Stages keep running after a
// failure so negative controls report all their evidence; upstream numeric
// errors abort with the stage tag prepended.  A rational rotation is
// rejected up front: its orbits are periodic, the map is not ergodic, and
// the spectral construction already provides an invariant subspace there.
DemoReport hyperinvariant_demo(const DemoConfig& config);

}  // namespace wco
