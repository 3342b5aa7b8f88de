#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wco/irrational.hpp"

namespace wco {

// One factor sigma(x - x0)^s of a product weight.  With absolute = true the
// factor reads |x - x0|^s and is defined on all of [0,1]; with absolute =
// false it reads (x - x0)^s, which for non-integer s is only defined where
// x >= x0.
struct WeightFactor {
    double x0 = 0.0;       // root location, in [0,1]
    double s = 1.0;        // exponent, > 0
    bool absolute = true;  // |x - x0|^s vs (x - x0)^s

    bool operator==(const WeightFactor&) const = default;
};

// Product weight v(x) = C * prod_i sigma_i(x_c - x_i)^{s_i}, one factor list
// per coordinate.  On [0,1]^d the weight vanishes exactly at the roots x_i.
struct WeightP {
    double C = 1.0;
    std::vector<std::vector<WeightFactor>> coords;  // size = dimension

    long dimension() const { return static_cast<long>(coords.size()); }

    // Sum of the exponents s_i in one coordinate.
    double power_sum(long coord) const;

    // Convenience constructor for a one-dimensional weight.
    static WeightP one_dim(double C, std::vector<WeightFactor> factors);
};

// Checks C > 0, dimension >= 1, each factor list nonempty, every x0 in [0,1]
// and every s > 0.  Throws UsageError on violation.
void validate_weight(const WeightP& v);

// Per-root spectral contribution: for a root at c the pair is
//   X  = c - c ln c            (0 at c = 0)
//   X' = (1-c) - (1-c) ln(1-c) (0 at c = 1)
// X + X' always lies in [1, 1 + ln 2], with the minimum at c in {0,1} and
// the maximum at c = 1/2.
std::pair<double, double> root_contribution(double c);

struct SpectralData {
    // One (X, X') pair per factor, coordinates concatenated in order.
    std::vector<std::pair<double, double>> X;
    double r = 0.0;             // spectral radius C * exp(-sum s_i (X_i + X_i'))
    double normalized_C = 0.0;  // constant that rescales the weight to r = 1
};

// Evaluates the weight at a point of [0,1]^d.  Throws DomainError when a
// signed factor with non-integer exponent is evaluated left of its root,
// and UsageError when the point has the wrong dimension or leaves [0,1]^d.
double eval_weight(const WeightP& v, const std::vector<double>& x);
double eval_weight(const WeightP& v, double x);  // one-dimensional shortcut

// Closed-form spectral radius of the weighted rotation operator with weight
// v: r = C * exp(-sum_i s_i (X_i + X_i')), the per-coordinate sums adding up
// across dimensions.
SpectralData spectral_radius(const WeightP& v);

// Rescales the constant so that the spectral radius becomes exactly 1.
// Idempotent: normalize(normalize(v)) == normalize(v).
WeightP normalize(const WeightP& v);

// Birkhoff-average estimate of the spectral radius along a rotation orbit:
//   C * exp( (1/N) sum_{k<N} ln prod_i |tau^k(x0) - x_i|^{s_i} )
// using the k = 0 .. N-1 points of the rotation by alpha started at x0.
// One-dimensional weights only.  Throws OrbitHitsZero when an orbit point
// lands exactly on a root (the log diverges there).
double birkhoff_radius_estimate(const WeightP& v, const IrrationalSpec& alpha,
                                long N, double x0, unsigned bits = 192);

// Numerical cross-check of ln(r/C) in one coordinate: integrates
// sum_i s_i ln|x - x_i| over [0,1] by adaptive quadrature, splitting at each
// root and substituting u = w^2 so the integrand stays bounded.  Independent
// of the closed form used by spectral_radius.
double log_weight_integral(const WeightP& v, long coord, double tol = 1e-10);

// Parses a one-dimensional weight expression: '*'-separated product of
//   - positive numeric literals and the constant 'e' (optionally 'e^k'),
//     multiplied into C,
//   - 'x' or 'x^s'           -> signed factor with root 0,
//   - '(x-c)' or '(x-c)^s'   -> signed factor with root c,
//   - '|x-c|' or '|x-c|^s'   -> absolute factor with root c,
//   - '|x|' or '|x|^s'       -> absolute factor with root 0.
// Examples: "x", "e*x", "|x-0.5|^0.5", "2*x*|x-1|^2".
WeightP parse_weight(const std::string& text);

// Inverse of parse_weight for display purposes.
std::string describe_weight(const WeightP& v);

}  // namespace wco
