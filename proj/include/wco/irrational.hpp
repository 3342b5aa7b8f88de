#pragma once
// Exact representations of rotation angles in (0,1).
//
// Three kinds are supported:
//   - quadratic surds (p + sqrt(d))/q, held in exact integer arithmetic;
//   - truncated base-b series sum_{n<=n_max} b^(-n!) with an explicit bound
//     on the discarded tail (the fast-approximable test angles);
//   - explicit rational approximants p/q with an error bound (certificates
//     of an externally measured angle; error 0 means exactly rational).
//
// Every kind can produce an exact rational enclosure [lo, hi] of the angle,
// which is what the certified scans downstream consume. Orbit code asks for
// a fixed-point step floor(alpha * 2^P): the per-step angle error is then
// below 2^(1-P), so a length-n orbit is exact to n * 2^(1-P).

#include <gmpxx.h>

#include <string>
#include <utility>

#include "wco/fixed.hpp"

namespace wco {

enum class AngleKind { Surd, LiouvilleSeries, Rational };

class IrrationalSpec {
 public:
  // (p + sqrt(d)) / q, d > 0 not a perfect square; value must land in (0,1).
  static IrrationalSpec surd(long p, unsigned long d, long q, unsigned precision_bits = 256);
  static IrrationalSpec golden();  // (sqrt(5) - 1)/2
  static IrrationalSpec silver();  // sqrt(2) - 1

  // sum_{n<=n_max} base^(-n!), tail bound 2*base^(-(n_max+1)!).
  // epsilon tags the associated approximation-rate family; it does not
  // change the digits.
  static IrrationalSpec liouville(unsigned base, double epsilon, unsigned n_max);

  // p/q with |alpha - p/q| <= error_bound; 0 < p < q, gcd(p,q) = 1.
  static IrrationalSpec rational(mpz_class p, mpz_class q, double error_bound,
                                 unsigned precision_bits = 128);

  // Parse "golden", "silver", "surd:p,d,q", "liouville:b,eps,nmax",
  // "rational:p/q[,err]", or a decimal literal (treated as a rational
  // certificate with half-ulp error).
  static IrrationalSpec parse(const std::string& text);

  AngleKind kind() const { return kind_; }
  unsigned precision_bits() const { return precision_bits_; }
  bool exactly_rational() const { return kind_ == AngleKind::Rational && error_bound_ == 0.0; }

  // Exact enclosure [lo, hi], hi - lo <= 2^(1-bits) when achievable.
  // Surds tighten on demand to any width; the other kinds throw
  // InsufficientPrecision when asked for more than they store.
  std::pair<mpq_class, mpq_class> enclosure(unsigned bits) const;
  std::pair<mpq_class, mpq_class> enclosure() const { return enclosure(precision_bits_); }

  double approx() const;

  // floor(alpha * 2^bits) as a torus step.
  TorusFixed step(unsigned bits) const;

  std::string describe() const;

  // Accessors used by the generator report and serialization.
  long surd_p() const { return p_; }
  unsigned long surd_d() const { return d_; }
  long surd_q() const { return q_; }
  unsigned liouville_base() const { return base_; }
  double liouville_epsilon() const { return epsilon_; }
  unsigned liouville_n_max() const { return n_max_; }
  const mpz_class& rational_p() const { return rp_; }
  const mpz_class& rational_q() const { return rq_; }
  double rational_error() const { return error_bound_; }

 private:
  IrrationalSpec() = default;

  AngleKind kind_ = AngleKind::Surd;
  unsigned precision_bits_ = 256;
  // Surd fields.
  long p_ = 0;
  unsigned long d_ = 0;
  long q_ = 1;
  // Series fields.
  unsigned base_ = 10;
  double epsilon_ = 1.0;
  unsigned n_max_ = 4;
  // Rational fields.
  mpz_class rp_, rq_;
  double error_bound_ = 0.0;
};

}  // namespace wco
