#pragma once
// Fixed-point arithmetic on the unit circle backed by GMP integers.
//
// A TorusFixed holds an integer V and a precision P, representing the point
// V / 2^P in [0,1). Rotation orbits then reduce to integer addition mod 2^P,
// so a length-n orbit accumulates no rounding at all: the only error is the
// initial truncation of the angle (< 2^-P per step, carried by callers) plus
// one final rounding to double on readout.

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <utility>

#include "wco/errors.hpp"

namespace wco {

// floor(sqrt(n)) for n >= 0.
inline mpz_class isqrt(const mpz_class& n) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_perfect_square(const mpz_class& n) {
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

class TorusFixed {
 public:
  TorusFixed() = default;
  TorusFixed(mpz_class value, unsigned bits) : v_(std::move(value)), bits_(bits) {
    reduce();
  }

  // Exact embedding of a double in [0,1) (doubles are dyadic rationals).
  static TorusFixed from_double(double x, unsigned bits) {
    if (!(x >= 0.0 && x < 1.0)) throw UsageError("TorusFixed: point outside [0,1)");
    return from_mpq_floor(mpq_class(x), bits);
  }

  // floor(x * 2^bits) mod 2^bits.
  static TorusFixed from_mpq_floor(const mpq_class& x, unsigned bits) {
    mpz_class num = x.get_num();
    mpz_class scaled;
    mpz_mul_2exp(scaled.get_mpz_t(), num.get_mpz_t(), bits);
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den().get_mpz_t());
    return TorusFixed(std::move(q), bits);
  }

  unsigned bits() const { return bits_; }
  const mpz_class& value() const { return v_; }

  // this + k*step (mod 1); step must share the precision.
  TorusFixed stepped(const mpz_class& k, const TorusFixed& step) const {
    TorusFixed out(v_ + k * step.v_, bits_);
    return out;
  }

  // In-place single steps; step.value() must lie in [0, 2^bits).
  void advance(const TorusFixed& step) {
    v_ += step.v_;
    if (v_ >= modulus()) v_ -= modulus();
  }
  void retreat(const TorusFixed& step) {
    v_ -= step.v_;
    if (v_ < 0) v_ += modulus();
  }

  // Rounded readout; |result - V/2^P| <= 2^-51.
  double to_double() const {
    if (bits_ <= 900) {
      return std::ldexp(mpz_get_d(v_.get_mpz_t()), -static_cast<int>(bits_));
    }
    mpz_class top = v_ >> (bits_ - 64);
    return std::ldexp(mpz_get_d(top.get_mpz_t()), -64);
  }

  // Circle distance to 0, i.e. min(V, 2^P - V)/2^P, as a double.
  double dist_to_int() const {
    mpz_class other = modulus() - v_;
    const mpz_class& smaller = (v_ <= other) ? v_ : other;
    TorusFixed t(smaller, bits_);
    // smaller may equal 2^P when v_ == 0; reduce() already handled v_ in range.
    if (smaller == modulus()) return 0.0;
    return t.to_double();
  }

 private:
  void reduce() {
    mpz_fdiv_r_2exp(v_.get_mpz_t(), v_.get_mpz_t(), bits_);
  }
  mpz_class modulus() const {
    mpz_class m = 1;
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), bits_);
    return m;
  }

  mpz_class v_ = 0;
  unsigned bits_ = 0;
};

}  // namespace wco
