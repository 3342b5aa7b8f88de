#include "wco/orbit.hpp"

#include <cmath>

namespace wco {

unsigned RotationOrbit::certified_bits(const IrrationalSpec& alpha, unsigned requested) {
  if (requested < 16) throw UsageError("orbit: need at least 16 bits");
  if (alpha.kind() == AngleKind::Surd) return requested;
  unsigned stored = alpha.precision_bits();
  if (stored < 18)
    throw InsufficientPrecision("angle too coarse for orbit generation", stored);
  return std::min(requested, stored - 2);
}

RotationOrbit::RotationOrbit(const IrrationalSpec& alpha, unsigned bits)
    : alpha_(alpha), bits_(certified_bits(alpha, bits)), step_(alpha.step(bits_)) {}

double RotationOrbit::per_step_error() const {
  return std::ldexp(1.0, 1 - static_cast<int>(bits_));
}

std::vector<double> RotationOrbit::points(double x0, long k_lo, long k_hi) const {
  if (k_hi < k_lo) throw UsageError("orbit: k_hi must be >= k_lo");
  TorusFixed start = point_fixed(TorusFixed::from_double(x0, bits_), k_lo);
  // Hot loop on raw integers with a cached modulus.
  mpz_class v = start.value();
  const mpz_class& s = step_.value();
  mpz_class M = 1;
  mpz_mul_2exp(M.get_mpz_t(), M.get_mpz_t(), bits_);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (long k = k_lo;; ++k) {
    out.push_back(TorusFixed(v, bits_).to_double());
    if (k == k_hi) break;
    v += s;
    if (v >= M) v -= M;
  }
  return out;
}

TorusFixed RotationOrbit::point_fixed(const TorusFixed& x0, long k) const {
  if (x0.bits() != bits_) throw UsageError("orbit: precision mismatch");
  return x0.stepped(mpz_class(k), step_);
}

TorusFixed RotationOrbit::point_fixed(double x0, long k) const {
  return point_fixed(TorusFixed::from_double(x0, bits_), k);
}

}  // namespace wco
