#pragma once
// Circle-rotation orbits at certified fixed-point precision.
//
// The step is floor(alpha * 2^P) for the certified lower enclosure endpoint,
// so every orbit point carries a one-sided drift below |k| * 2^(1-P). P is
// clamped to what the angle actually certifies: surds tighten on demand,
// series and rational certificates are capped by their stored tail bound.

#include <vector>

#include "wco/fixed.hpp"
#include "wco/irrational.hpp"

namespace wco {

class RotationOrbit {
 public:
  explicit RotationOrbit(const IrrationalSpec& alpha, unsigned bits = 192);

  unsigned bits() const { return bits_; }
  double per_step_error() const;  // strict bound on |tau(x) - (x + step)|
  const TorusFixed& step() const { return step_; }
  const IrrationalSpec& angle() const { return alpha_; }

  // tau^k(x0) for k = k_lo..k_hi inclusive, as doubles in [0,1).
  std::vector<double> points(double x0, long k_lo, long k_hi) const;

  // tau^k(x0) held exactly at orbit precision.
  TorusFixed point_fixed(const TorusFixed& x0, long k) const;
  TorusFixed point_fixed(double x0, long k) const;

  // Largest step precision the angle certifies, capped at `requested`.
  static unsigned certified_bits(const IrrationalSpec& alpha, unsigned requested);

 private:
  IrrationalSpec alpha_;
  unsigned bits_;
  TorusFixed step_;
};

}  // namespace wco
