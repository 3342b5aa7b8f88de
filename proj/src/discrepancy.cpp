#include "wco/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wco/orbit.hpp"

namespace wco {

namespace {

// # points in [a, b) among a sorted sample.
long count_half_open(const std::vector<double>& sorted, double a, double b) {
  auto lo = std::lower_bound(sorted.begin(), sorted.end(), a);
  auto hi = std::lower_bound(sorted.begin(), sorted.end(), b);
  return static_cast<long>(hi - lo);
}

struct Witness {
  double lo = 0.0, hi = 0.0;
  double achieved = 0.0;
};

// Smallest sample value strictly above t, or 2.0 when none exists.
double next_above(const std::vector<double>& sorted, double t) {
  auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
  return it == sorted.end() ? 2.0 : *it;
}

// Realize a candidate interval with inclusion pattern (incl_u, incl_v) as a
// genuine half-open [lo, hi). An excluded left endpoint or included right
// endpoint is nudged past the boundary by at most 1e-13, staying short of
// the next sample value so no other point changes sides.
Witness realize(const std::vector<double>& sorted, long N, double u, double v,
                bool incl_u, bool incl_v) {
  Witness w;
  if (incl_u) {
    w.lo = u;
  } else {
    double gap = next_above(sorted, u) - u;
    w.lo = u + std::min(1e-13, gap / 2.0);
    if (w.lo == u) w.lo = std::nextafter(u, 2.0);
  }
  if (v >= 1.0) {
    w.hi = 1.0;  // no point equals 1; [*, 1) includes every tail point
  } else if (incl_v) {
    double gap = next_above(sorted, v) - v;
    w.hi = v + std::min(1e-13, gap / 2.0);
    if (w.hi == v) w.hi = std::nextafter(v, 2.0);
    if (w.hi > 1.0) w.hi = 1.0;
  } else {
    w.hi = v;
  }
  long cnt = count_half_open(sorted, w.lo, w.hi);
  w.achieved = std::fabs(static_cast<double>(cnt) / static_cast<double>(N) - (w.hi - w.lo));
  return w;
}

void validate_prefix(const PointSequence& seq, long N) {
  if (seq.points.empty()) throw EmptySequence("discrepancy: no points");
  if (N < 1) throw UsageError("discrepancy: N must be >= 1");
  if (N > static_cast<long>(seq.points.size()))
    throw UsageError("discrepancy: N exceeds sequence length");
}

double closed_form(std::vector<double>& sorted, long* jmax_out = nullptr,
                   long* jmin_out = nullptr) {
  std::sort(sorted.begin(), sorted.end());
  long N = static_cast<long>(sorted.size());
  double dmax = -std::numeric_limits<double>::infinity();
  double dmin = std::numeric_limits<double>::infinity();
  long jmax = 0, jmin = 0;
  for (long i = 1; i <= N; ++i) {
    double d = static_cast<double>(i) / static_cast<double>(N) - sorted[i - 1];
    if (d > dmax) {
      dmax = d;
      jmax = i;
    }
    if (d < dmin) {
      dmin = d;
      jmin = i;
    }
  }
  if (jmax_out) *jmax_out = jmax;
  if (jmin_out) *jmin_out = jmin;
  return 1.0 / static_cast<double>(N) + dmax - dmin;
}

// Orbit precision audit, two layers. A priori: the certified per-step drift
// 2^(1-P) implies |measured - true| <= 2N * 2^(1-P); refuse when that bound
// alone cannot pin D_N to 1e-15 (loose angle certificates at large N).
// Guard digits: when the angle certifies more precision, rerun there and
// insist the value does not move by more than 1e-15.
void audit_orbit_precision(const PointSequence& seq, long N, double d_value) {
  if (!seq.gen_alpha) return;
  const IrrationalSpec& alpha = *seq.gen_alpha;
  unsigned used = seq.gen_bits;
  double apriori = 2.0 * static_cast<double>(N) * std::ldexp(1.0, 1 - static_cast<int>(used));
  if (apriori > 1e-15)
    throw InsufficientPrecision(
        "orbit precision audit: angle certificate too loose to pin D_N", N);
  unsigned retry = RotationOrbit::certified_bits(alpha, 2 * used);
  if (retry == used) return;  // stored precision is the ceiling; a priori bound stands
  RotationOrbit orb(alpha, retry);
  std::vector<double> pts =
      seq.gen_forward ? orb.points(seq.gen_x0, 1, N) : orb.points(seq.gen_x0, -N, -1);
  double d_retry = closed_form(pts);
  if (std::fabs(d_retry - d_value) > 1e-15)
    throw InsufficientPrecision("orbit precision audit: discrepancy shifts with step precision",
                                N);
}

DiscrepancyReport finalize(long N, double d, const Witness& w, const char* method) {
  if (d < 1.0 / static_cast<double>(N) - 1e-9 || d > 1.0 + 1e-9)
    throw LabError("discrepancy outside [1/N, 1]: evaluator bug");
  if (std::fabs(w.achieved - d) > 1e-12)
    throw LabError("witness interval fails to reproduce the discrepancy");
  DiscrepancyReport rep;
  rep.N = N;
  rep.D_N = d;
  rep.witness_lo = w.lo;
  rep.witness_hi = w.hi;
  rep.achieved = w.achieved;
  rep.method = method;
  return rep;
}

}  // namespace

PointSequence PointSequence::from_points(std::vector<double> pts) {
  for (double x : pts)
    if (!(x >= 0.0 && x < 1.0)) throw UsageError("point sequence: entries must lie in [0,1)");
  PointSequence s;
  s.points = std::move(pts);
  return s;
}

PointSequence PointSequence::orbit(const IrrationalSpec& alpha, double x0, long N,
                                   bool forward, unsigned bits) {
  if (N < 1) throw UsageError("orbit sequence: N must be >= 1");
  RotationOrbit orb(alpha, bits);
  PointSequence s;
  s.points = forward ? orb.points(x0, 1, N) : orb.points(x0, -N, -1);
  s.source = std::string(forward ? "orbit+" : "orbit-") + " x0=" + std::to_string(x0) +
             " over " + alpha.describe();
  s.gen_alpha = alpha;
  s.gen_x0 = x0;
  s.gen_forward = forward;
  s.gen_bits = orb.bits();
  return s;
}

DiscrepancyReport discrepancy_oracle(const PointSequence& seq, long N) {
  validate_prefix(seq, N);
  std::vector<double> sorted(seq.points.begin(), seq.points.begin() + N);
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> cands;
  cands.push_back(0.0);
  for (double x : sorted)
    if (cands.back() != x) cands.push_back(x);
  if (cands.back() != 1.0) cands.push_back(1.0);

  // Rank tables: lt[i] = # points < cands[i], le[i] = # points <= cands[i].
  std::vector<long> lt(cands.size()), le(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    lt[i] = static_cast<long>(
        std::lower_bound(sorted.begin(), sorted.end(), cands[i]) - sorted.begin());
    le[i] = static_cast<long>(
        std::upper_bound(sorted.begin(), sorted.end(), cands[i]) - sorted.begin());
  }

  double best = -1.0;
  std::size_t bi = 0, bj = 0;
  bool b_incl_u = true, b_incl_v = true;
  const double Nd = static_cast<double>(N);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    // Degenerate [u,u]: counts the multiplicity against length zero.
    double here = static_cast<double>(le[i] - lt[i]) / Nd;
    if (here > best) {
      best = here;
      bi = bj = i;
      b_incl_u = b_incl_v = true;
    }
    for (std::size_t j = i + 1; j < cands.size(); ++j) {
      double len = cands[j] - cands[i];
      const long counts[4] = {le[j] - lt[i],   // [u, v]
                              lt[j] - lt[i],   // [u, v)
                              le[j] - le[i],   // (u, v]
                              lt[j] - le[i]};  // (u, v)
      const bool iu[4] = {true, true, false, false};
      const bool iv[4] = {true, false, true, false};
      for (int c = 0; c < 4; ++c) {
        double val = std::fabs(static_cast<double>(counts[c]) / Nd - len);
        if (val > best) {
          best = val;
          bi = i;
          bj = j;
          b_incl_u = iu[c];
          b_incl_v = iv[c];
        }
      }
    }
  }

  Witness w = (bi == bj)
                  ? realize(sorted, N, cands[bi], cands[bi], true, true)
                  : realize(sorted, N, cands[bi], cands[bj], b_incl_u, b_incl_v);

  auto rep = finalize(N, best, w, "oracle");
  audit_orbit_precision(seq, N, rep.D_N);
  return rep;
}

DiscrepancyReport discrepancy_fast(const PointSequence& seq, long N) {
  validate_prefix(seq, N);
  std::vector<double> sorted(seq.points.begin(), seq.points.begin() + N);
  long jmax = 0, jmin = 0;
  double d = closed_form(sorted, &jmax, &jmin);

  // The sup is attained at the extremal sorted indices: the closed interval
  // [x_(jmin), x_(jmax)] when jmin <= jmax (surplus), the open interval
  // (x_(jmax), x_(jmin)) otherwise (deficit). Both cases give
  // |count/N - length| = 1/N + maxdiff - mindiff exactly.
  Witness w;
  if (jmin == jmax) {
    w = realize(sorted, N, sorted[jmin - 1], sorted[jmin - 1], true, true);
  } else if (jmin < jmax) {
    w = realize(sorted, N, sorted[jmin - 1], sorted[jmax - 1], true, true);
  } else {
    w = realize(sorted, N, sorted[jmax - 1], sorted[jmin - 1], false, false);
  }

  auto rep = finalize(N, d, w, "closed-form");
  audit_orbit_precision(seq, N, rep.D_N);
  return rep;
}

double sup_discrepancy_over_x(const IrrationalSpec& alpha, long N,
                              const std::vector<double>& x_grid, double* spread,
                              unsigned bits) {
  if (x_grid.empty()) throw UsageError("sup_discrepancy_over_x: empty grid");
  double dmax = -std::numeric_limits<double>::infinity();
  double dmin = std::numeric_limits<double>::infinity();
  for (double x0 : x_grid) {
    auto rep = discrepancy_fast(PointSequence::orbit(alpha, x0, N, true, bits), N);
    dmax = std::max(dmax, rep.D_N);
    dmin = std::min(dmin, rep.D_N);
  }
  if (dmax / dmin > 1.01)
    throw LabError("rotation discrepancy is not constant across starts: orbit bug");
  if (spread) *spread = dmax - dmin;
  return dmax;
}

namespace {

// <h alpha> as a double, certified by the exact enclosure: throws when the
// interval straddles an integer (cannot be signed) but is not exactly on it.
double circle_distance(const mpz_class& n_lo, const mpz_class& n_hi, const mpz_class& L,
                       long h) {
  mpz_class m_lo, m_hi;
  mpz_class t = 2 * n_lo + L;
  mpz_fdiv_q(m_lo.get_mpz_t(), t.get_mpz_t(), mpz_class(2 * L).get_mpz_t());
  t = 2 * n_hi + L;
  mpz_fdiv_q(m_hi.get_mpz_t(), t.get_mpz_t(), mpz_class(2 * L).get_mpz_t());
  if (m_lo != m_hi)
    throw InsufficientPrecision("kn_bound: enclosure too wide at multiple h", h);
  mpz_class e1 = n_lo - m_lo * L, e2 = n_hi - m_lo * L;
  if (e1 == 0 && e2 == 0)
    throw DomainError("kn_bound: h*alpha is exactly integral; bound diverges");
  if (sgn(e1) <= 0 && sgn(e2) >= 0)
    throw InsufficientPrecision("kn_bound: enclosure touches an integer", h);
  mpz_class a1 = abs(e1), a2 = abs(e2);
  mpq_class mid(a1 + a2, 2 * L);
  mid.canonicalize();
  return mid.get_d();
}

}  // namespace

double kn_bound(const IrrationalSpec& alpha, long N, long m) {
  auto [best_m, best] = kn_best(alpha, N, m, m);
  (void)best_m;
  return best;
}

std::pair<long, double> kn_best(const IrrationalSpec& alpha, long N, long m_lo, long m_hi) {
  if (N < 1) throw UsageError("kn_bound: N must be >= 1");
  if (m_lo < 1 || m_hi < m_lo) throw UsageError("kn_bound: need 1 <= m_lo <= m_hi");
  auto [lo, hi] = alpha.enclosure();
  mpz_class D1 = lo.get_den(), D2 = hi.get_den(), L;
  mpz_lcm(L.get_mpz_t(), D1.get_mpz_t(), D2.get_mpz_t());
  mpz_class A_lo = lo.get_num() * (L / D1);
  mpz_class A_hi = hi.get_num() * (L / D2);

  double sum = 0.0;
  double best = std::numeric_limits<double>::infinity();
  long best_m = m_lo;
  mpz_class n_lo = 0, n_hi = 0;
  for (long h = 1; h <= m_hi; ++h) {
    n_lo += A_lo;
    n_hi += A_hi;
    sum += 1.0 / (static_cast<double>(h) * circle_distance(n_lo, n_hi, L, h));
    if (h >= m_lo) {
      double bound = 3.0 * (1.0 / static_cast<double>(h) + sum / static_cast<double>(N));
      if (bound < best) {
        best = bound;
        best_m = h;
      }
    }
  }
  return {best_m, best};
}

long kn_proof_m(long N, double eps) {
  if (N < 2) throw UsageError("kn_proof_m: N must be >= 2");
  if (!(eps > 0)) throw UsageError("kn_proof_m: eps must be positive");
  double lnN = std::log(static_cast<double>(N));
  double inner = lnN - (3.0 + eps / 3.0) * std::log(lnN);
  if (inner <= 0.0) return 1;
  long m = static_cast<long>(std::floor(std::pow(inner, 3.0 + eps / 2.0)));
  return m < 1 ? 1 : m;
}

}  // namespace wco
