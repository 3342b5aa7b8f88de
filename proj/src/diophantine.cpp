#include "wco/diophantine.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

namespace wco {

double nearest_int_distance(double t) {
  if (!std::isfinite(t)) throw UsageError("nearest_int_distance: t must be finite");
  double d = std::fabs(t - std::nearbyint(t));
  return d > 0.5 ? 0.5 : d;  // nearbyint ties leave exactly 0.5
}

namespace {

mpz_class fdiv(const mpz_class& n, const mpz_class& d) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

// RAII wrapper for a single mpfr value.
struct MR {
  mpfr_t x;
  explicit MR(mpfr_prec_t prec) { mpfr_init2(x, prec); }
  ~MR() { mpfr_clear(x); }
  MR(const MR&) = delete;
  MR& operator=(const MR&) = delete;
};

// Certified comparison of an exact rational lhs against exp(-q^(1/(3+eps))).
// Returns +1 (lhs >= rhs), -1 (lhs < rhs), 0 (undecided at this precision).
int compare_stretched(const mpq_class& lhs, long q, double eps, mpfr_prec_t prec) {
  MR l_lo(prec), l_hi(prec), r_lo(prec), r_hi(prec), t(prec);
  mpfr_set_q(t.x, lhs.get_mpq_t(), MPFR_RNDD);
  mpfr_set(l_lo.x, t.x, MPFR_RNDD);
  mpfr_set_q(t.x, lhs.get_mpq_t(), MPFR_RNDU);
  mpfr_set(l_hi.x, t.x, MPFR_RNDU);

  MR e_lo(prec), e_hi(prec), p_lo(prec), p_hi(prec), b(prec);
  mpfr_set_d(e_lo.x, 3.0 + eps, MPFR_RNDU);
  mpfr_ui_div(e_lo.x, 1, e_lo.x, MPFR_RNDD);
  mpfr_set_d(e_hi.x, 3.0 + eps, MPFR_RNDD);
  mpfr_ui_div(e_hi.x, 1, e_hi.x, MPFR_RNDU);
  mpfr_set_si(b.x, q, MPFR_RNDN);
  mpfr_pow(p_lo.x, b.x, e_lo.x, MPFR_RNDD);
  mpfr_pow(p_hi.x, b.x, e_hi.x, MPFR_RNDU);
  mpfr_neg(p_hi.x, p_hi.x, MPFR_RNDD);
  mpfr_exp(r_lo.x, p_hi.x, MPFR_RNDD);
  mpfr_neg(p_lo.x, p_lo.x, MPFR_RNDU);
  mpfr_exp(r_hi.x, p_lo.x, MPFR_RNDU);

  if (mpfr_cmp(l_lo.x, r_hi.x) >= 0) return 1;
  if (mpfr_cmp(l_hi.x, r_lo.x) < 0) return -1;
  return 0;
}

}  // namespace

PsiSpec PsiSpec::constant(double c) {
  if (!(c >= 1.0)) throw UsageError("psi constant: need c >= 1");
  PsiSpec s;
  s.kind = PsiKind::Constant;
  s.c = c;
  return s;
}

PsiSpec PsiSpec::power(long k) {
  if (k < 1) throw UsageError("psi power: need k >= 1");
  PsiSpec s;
  s.kind = PsiKind::Power;
  s.k = k;
  return s;
}

PsiSpec PsiSpec::stretched_exp(double eps) {
  if (!(eps > 0)) throw UsageError("psi stretched_exp: need eps > 0");
  PsiSpec s;
  s.kind = PsiKind::StretchedExp;
  s.eps = eps;
  return s;
}

std::string PsiSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case PsiKind::Constant:
      os << "psi(q) = " << c;
      break;
    case PsiKind::Power:
      os << "psi(q) = q^" << k;
      break;
    case PsiKind::StretchedExp:
      os << "psi(q) = exp(q^(1/" << 3.0 + eps << "))";
      break;
  }
  return os.str();
}

ContinuedFraction continued_fraction(const IrrationalSpec& alpha, int depth) {
  if (depth < 1) throw UsageError("continued_fraction: depth must be >= 1");
  ContinuedFraction cf;
  // Convergent recurrences seeded with the implicit a_0 = 0 term:
  // p_{-1}=1, q_{-1}=0 -> after a_0: p_0=0, q_0=1.
  mpz_class pm1 = 0, pm2 = 1;  // p_0, p_{-1}
  mpz_class qm1 = 1, qm2 = 0;  // q_0, q_{-1}
  auto push_term = [&](const mpz_class& a) {
    cf.a.push_back(a);
    mpz_class pk = a * pm1 + pm2;
    mpz_class qk = a * qm1 + qm2;
    cf.p.push_back(pk);
    cf.q.push_back(qk);
    pm2 = pm1;
    pm1 = pk;
    qm2 = qm1;
    qm1 = qk;
  };

  if (alpha.kind() == AngleKind::Surd) {
    // Exact arithmetic on x = (P + sqrt(D))/Q with the invariant Q | D - P^2.
    mpz_class P(alpha.surd_p()), Q(alpha.surd_q()), D(alpha.surd_d());
    if ((D - P * P) % Q != 0) {
      mpz_class aq = abs(Q);
      P *= aq;
      D *= aq * aq;
      Q *= aq;
    }
    mpz_class s = isqrt(D);
    // floor((P + sqrt(D))/Q): sqrt(D) is irrational, so the floor equals
    // floor((P+s)/Q) for Q>0 and floor((P+s+1)/Q) for Q<0 (no integer can
    // sit between P+s and P+s+1).
    auto floor_term = [&](const mpz_class& Pv, const mpz_class& Qv) {
      mpz_class num = Pv + (Qv > 0 ? s : s + 1);
      return fdiv(num, Qv);
    };
    mpz_class a0 = floor_term(P, Q);
    if (a0 != 0) throw UsageError("surd angle must lie in (0,1)");
    std::map<std::pair<mpz_class, mpz_class>, long> seen;
    for (int k = 1; k <= depth; ++k) {
      // x_k = 1/(x_{k-1} - a_{k-1}) = (P' + sqrt(D))/Q', with a_0 = 0.
      mpz_class Pn = (k == 1 ? mpz_class(-P) : mpz_class(cf.a.back() * Q - P));
      mpz_class Qn = (D - Pn * Pn) / Q;
      P = Pn;
      Q = Qn;
      auto key = std::make_pair(P, Q);
      auto it = seen.find(key);
      if (it != seen.end() && cf.period_start < 0) {
        cf.period_start = it->second - 1;
        cf.period_length = k - it->second;
      } else if (it == seen.end()) {
        seen.emplace(key, k);
      }
      push_term(floor_term(P, Q));
    }
    return cf;
  }

  // Interval expansion: produce terms while both enclosure endpoints agree.
  auto [lo, hi] = alpha.enclosure();
  if (!(lo >= 0 && hi <= 1)) throw UsageError("angle enclosure must lie in [0,1]");
  for (int k = 1; k <= depth; ++k) {
    if (lo == 0 && hi == 0)
      throw InsufficientPrecision(
          "continued fraction already terminated; no such term exists", k);
    if (lo <= 0)
      throw InsufficientPrecision(
          "enclosure too wide to certify continued-fraction term", k);
    // 1/x maps [lo, hi] to [1/hi, 1/lo].
    mpq_class zlo = 1 / hi, zhi = 1 / lo;
    mpz_class flo = fdiv(zlo.get_num(), zlo.get_den());
    mpz_class fhi = fdiv(zhi.get_num(), zhi.get_den());
    if (flo != fhi)
      throw InsufficientPrecision(
          "enclosure endpoints disagree on continued-fraction term", k);
    push_term(flo);
    mpq_class a(flo);
    lo = zlo - a;
    hi = zhi - a;
    if (lo == 0 && hi == 0) cf.terminated = true;
  }
  return cf;
}

std::vector<std::pair<mpz_class, double>> convergent_products(const IrrationalSpec& alpha,
                                                              long Q) {
  ContinuedFraction cf;
  try {
    cf = continued_fraction(alpha, 64);
  } catch (const InsufficientPrecision& e) {
    if (e.fail_index <= 1) throw;
    cf = continued_fraction(alpha, static_cast<int>(e.fail_index - 1));
  }
  auto [lo, hi] = alpha.enclosure();
  mpq_class mid = (lo + hi) / 2;
  std::vector<std::pair<mpz_class, double>> out;
  for (std::size_t k = 0; k < cf.q.size(); ++k) {
    if (cf.q[k] > Q) break;
    mpq_class err = mid * cf.q[k] - cf.p[k];
    mpq_class prod = abs(err) * cf.q[k];
    out.emplace_back(cf.q[k], prod.get_d());
  }
  return out;
}

TypeCertificate type_check(const IrrationalSpec& alpha, const PsiSpec& psi, long Q) {
  if (Q < 1) throw UsageError("type_check: Q must be >= 1");
  TypeCertificate cert;
  cert.psi = psi;
  cert.Q = Q;

  unsigned bits = alpha.precision_bits();
  if (alpha.kind() == AngleKind::Surd) {
    // Interval width q * 2^-bits must clear the smallest distances by a
    // comfortable margin; 2 log2(Q) + 64 guard bits suffice at desk scale.
    double need = 2.0 * std::log2(static_cast<double>(Q)) + 64.0;
    if (static_cast<double>(bits) < need) bits = static_cast<unsigned>(need);
  }

  for (int attempt = 0;; ++attempt) {
    auto [lo, hi] = alpha.enclosure(bits);
    // Common denominator layout: alpha in [A_lo, A_hi]/D.
    mpz_class D = lo.get_den();
    mpz_class D2 = hi.get_den();
    mpz_class L;
    mpz_lcm(L.get_mpz_t(), D.get_mpz_t(), D2.get_mpz_t());
    mpz_class A_lo = lo.get_num() * (L / D);
    mpz_class A_hi = hi.get_num() * (L / D2);

    cert.violations.clear();
    cert.consistent = true;
    cert.witness_q = 0;
    cert.min_product = std::numeric_limits<double>::infinity();
    cert.argmin_q = 0;

    bool need_more_bits = false;
    long undecided_q = 0;

    mpz_class N_lo = 0, N_hi = 0;
    for (long q = 1; q <= Q; ++q) {
      N_lo += A_lo;
      N_hi += A_hi;
      // Nearest integers to the interval endpoints.
      mpz_class m_lo = fdiv(2 * N_lo + L, 2 * L);
      mpz_class m_hi = fdiv(2 * N_hi + L, 2 * L);
      mpz_class d_min_num, d_max_num;
      if (m_lo == m_hi) {
        mpz_class e1 = N_lo - m_lo * L, e2 = N_hi - m_lo * L;
        mpz_class a1 = abs(e1), a2 = abs(e2);
        if (sgn(e1) != sgn(e2) && sgn(e1) != 0 && sgn(e2) != 0) {
          d_min_num = 0;  // interval straddles the integer
          d_max_num = std::max(a1, a2);
        } else {
          d_min_num = std::min(a1, a2);
          d_max_num = std::max(a1, a2);
        }
      } else {
        // Interval crosses a half-integer; distances range up to 1/2.
        mpz_class a1 = abs(N_lo - m_lo * L), a2 = abs(N_hi - m_hi * L);
        d_min_num = std::min(a1, a2);
        d_max_num = L;  // sentinel for "can reach 1/2" (compared via 2*d vs L below)
      }

      // Track min of q * <q alpha> using the interval midpoint.
      double dist_mid =
          (mpq_class(d_min_num, L).get_d() + mpq_class(d_max_num == L ? d_min_num : d_max_num, L).get_d()) / 2.0;
      double prod_mid = static_cast<double>(q) * dist_mid;
      if (prod_mid < cert.min_product) {
        cert.min_product = prod_mid;
        cert.argmin_q = q;
      }

      // Certified comparison of lhs = q * dist against rhs = 1/psi(q).
      // lhs interval: q * [d_min, d_max]/L.
      int cmp;  // +1 consistent at q, -1 violated at q, 0 undecided
      switch (psi.kind) {
        case PsiKind::Constant: {
          mpq_class cq(psi.c);
          // q*d/L >= 1/c  <=>  q*d*cn >= L*cd
          mpz_class rhs = L * cq.get_den();
          mpz_class lhs_lo = q * d_min_num * cq.get_num();
          mpz_class lhs_hi = q * d_max_num * cq.get_num();
          cmp = (lhs_lo >= rhs) ? 1 : (lhs_hi < rhs ? -1 : 0);
          break;
        }
        case PsiKind::Power: {
          // q*d/L >= q^-k  <=>  q^(k+1)*d >= L
          mpz_class qk;
          mpz_ui_pow_ui(qk.get_mpz_t(), static_cast<unsigned long>(q),
                        static_cast<unsigned long>(psi.k + 1));
          mpz_class lhs_lo = qk * d_min_num;
          mpz_class lhs_hi = qk * d_max_num;
          cmp = (lhs_lo >= L) ? 1 : (lhs_hi < L ? -1 : 0);
          break;
        }
        case PsiKind::StretchedExp: {
          mpq_class lhs_lo(q * d_min_num, L), lhs_hi(q * d_max_num, L);
          lhs_lo.canonicalize();
          lhs_hi.canonicalize();
          int c_lo = compare_stretched(lhs_lo, q, psi.eps, 192);
          if (c_lo == 0) c_lo = compare_stretched(lhs_lo, q, psi.eps, 1024);
          if (c_lo == 1) {
            cmp = 1;
          } else {
            int c_hi = compare_stretched(lhs_hi, q, psi.eps, 192);
            if (c_hi == 0) c_hi = compare_stretched(lhs_hi, q, psi.eps, 1024);
            cmp = (c_hi == -1) ? -1 : 0;
          }
          break;
        }
        default:
          throw LabError("unknown psi kind");
      }

      if (cmp == 0) {
        need_more_bits = true;
        undecided_q = q;
        break;
      }
      if (cmp < 0) {
        cert.violations.push_back(q);
        if (cert.consistent) {
          cert.consistent = false;
          cert.witness_q = q;
        }
      }
    }

    if (!need_more_bits) break;
    if (alpha.kind() == AngleKind::Surd && bits < 4096 && attempt < 6) {
      bits *= 2;
      continue;
    }
    throw InsufficientPrecision(
        "type_check: undecidable comparison at q = " + std::to_string(undecided_q) +
            "; the stored enclosure of alpha is too coarse for this Q",
        undecided_q);
  }

  cert.consistent_from = cert.violations.empty() ? 1 : cert.violations.back() + 1;
  return cert;
}

LiouvilleReport liouville_generate(unsigned base, double epsilon, unsigned n_max,
                                   unsigned long exponent_budget) {
  if (base < 2) throw UsageError("liouville_generate: base must be >= 2");
  if (!(epsilon > 0)) throw UsageError("liouville_generate: epsilon must be positive");
  if (n_max < 2) throw UsageError("liouville_generate: n_max must be >= 2");

  LiouvilleReport rep;
  rep.base = base;
  rep.epsilon = epsilon;
  rep.n_max = n_max;

  // u_n = n!, truncated at the exponent budget.
  unsigned long f = 1;
  for (unsigned n = 1; n <= n_max; ++n) {
    if (n > 1) {
      if (f > exponent_budget / n) {
        rep.overflow = true;
        break;
      }
      f *= n;
    }
    rep.u.push_back(f);
  }
  rep.effective_n_max = static_cast<unsigned>(rep.u.size());
  if (rep.effective_n_max < 2)
    throw OverflowError("liouville_generate: budget admits fewer than two terms");

  // Condition 1: n*u_n + ln(b/(b-1))/ln(b) < u_{n+1}. The additive constant
  // lies strictly in (0,1) for b >= 3 and equals exactly 1 for b = 2, so the
  // comparison reduces to exact integer arithmetic on d = u_{n+1} - n*u_n.
  // Condition 2: u_{n+1} < b^(u_n/(3+eps))/ln(b), decided with directed
  // rounding so a borderline case escalates instead of guessing.
  for (unsigned n = 1; n + 1 <= rep.effective_n_max; ++n) {
    unsigned long un = rep.u[n - 1], un1 = rep.u[n];
    long long delta = static_cast<long long>(un1) -
                      static_cast<long long>(n) * static_cast<long long>(un);
    rep.cond_growth.push_back(base == 2 ? delta >= 2 : delta >= 1);

    int verdict = 0;
    for (mpfr_prec_t prec = 192; prec <= 1536 && verdict == 0; prec *= 2) {
      MR e_lo(prec), e_hi(prec), b(prec), lnb_lo(prec), lnb_hi(prec);
      MR pow_lo(prec), pow_hi(prec), rhs_lo(prec), rhs_hi(prec);
      // exponent u_n/(3+eps), rounded both ways
      mpfr_set_d(e_lo.x, 3.0 + epsilon, MPFR_RNDU);
      mpfr_ui_div(e_lo.x, un, e_lo.x, MPFR_RNDD);
      mpfr_set_d(e_hi.x, 3.0 + epsilon, MPFR_RNDD);
      mpfr_ui_div(e_hi.x, un, e_hi.x, MPFR_RNDU);
      mpfr_set_ui(b.x, base, MPFR_RNDN);
      mpfr_log(lnb_lo.x, b.x, MPFR_RNDD);
      mpfr_log(lnb_hi.x, b.x, MPFR_RNDU);
      mpfr_ui_pow(pow_lo.x, base, e_lo.x, MPFR_RNDD);
      mpfr_ui_pow(pow_hi.x, base, e_hi.x, MPFR_RNDU);
      mpfr_div(rhs_lo.x, pow_lo.x, lnb_hi.x, MPFR_RNDD);
      mpfr_div(rhs_hi.x, pow_hi.x, lnb_lo.x, MPFR_RNDU);
      if (mpfr_cmp_ui(rhs_lo.x, un1) > 0)
        verdict = 1;  // u_{n+1} < rhs certainly
      else if (mpfr_cmp_ui(rhs_hi.x, un1) <= 0)
        verdict = -1;  // u_{n+1} >= rhs certainly
    }
    if (verdict == 0)
      throw InsufficientPrecision("liouville_generate: borderline type condition", n);
    rep.cond_type.push_back(verdict > 0);
  }

  // Smallest n0 such that both conditions hold for every n in
  // [n0, effective_n_max - 1]; -1 when even the last index fails.
  rep.n0 = -1;
  for (long n = static_cast<long>(rep.cond_growth.size()); n >= 1; --n) {
    if (rep.cond_growth[n - 1] && rep.cond_type[n - 1])
      rep.n0 = n;
    else
      break;
  }

  try {
    rep.alpha = IrrationalSpec::liouville(base, epsilon, rep.effective_n_max);
  } catch (const LabError&) {
    rep.alpha.reset();  // budget allowed more terms than the series ctor stores
  }

  return rep;
}

}  // namespace wco
