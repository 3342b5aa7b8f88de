#pragma once
// Circle arithmetic and approximation-type classification.
//
// The central quantity is <t>, the distance from t to the nearest integer.
// An angle alpha resists rational approximation at rate psi when
// q<q alpha> >= 1/psi(q) for all q; type_check scans that inequality with
// exact interval arithmetic so every verdict is a certificate, not a float
// comparison. Continued fractions are computed exactly for quadratic surds
// (period detection included) and by endpoint agreement for interval-certified
// angles, which turns "not enough stored precision" into an explicit error
// instead of a silently wrong term.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "wco/irrational.hpp"

namespace wco {

// min_{n in Z} |t - n|, in [0, 1/2].
double nearest_int_distance(double t);

struct ContinuedFraction {
  std::vector<mpz_class> a;  // partial quotients a_1, a_2, ... (alpha in (0,1))
  std::vector<mpz_class> p;  // convergent numerators, p[k] matches a[k]
  std::vector<mpz_class> q;  // convergent denominators, strictly increasing
  bool terminated = false;   // the expansion ended exactly (rational angle)
  long period_start = -1;    // surds: first index of the detected period (0-based)
  long period_length = 0;
};

// Partial quotients a_1..a_depth with convergents. Throws
// InsufficientPrecision when the stored enclosure cannot certify a term
// (fail_index = 1-based index of the first uncertifiable term).
ContinuedFraction continued_fraction(const IrrationalSpec& alpha, int depth);

enum class PsiKind { Constant, Power, StretchedExp };

// psi(q): Constant -> c; Power -> q^k; StretchedExp -> exp(q^(1/(3+eps))).
struct PsiSpec {
  PsiKind kind = PsiKind::Constant;
  double c = 1.0;
  long k = 2;
  double eps = 1.0;

  static PsiSpec constant(double c);
  static PsiSpec power(long k);
  static PsiSpec stretched_exp(double eps);
  std::string describe() const;
};

struct TypeCertificate {
  PsiSpec psi;
  long Q = 0;
  double min_product = 0.0;  // min over q <= Q of q<q alpha>
  long argmin_q = 0;
  bool consistent = true;
  long witness_q = 0;               // first violating q when !consistent
  std::vector<long> violations;     // every violating q <= Q
  long consistent_from = 1;         // smallest q0 with no violations in [q0, Q]
};

// Certified scan of q<q alpha> >= 1/psi(q) over q = 1..Q.
TypeCertificate type_check(const IrrationalSpec& alpha, const PsiSpec& psi, long Q);

// q_k <q_k alpha> for the convergent denominators q_k <= Q (fast path used
// to cross-check the exhaustive scan).
std::vector<std::pair<mpz_class, double>> convergent_products(const IrrationalSpec& alpha, long Q);

struct LiouvilleReport {
  unsigned base = 10;
  double epsilon = 1.0;
  unsigned n_max = 4;
  std::vector<unsigned long> u;       // u_n = n!, index 0 holds u_1
  std::vector<bool> cond_growth;      // n*u_n + ln(beta)/ln(b) < u_{n+1}, n = 1..n_max-1
  std::vector<bool> cond_type;        // u_{n+1} < b^(u_n/(3+eps))/ln b,  n = 1..n_max-1
  long n0 = -1;                       // smallest n from which both hold through n_max-1
  bool overflow = false;              // exponent budget hit; report truncated
  unsigned effective_n_max = 0;       // n_max actually used for alpha
  std::optional<IrrationalSpec> alpha;
};

// Builds alpha = sum b^(-n!) and evaluates both growth conditions per n.
// On exponent-budget overflow the report is truncated, not aborted.
LiouvilleReport liouville_generate(unsigned base, double epsilon, unsigned n_max,
                                   unsigned long exponent_budget = 100000);

}  // namespace wco
