#include "wco/irrational.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wco {

namespace {

// n! guarded against overflowing the exponent budget used by the series kind.
unsigned long factorial_checked(unsigned n, unsigned long budget) {
  unsigned long f = 1;
  for (unsigned i = 2; i <= n; ++i) {
    if (f > budget / i) throw OverflowError("factorial exponent exceeds budget");
    f *= i;
  }
  return f;
}

mpz_class pow_ui(unsigned base, unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

}  // namespace

IrrationalSpec IrrationalSpec::surd(long p, unsigned long d, long q, unsigned precision_bits) {
  if (q == 0) throw UsageError("surd: q must be nonzero");
  if (d == 0 || is_perfect_square(mpz_class(d)))
    throw UsageError("surd: d must be a positive non-square");
  IrrationalSpec s;
  s.kind_ = AngleKind::Surd;
  s.p_ = p;
  s.d_ = d;
  s.q_ = q;
  s.precision_bits_ = precision_bits < 64 ? 64 : precision_bits;
  auto [lo, hi] = s.enclosure(64);
  if (!(lo > 0 && hi < 1)) throw UsageError("surd: value must lie in (0,1)");
  return s;
}

IrrationalSpec IrrationalSpec::golden() { return surd(-1, 5, 2); }
IrrationalSpec IrrationalSpec::silver() { return surd(-1, 2, 1); }

IrrationalSpec IrrationalSpec::liouville(unsigned base, double epsilon, unsigned n_max) {
  if (base < 2) throw UsageError("liouville: base must be >= 2");
  if (!(epsilon > 0)) throw UsageError("liouville: epsilon must be positive");
  if (n_max < 1) throw UsageError("liouville: n_max must be >= 1");
  // The tail bound needs (n_max+1)!; cap it so enclosure denominators stay
  // within a few megabits.
  unsigned long next_u = factorial_checked(n_max + 1, 2000000UL);
  IrrationalSpec s;
  s.kind_ = AngleKind::LiouvilleSeries;
  s.base_ = base;
  s.epsilon_ = epsilon;
  s.n_max_ = n_max;
  double bits = static_cast<double>(next_u) * std::log2(static_cast<double>(base));
  s.precision_bits_ = static_cast<unsigned>(bits > 4.0 ? bits - 2.0 : 2.0);
  return s;
}

IrrationalSpec IrrationalSpec::rational(mpz_class p, mpz_class q, double error_bound,
                                        unsigned precision_bits) {
  if (!(q > 0) || !(p > 0) || p >= q) throw UsageError("rational: need 0 < p < q");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
  if (g != 1) throw UsageError("rational: p/q must be in lowest terms");
  if (!(error_bound >= 0)) throw UsageError("rational: error bound must be >= 0");
  IrrationalSpec s;
  s.kind_ = AngleKind::Rational;
  s.rp_ = std::move(p);
  s.rq_ = std::move(q);
  s.error_bound_ = error_bound;
  if (error_bound > 0) {
    s.precision_bits_ = static_cast<unsigned>(std::max(2.0, -std::log2(2.0 * error_bound)));
  } else {
    s.precision_bits_ = precision_bits;
  }
  return s;
}

std::pair<mpq_class, mpq_class> IrrationalSpec::enclosure(unsigned bits) const {
  switch (kind_) {
    case AngleKind::Surd: {
      // sqrt(d) in [s, s+1] / 2^B with s = isqrt(d * 4^B).
      unsigned B = bits + 2;
      mpz_class scaled = mpz_class(d_);
      mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * B);
      mpz_class s = isqrt(scaled);
      mpz_class twoB = 1;
      mpz_mul_2exp(twoB.get_mpz_t(), twoB.get_mpz_t(), B);
      mpq_class root_lo(s, twoB), root_hi(s + 1, twoB);
      root_lo.canonicalize();
      root_hi.canonicalize();
      mpq_class lo = (mpq_class(p_) + root_lo) / mpq_class(q_);
      mpq_class hi = (mpq_class(p_) + root_hi) / mpq_class(q_);
      if (q_ < 0) std::swap(lo, hi);
      lo.canonicalize();
      hi.canonicalize();
      return {lo, hi};
    }
    case AngleKind::LiouvilleSeries: {
      if (bits > precision_bits_)
        throw InsufficientPrecision("liouville series: requested precision exceeds stored tail bound",
                                    static_cast<long>(bits));
      mpq_class lo(0);
      unsigned long budget = 2000000UL;
      for (unsigned n = 1; n <= n_max_; ++n) {
        unsigned long u = factorial_checked(n, budget);
        mpq_class term(1, pow_ui(base_, u));
        term.canonicalize();
        lo += term;
      }
      unsigned long next_u = factorial_checked(n_max_ + 1, budget);
      mpq_class tail(2, pow_ui(base_, next_u));
      tail.canonicalize();
      return {lo, lo + tail};
    }
    case AngleKind::Rational: {
      mpq_class mid(rp_, rq_);
      mid.canonicalize();
      if (error_bound_ == 0.0) return {mid, mid};
      if (bits > precision_bits_)
        throw InsufficientPrecision("rational certificate: requested precision exceeds error bound",
                                    static_cast<long>(bits));
      mpq_class err(error_bound_);
      return {mid - err, mid + err};
    }
  }
  throw LabError("unreachable angle kind");
}

double IrrationalSpec::approx() const {
  unsigned bits = precision_bits_ < 128 ? precision_bits_ : 128;
  auto [lo, hi] = enclosure(bits);
  mpq_class mid = (lo + hi) / 2;
  return mid.get_d();
}

TorusFixed IrrationalSpec::step(unsigned bits) const {
  if (kind_ != AngleKind::Surd && bits + 2 > precision_bits_)
    throw InsufficientPrecision("angle not certified to the requested orbit precision",
                                static_cast<long>(bits));
  auto [lo, hi] = enclosure(bits + 2);
  (void)hi;
  return TorusFixed::from_mpq_floor(lo, bits);
}

std::string IrrationalSpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case AngleKind::Surd:
      if (p_ == -1 && d_ == 5 && q_ == 2) {
        os << "golden (sqrt(5)-1)/2";
      } else if (p_ == -1 && d_ == 2 && q_ == 1) {
        os << "silver sqrt(2)-1";
      } else {
        os << "surd (" << p_ << "+sqrt(" << d_ << "))/" << q_;
      }
      break;
    case AngleKind::LiouvilleSeries:
      os << "liouville base " << base_ << ", u_n = n!, n_max " << n_max_
         << ", epsilon " << epsilon_;
      break;
    case AngleKind::Rational:
      os << "rational " << rp_.get_str() << "/" << rq_.get_str();
      if (error_bound_ > 0) os << " +- " << error_bound_;
      break;
  }
  return os.str();
}

IrrationalSpec IrrationalSpec::parse(const std::string& text) {
  if (text == "golden") return golden();
  if (text == "silver") return silver();
  auto colon = text.find(':');
  std::string head = colon == std::string::npos ? text : text.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "surd") {
    long p, q;
    unsigned long d;
    char c1, c2;
    std::istringstream is(rest);
    if (!(is >> p >> c1 >> d >> c2 >> q) || c1 != ',' || c2 != ',')
      throw UsageError("surd spec: expected surd:p,d,q");
    return surd(p, d, q);
  }
  if (head == "liouville") {
    unsigned b, nmax;
    double eps;
    char c1, c2;
    std::istringstream is(rest);
    if (!(is >> b >> c1 >> eps >> c2 >> nmax) || c1 != ',' || c2 != ',')
      throw UsageError("liouville spec: expected liouville:base,epsilon,n_max");
    return liouville(b, eps, nmax);
  }
  if (head == "rational") {
    auto slash = rest.find('/');
    if (slash == std::string::npos) throw UsageError("rational spec: expected rational:p/q[,err]");
    double err = 0.0;
    std::string qpart = rest.substr(slash + 1);
    auto comma = qpart.find(',');
    if (comma != std::string::npos) {
      err = std::stod(qpart.substr(comma + 1));
      qpart = qpart.substr(0, comma);
    }
    mpz_class p(rest.substr(0, slash)), q(qpart);
    return rational(p, q, err);
  }
  // Decimal literal: certificate with half-ulp-of-the-literal error.
  if (!text.empty() && (std::isdigit(static_cast<unsigned char>(text[0])) || text[0] == '.')) {
    auto dot = text.find('.');
    if (dot == std::string::npos) throw UsageError("angle literal must lie in (0,1)");
    std::string digits = text.substr(dot + 1);
    if (digits.empty() || text.substr(0, dot) != "0")
      throw UsageError("angle literal must look like 0.ddd...");
    mpz_class p(digits);
    mpz_class q = pow_ui(10, digits.size());
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    p /= g;
    q /= g;
    double err = 0.5 * std::pow(10.0, -static_cast<double>(digits.size()));
    return rational(p, q, err);
  }
  throw UsageError("unrecognized angle spec: " + text);
}

}  // namespace wco
