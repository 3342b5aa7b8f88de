#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gmpxx.h>

#include "wco/diophantine.hpp"
#include "wco/errors.hpp"
#include "wco/irrational.hpp"

using namespace wco;

namespace {
mpz_class pow10z(unsigned e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}
}  // namespace

TEST_CASE("nearest_int_distance basics") {
  CHECK(nearest_int_distance(0.0) == 0.0);
  CHECK(nearest_int_distance(1.25) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(nearest_int_distance(-0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(nearest_int_distance(0.5) == 0.5);
  CHECK(nearest_int_distance(7.0) == 0.0);
  CHECK_THROWS_AS(nearest_int_distance(std::numeric_limits<double>::infinity()),
                  UsageError);
}

TEST_CASE("golden ratio continued fraction is all ones") {
  auto cf = continued_fraction(IrrationalSpec::golden(), 5);
  REQUIRE(cf.a.size() == 5);
  for (const auto& t : cf.a) CHECK(t == 1);
  // Convergents 1/1, 1/2, 2/3, 3/5, 5/8.
  CHECK(cf.p == std::vector<mpz_class>({1, 1, 2, 3, 5}));
  CHECK(cf.q == std::vector<mpz_class>({1, 2, 3, 5, 8}));
  CHECK(cf.period_start == 0);
  CHECK(cf.period_length == 1);
  CHECK_FALSE(cf.terminated);
}

TEST_CASE("silver ratio continued fraction is all twos") {
  auto cf = continued_fraction(IrrationalSpec::silver(), 6);
  for (const auto& t : cf.a) CHECK(t == 2);
  CHECK(cf.period_length == 1);
}

TEST_CASE("surd requiring invariant normalization: (1+sqrt(3))/3") {
  auto alpha = IrrationalSpec::surd(1, 3, 3);
  auto cf = continued_fraction(alpha, 10);
  CHECK(cf.a == std::vector<mpz_class>({1, 10, 5, 10, 5, 10, 5, 10, 5, 10}));
  CHECK(cf.q.back() == 80198051);
  CHECK(cf.period_start == 1);
  CHECK(cf.period_length == 2);
}

TEST_CASE("truncated series angle: certified terms then explicit failure") {
  auto a4 = IrrationalSpec::liouville(10, 1.0, 4);
  auto cf3 = continued_fraction(a4, 3);
  CHECK(cf3.a == std::vector<mpz_class>({9, 11, 99}));
  CHECK(cf3.q == std::vector<mpz_class>({9, 100, 9909}));

  // Exactly 14 terms are certifiable from the stored tail bound.
  auto cf14 = continued_fraction(a4, 14);
  CHECK(cf14.a.back() == 9);
  try {
    continued_fraction(a4, 15);
    FAIL("depth 15 must not be certifiable");
  } catch (const InsufficientPrecision& e) {
    CHECK(e.fail_index == 15);
  }
}

TEST_CASE("series angle with six terms: deep expansion and huge quotients") {
  auto a6 = IrrationalSpec::liouville(10, 1.0, 6);
  auto cf = continued_fraction(a6, 20);
  REQUIRE(cf.a.size() == 20);
  CHECK(cf.a[0] == 9);
  CHECK(cf.a[1] == 11);
  CHECK(cf.a[2] == 99);
  CHECK(cf.a[3] == 1);
  CHECK(cf.a[4] == 10);
  CHECK(cf.a[5] == 9);
  CHECK(cf.a[6] == mpz_class("999999999999"));
  CHECK(cf.a[14] == pow10z(72) - 1);
  CHECK(cf.q[5] == 1000000);  // denominator jumps straight to 10^6
  CHECK(cf.q[6] == mpz_class("999999999999109999"));
  CHECK_FALSE(cf.terminated);
  // Denominators strictly increase.
  for (std::size_t k = 1; k < cf.q.size(); ++k) CHECK(cf.q[k] > cf.q[k - 1]);
}

TEST_CASE("exactly rational angle terminates and refuses phantom terms") {
  auto r = IrrationalSpec::rational(1, 3, 0.0);
  auto cf = continued_fraction(r, 1);
  CHECK(cf.a == std::vector<mpz_class>({3}));
  CHECK(cf.terminated);
  try {
    continued_fraction(r, 5);
    FAIL("terminated expansion has no 2nd term");
  } catch (const InsufficientPrecision& e) {
    CHECK(e.fail_index == 2);
  }
}

TEST_CASE("decimal certificate expands as far as its error bound allows") {
  auto approx = IrrationalSpec::parse("0.61803398875");
  auto cf = continued_fraction(approx, 10);
  for (const auto& t : cf.a) CHECK(t == 1);
}

TEST_CASE("depth must be positive") {
  CHECK_THROWS_AS(continued_fraction(IrrationalSpec::golden(), 0), UsageError);
}

TEST_CASE("type_check: golden angle against constant rate 3") {
  auto cert = type_check(IrrationalSpec::golden(), PsiSpec::constant(3.0), 10000);
  CHECK(cert.consistent);
  CHECK(cert.violations.empty());
  CHECK(cert.consistent_from == 1);
  CHECK(cert.argmin_q == 1);
  CHECK(cert.min_product == doctest::Approx(0.38196601125010515).epsilon(1e-12));
}

TEST_CASE("type_check: q = 1 always violates a power rate") {
  auto cert = type_check(IrrationalSpec::golden(), PsiSpec::power(2), 10000);
  CHECK_FALSE(cert.consistent);
  CHECK(cert.witness_q == 1);
  CHECK(cert.violations == std::vector<long>({1}));
  CHECK(cert.consistent_from == 2);
}

TEST_CASE("type_check: golden angle is consistent with the stretched rate") {
  auto cert = type_check(IrrationalSpec::golden(), PsiSpec::stretched_exp(1.0), 1000);
  CHECK(cert.consistent);
}

TEST_CASE("type_check: series angle violates the stretched rate at 1, 9, 100") {
  auto a6 = IrrationalSpec::liouville(10, 1.0, 6);
  auto cert = type_check(a6, PsiSpec::stretched_exp(1.0), 10000);
  CHECK_FALSE(cert.consistent);
  CHECK(cert.witness_q == 1);
  CHECK(cert.violations == std::vector<long>({1, 9, 100}));
  CHECK(cert.consistent_from == 101);
  CHECK(cert.argmin_q == 100);
  CHECK(cert.min_product == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("type_check: series angle against power rates") {
  auto a6 = IrrationalSpec::liouville(10, 1.0, 6);
  auto c2 = type_check(a6, PsiSpec::power(2), 10000);
  CHECK(c2.violations == std::vector<long>({1}));
  auto c3 = type_check(a6, PsiSpec::power(3), 10000);
  CHECK(c3.violations == std::vector<long>({1}));
}

TEST_CASE("type_check: exactly rational angle fails at its denominator") {
  auto r = IrrationalSpec::rational(1, 3, 0.0);
  auto cert = type_check(r, PsiSpec::constant(3.0), 10);
  CHECK_FALSE(cert.consistent);
  CHECK(cert.witness_q == 3);
  CHECK(cert.violations == std::vector<long>({3, 6, 9}));
  CHECK(cert.min_product == 0.0);
  CHECK(cert.argmin_q == 3);
}

TEST_CASE("convergent denominators minimize q<q alpha>") {
  auto prods = convergent_products(IrrationalSpec::golden(), 100);
  REQUIRE(prods.size() == 10);
  CHECK(prods[0].first == 1);
  CHECK(prods[9].first == 89);
  CHECK(prods[0].second == doctest::Approx(0.38196601125010515).epsilon(1e-12));
  CHECK(prods[1].second == doctest::Approx(0.47213595499957939).epsilon(1e-12));
  CHECK(prods[9].second == doctest::Approx(0.44722488791709264).epsilon(1e-12));
  // Every convergent product beats the scan minimum bound from below:
  // q_k <q_k alpha> stays within (0.38, 0.473) for the golden angle.
  for (const auto& [q, prod] : prods) {
    CHECK(prod > 0.38);
    CHECK(prod < 0.473);
  }

  // Cross-check against the exhaustive scan: the smallest product the scan
  // saw is attained at a convergent denominator.
  auto cert = type_check(IrrationalSpec::golden(), PsiSpec::constant(3.0), 100);
  bool found = false;
  for (const auto& [q, prod] : prods) found = found || q == cert.argmin_q;
  CHECK(found);
}

TEST_CASE("generator: base 10 series settles from n0 = 4") {
  auto rep = liouville_generate(10, 1.0, 6);
  CHECK(rep.u == std::vector<unsigned long>({1, 2, 6, 24, 120, 720}));
  CHECK(rep.cond_growth == std::vector<bool>({true, true, true, true, true}));
  CHECK(rep.cond_type == std::vector<bool>({false, false, false, true, true}));
  CHECK(rep.n0 == 4);
  CHECK_FALSE(rep.overflow);
  CHECK(rep.effective_n_max == 6);
  REQUIRE(rep.alpha.has_value());
  CHECK(rep.alpha->kind() == AngleKind::LiouvilleSeries);
}

TEST_CASE("generator: base 2 has an exact boundary constant and never settles") {
  auto rep = liouville_generate(2, 1.0, 3);
  // ln(b/(b-1))/ln b = 1 exactly at b = 2, so n u_n + 1 < u_{n+1} needs
  // a gap of at least 2.
  CHECK(rep.cond_growth == std::vector<bool>({false, true}));
  CHECK(rep.cond_type == std::vector<bool>({false, false}));
  CHECK(rep.n0 == -1);
}

TEST_CASE("generator: exponent budget truncates the report") {
  auto rep = liouville_generate(10, 1.0, 12, 100000);
  CHECK(rep.overflow);
  CHECK(rep.effective_n_max == 8);
  CHECK(rep.u.back() == 40320);
  CHECK(rep.cond_growth.size() == 7);
}

TEST_CASE("psi validation") {
  CHECK_THROWS_AS(PsiSpec::constant(0.5), UsageError);
  CHECK_THROWS_AS(PsiSpec::power(0), UsageError);
  CHECK_THROWS_AS(PsiSpec::stretched_exp(0.0), UsageError);
  CHECK(PsiSpec::power(2).describe() == "psi(q) = q^2");
}

TEST_CASE("enclosure: requesting more precision than stored is an error") {
  auto a4 = IrrationalSpec::liouville(10, 1.0, 4);
  CHECK_THROWS_AS(a4.enclosure(100000), InsufficientPrecision);
}
