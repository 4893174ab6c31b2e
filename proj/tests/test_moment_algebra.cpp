#include <random>

#include "doctest.h"
#include "eq_tables.hpp"
#include "momentous/consistency.hpp"
#include "momentous/dynamics.hpp"
#include "momentous/error.hpp"
#include "momentous/moment_algebra.hpp"
#include "oracles.hpp"

using namespace momentous;

namespace {

// Straight transcription of the K sum with doubles, for comparison with the integer version.
double k_direct(int n, int a, int b, int c, int d) {
  auto fact = [](int x) { return std::tgamma(x + 1.0); };
  auto binom = [](int top, int k) { return (k < 0 || k > top) ? 0.0 : oracle::binomial(top, k); };
  double s = 0.0;
  for (int j = 0; j <= n; ++j) {
    s += (j % 2 ? -1.0 : 1.0) * fact(j) * fact(n - j) * binom(a, j) * binom(b, n - j) * binom(c, n - j) * binom(d, j);
  }
  return s;
}

const EquationCheck& find(const ConsistencyReport& r, const std::string& section, const Variable& v) {
  for (const auto& s : r.sections) {
    if (s.id != section) continue;
    for (const auto& e : s.equations) {
      if (e.variable == v) return e;
    }
  }
  throw std::runtime_error("missing equation " + section + " " + v.name());
}

}  // namespace

TEST_CASE("K coefficients") {
  CHECK(k_coefficient(1, 2, 0, 0, 2) == -4);
  CHECK(k_coefficient(1, 1, 1, 1, 1) == 0);
  CHECK_THROWS_AS(k_coefficient(2, 3, 3, 3, 3), RangeViolation);
  CHECK_THROWS_AS(k_coefficient(1, 1, 0, 0, 1), RangeViolation);
  CHECK_THROWS_AS(k_coefficient(3, 2, 0, 0, 2), RangeViolation);

  std::mt19937 rng(5);
  std::uniform_int_distribution<int> idx(0, 7);
  int checked = 0;
  while (checked < 50) {
    const int a = idx(rng), b = idx(rng), c = idx(rng), d = idx(rng);
    if (std::min({a + c, b + d, a + b, c + d}) <= 1) continue;
    CHECK(k_coefficient(1, a, b, c, d) == b * c - a * d);
    CHECK(static_cast<double>(k_sum(1, a, b, c, d)) == k_direct(1, a, b, c, d));
    ++checked;
  }
  for (int n : {3, 5}) {
    for (int a = 0; a < 5; ++a) {
      for (int d = 0; d < 5; ++d) CHECK(static_cast<double>(k_sum(n, a, 3, 4, d)) == k_direct(n, a, 3, 4, d));
    }
  }
}

TEST_CASE("bracket examples") {
  CHECK(bracket_formula({2, 0}, {0, 2}) == MomentPolynomial(term(-4).g(1, 1)));
  CHECK(bracket_formula({2, 0}, {2, 0}).is_zero());
  CHECK(bracket_formula({1, 1}, {0, 2}).is_zero());
  // {G30, G02}: the product term carries G01, K^1 = -6.
  CHECK(bracket_formula({3, 0}, {0, 2}) == MomentPolynomial(term(-6).g(2, 1)));
  // {G30, G03} = 9 G20 G02 - 9 G22; n = 3 is outside the summation range.
  CHECK(bracket_formula({3, 0}, {0, 3}) == sum_of({term(9).g(2, 0).g(0, 2), term(-9).g(2, 2)}));
}

TEST_CASE("bracket is antisymmetric and graded") {
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; a + b <= 4; ++b) {
      for (int c = 0; c <= 4; ++c) {
        for (int d = 0; c + d <= 4; ++d) {
          if (a + b < 2 || c + d < 2) continue;
          const auto lhs = bracket_formula({a, b}, {c, d});
          CHECK(lhs == -bracket_formula({c, d}, {a, b}));
          for (const auto& [mono, coeff] : lhs.terms()) {
            CHECK(mono.moment_order() + 2 * mono.hbar_power <= a + b + c + d - 2);
          }
        }
      }
    }
  }
}

TEST_CASE("canonical form drops first moments") {
  bool vanishes = false;
  canonical(Monomial{0, 0, {}, 0, {{1, 0}, {2, 0}}}, &vanishes);
  CHECK(vanishes);
  MomentPolynomial p = term(3).g(0, 1).g(2, 2);
  CHECK(p.is_zero());
  const MomentPolynomial q = sum_of({term(2).g(2, 0).g(1, 1), term(-2).g(1, 1).g(2, 0)});
  CHECK(q.is_zero());
}

TEST_CASE("poisson bracket with canonical variables") {
  CHECK(poisson_bracket(Variable::position(), term(Rational(1, 2)).per_mass().p(2)) == MomentPolynomial(term().per_mass().p()));
  CHECK(poisson_bracket(Variable::momentum(), term().v(0)) == MomentPolynomial(term(-1).v(1)));
  CHECK(poisson_bracket(Variable::momentum(), term().v(2).g(2, 0)) == MomentPolynomial(term(-1).v(3).g(2, 0)));
  CHECK(poisson_bracket(Variable::g(2, 0), term(Rational(1, 2)).per_mass().g(0, 2)) ==
        MomentPolynomial(term(-2).per_mass().g(1, 1)));
}

TEST_CASE("derived equations") {
  const EomTable d2 = derive_eoms(2);
  REQUIRE(d2.size() == 5);
  CHECK(d2[0].rhs == MomentPolynomial(term().p().per_mass()));
  CHECK(d2[1].rhs == transcribed::second_order()[1].rhs);
  CHECK(d2[2].rhs == MomentPolynomial(term(-2).per_mass().g(1, 1)));
  CHECK(d2[3].rhs.is_zero());  // the literal bracket kills {G11, G02} and {G11, G20}
  CHECK(d2[4].rhs == MomentPolynomial(term(2).v(2).g(1, 1)));

  const EomTable d3 = derive_eoms(3);
  REQUIRE(d3.size() == 9);
  CHECK(d3[5].rhs == MomentPolynomial(term(-3).per_mass().g(2, 1)));
  CHECK(d3[8].rhs == MomentPolynomial(term(3).v(2).g(1, 2)));
  CHECK(to_string(d2).find("G^{2,0}") != std::string::npos);
}

TEST_CASE("authoritative tables equal the transcription") {
  CHECK(eom_table(3) == transcribed::third_order());
  CHECK(eom_table(2) == transcribed::second_order());
  EomTable reduced;
  for (const auto& eq : transcribed::third_order()) {
    if (eq.lhs.kind == Variable::Kind::Moment && eq.lhs.moment.order() == 3) continue;
    reduced.push_back({eq.lhs, eq.rhs.without_moments_above(2)});
  }
  CHECK(eom_table(2) == reduced);
}

TEST_CASE("consistency report") {
  const ConsistencyReport r = verify_eom_consistency();
  CHECK(r.clean());
  CHECK(r.count(CheckStatus::Known) == 6);
  CHECK(r.count(CheckStatus::Unexpected) == 0);
  CHECK(find(r, "order2-bracket", Variable::g(2, 0)).status == CheckStatus::Match);
  CHECK(find(r, "order2-bracket", Variable::g(1, 1)).status == CheckStatus::Known);
  CHECK(find(r, "order3-bracket", Variable::g(3, 0)).status == CheckStatus::Match);
  CHECK(find(r, "order2-printed", Variable::momentum()).status == CheckStatus::Known);
  for (const auto& p : r.properties) CHECK_MESSAGE(p.passed, p.name);
  CHECK(r.to_text().find("KNOWN") != std::string::npos);

  SUBCASE("a tampered table is reported") {
    EomTable t2 = eom_table(2);
    t2[2].rhs = term(-3).per_mass().g(1, 1);
    const ConsistencyReport bad = verify_eom_consistency(t2, eom_table(3));
    CHECK_FALSE(bad.clean());
    CHECK(find(bad, "order2-bracket", Variable::g(2, 0)).status == CheckStatus::Unexpected);
  }
  SUBCASE("fixing a documented discrepancy is also unexpected") {
    EomTable t3 = eom_table(3);
    t3[6].rhs = term(-2).per_mass().g(1, 2);
    CHECK_FALSE(verify_eom_consistency(eom_table(2), t3).clean());
  }
}
