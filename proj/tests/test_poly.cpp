#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "twlp/poly.hpp"

using namespace twlp;

namespace {

Polynomial mono(std::map<int, int> exps, const Rational& c) {
  Polynomial p;
  p.add_term(Monomial(std::move(exps)), c);
  return p;
}

Polynomial random_poly(std::mt19937& rng, int nvars, int nterms) {
  std::uniform_int_distribution<int> var(0, nvars - 1), exp(0, 3), num(-6, 6), den(1, 5);
  Polynomial p;
  for (int t = 0; t < nterms; ++t) {
    std::map<int, int> exps;
    for (int j = 0; j < nvars; ++j) {
      int e = exp(rng);
      if (e > 0 && var(rng) < nvars / 2 + 1) exps[j] = e;
    }
    p.add_term(Monomial(std::move(exps)), make_rational(num(rng), den(rng)));
  }
  return p;
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK(parse_rational("2.0") == Rational(2));
  CHECK_THROWS(parse_rational(""));
  CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("monomial basics") {
  Monomial m({{0, 2}, {1, 0}, {2, 1}});
  CHECK(m.exponents().size() == 2);  // zero exponent dropped
  CHECK(m.degree() == 3);
  CHECK(m.degree_from(2) == 1);
  Monomial sq = m * m;
  CHECK(sq.degree() == 6);
  CHECK_THROWS_AS(Monomial(std::map<int, int>{{0, -1}}), StructuralError);
}

TEST_CASE("evaluate") {
  // x0*x1 - 1/2 at (1,1) = 1/2
  Polynomial p = mono({{0, 1}, {1, 1}}, 1) + Polynomial::constant(Rational(-1, 2));
  CHECK(p.evaluate(std::vector<Rational>{Rational(1), Rational(1)}) == Rational(1, 2));

  // empty polynomial is 0 everywhere
  CHECK(Polynomial().evaluate(std::vector<Rational>{Rational(7)}) == 0);

  // 3x0^2 - 2x1 at (1/2, 1/4) = 3/4 - 1/2 = 1/4
  Polynomial q = mono({{0, 2}}, 3) + Polynomial::term(-2, 1);
  CHECK(q.evaluate(std::vector<Rational>{Rational(1, 2), Rational(1, 4)}) == Rational(1, 4));

  // missing variable entry
  CHECK_THROWS_AS(q.evaluate(std::vector<Rational>{Rational(1)}), StructuralError);
}

TEST_CASE("one_norm") {
  Polynomial p = mono({{0, 1}, {1, 1}}, 1) + Polynomial::constant(Rational(-1, 2));
  CHECK(p.one_norm() == Rational(3, 2));
  CHECK(Polynomial().one_norm() == 0);
  // S*y0 - a0*x0 with S=9, a0=3 -> 12
  Polynomial row = Polynomial::term(9, 0) + Polynomial::term(-3, 1);
  CHECK(row.one_norm() == 12);
}

TEST_CASE("one_norm absolute homogeneity and evaluate linearity") {
  std::mt19937 rng(7);
  for (int it = 0; it < 50; ++it) {
    Polynomial f = random_poly(rng, 4, 5), g = random_poly(rng, 4, 5);
    Rational k = make_rational(it - 25, 7);
    CHECK((f * k).one_norm() == rational_abs(k) * f.one_norm());
    std::vector<Rational> x;
    for (int j = 0; j < 4; ++j) x.push_back(make_rational(j + it, 9));
    CHECK((f + g).evaluate(x) == f.evaluate(x) + g.evaluate(x));
  }
}

TEST_CASE("POProblem pi and validation") {
  // vars 0 binary, 1..2 continuous; constraint with x0^3 * x1 * x2^2 has pi contribution 3
  Polynomial p = mono({{0, 3}, {1, 1}, {2, 2}}, 1);
  POProblem prob(3, 1, {Rational(1), Rational(0), Rational(0)}, {{p, Sense::Ge}});
  CHECK(prob.pi() == 3);
  CHECK(prob.is_binary(0));
  CHECK(!prob.is_binary(1));

  // pure binary problem: pi = 0
  POProblem bin(2, 2, {Rational(1), Rational(1)}, {{mono({{0, 2}, {1, 5}}, 1), Sense::Ge}});
  CHECK(bin.pi() == 0);

  CHECK_THROWS_AS(POProblem(1, 0, {Rational(1)}, {{mono({{3, 1}}, 1), Sense::Ge}}),
                  StructuralError);
  CHECK_THROWS_AS(POProblem(2, 3, {Rational(1), Rational(1)}, {}), StructuralError);
}

TEST_CASE("scaled_violation") {
  // f = x0 - 1 >= 0 at x0 = 1/2: violation (1/2)/2 = 1/4
  Polynomial f = Polynomial::term(1, 0) + Polynomial::constant(-1);
  POProblem prob(1, 0, {Rational(1)}, {{f, Sense::Ge}});
  CHECK(prob.scaled_violation({Rational(1, 2)}) == Rational(1, 4));
  CHECK(prob.scaled_violation({Rational(1)}) == 0);

  // equality rows contribute |f|/||f||
  POProblem eq(1, 0, {Rational(1)}, {{f, Sense::Eq}});
  CHECK(eq.scaled_violation({Rational(3, 2)}) == Rational(1, 4));

  // satisfied system -> 0 exactly
  Polynomial g = Polynomial::term(2, 0);
  POProblem ok(1, 0, {Rational(1)}, {{g, Sense::Ge}});
  CHECK(ok.scaled_violation({Rational(1, 3)}) == 0);
}

TEST_CASE("subset-sum style system: exact indicator is exactly feasible") {
  // a = (3,5,8,2), S = 10, subset {3,5,2}: rows S - sum a_j x_j = 0 written
  // as one equality; indicator x = (1,1,0,1).
  std::vector<int> a{3, 5, 8, 2};
  Polynomial row = Polynomial::constant(-10);
  for (int j = 0; j < 4; ++j) row = row + Polynomial::term(a[j], j);
  POProblem prob(4, 4, {Rational(0), Rational(0), Rational(0), Rational(0)}, {{row, Sense::Eq}});
  CHECK(prob.scaled_violation({Rational(1), Rational(1), Rational(0), Rational(1)}) == 0);
  CHECK(prob.scaled_violation({Rational(1), Rational(1), Rational(1), Rational(1)}) > 0);
}

TEST_CASE("scaled_violation zero iff exactly feasible (random systems)") {
  std::mt19937 rng(11);
  for (int it = 0; it < 30; ++it) {
    Polynomial f = random_poly(rng, 3, 4);
    POProblem prob(3, 0, {Rational(1), Rational(1), Rational(1)}, {{f, Sense::Ge}});
    std::vector<Rational> x{Rational(it, 31), Rational(1, 2), Rational(2, 3)};
    Rational val = f.evaluate(x);
    bool feas = val >= 0;
    CHECK((prob.scaled_violation(x) == 0) == feas);
  }
}
