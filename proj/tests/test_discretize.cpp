#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "twlp/bruteforce.hpp"
#include "twlp/discretize.hpp"

using namespace twlp;

namespace {

Polynomial mono(std::map<int, int> exps, const Rational& c) {
  Polynomial p;
  p.add_term(Monomial(std::move(exps)), c);
  return p;
}

// p binary vars then continuous vars; supports of size <= 3, continuous
// degrees <= deg_cap.
POProblem random_po(std::mt19937& rng, int p, int ncont, int ncons, int deg_cap) {
  int n = p + ncont;
  std::uniform_int_distribution<int> var(0, n - 1), deg(1, deg_cap), coef(-4, 4), nt(1, 3);
  std::vector<Constraint> cons;
  for (int i = 0; i < ncons; ++i) {
    Polynomial f;
    int terms = nt(rng);
    for (int t = 0; t < terms; ++t) {
      std::map<int, int> exps;
      int nv = nt(rng);
      for (int k = 0; k < nv; ++k) {
        int j = var(rng);
        exps[j] = j < p ? 1 : deg(rng);
      }
      int c = coef(rng);
      if (c != 0) f.add_term(Monomial(std::move(exps)), c);
    }
    f.add_term(Monomial(), make_rational(coef(rng), 2));
    if (f.is_zero()) continue;
    cons.push_back({f, Sense::Ge});
  }
  std::vector<Rational> c;
  for (int j = 0; j < n; ++j) c.push_back(make_rational(coef(rng), 2));
  return POProblem(n, p, c, cons);
}

}  // namespace

TEST_CASE("plan formulas") {
  // eps = 1/2, pi = 1: gamma = 1/2, L = 1, delta = 1/2
  Polynomial f = Polynomial::term(1, 0) + Polynomial::constant(make_rational(-1, 2));
  POProblem po1(1, 0, {Rational(1)}, {{f, Sense::Ge}});
  auto pl1 = plan(po1, Rational(1, 2));
  CHECK(pl1.gamma == Rational(1, 2));
  CHECK(pl1.L == 1);
  CHECK(pl1.delta == Rational(1, 2));

  // eps = 1/4, pi = 2: gamma = 1/8, L = 3, delta = 1 - (7/8)^2 = 15/64
  Polynomial g = mono({{0, 1}, {1, 1}}, 1);
  POProblem po2(2, 0, {Rational(1), Rational(1)}, {{g, Sense::Ge}});
  CHECK(po2.pi() == 2);
  auto pl2 = plan(po2, Rational(1, 4));
  CHECK(pl2.gamma == Rational(1, 8));
  CHECK(pl2.L == 3);
  CHECK(pl2.delta == Rational(15, 64));
  CHECK(pl2.gb_num_vars == 6);

  // pure binary: empty plan
  POProblem po3(2, 2, {Rational(-1), Rational(1)}, {{g, Sense::Ge}});
  auto pl3 = plan(po3, Rational(1, 4));
  CHECK(pl3.empty());
  CHECK(pl3.L == 0);
  CHECK(pl3.delta == 0);
  CHECK(pl3.gb_num_vars == 2);

  CHECK_THROWS_AS(plan(po1, Rational(0)), StructuralError);
  CHECK_THROWS_AS(plan(po1, Rational(1)), StructuralError);
}

TEST_CASE("delta <= pi * gamma") {
  std::mt19937 rng(5);
  for (int it = 0; it < 40; ++it) {
    POProblem po = random_po(rng, 1, 2, 2, 3);
    if (po.pi() == 0) continue;
    Rational eps = make_rational(1 + it % 7, 8);
    auto pl = plan(po, eps);
    CHECK(pl.delta <= pl.pi * pl.gamma);
    CHECK(pl.delta <= eps);
  }
}

TEST_CASE("expand") {
  auto z0 = expand(Rational(0), 4);
  CHECK(z0 == std::vector<bool>{false, false, false, false});

  auto z1 = expand(Rational(1), 3);
  CHECK(z1 == std::vector<bool>{true, true, true});
  CHECK(bits_value(z1) == Rational(7, 8));

  auto z2 = expand(Rational(3, 10), 3);
  CHECK(z2 == std::vector<bool>{false, true, false});
  CHECK(Rational(3, 10) - bits_value(z2) == Rational(1, 20));

  CHECK_THROWS_AS(expand(Rational(2), 3), StructuralError);
}

TEST_CASE("expand/recover round trip stays within 2^-L") {
  std::mt19937 rng(9);
  for (int it = 0; it < 60; ++it) {
    Rational r = make_rational(it, 61);
    int L = 1 + it % 6;
    Rational v = bits_value(expand(r, L));
    CHECK(v <= r);
    Rational place(1);
    for (int h = 0; h < L; ++h) place /= 2;
    CHECK(r - v < place);
  }
}

TEST_CASE("to_gb: pure binary is an identity embedding") {
  Polynomial g = mono({{0, 1}, {1, 1}}, 1) + Polynomial::constant(make_rational(-1, 2));
  POProblem po(2, 2, {Rational(-1), Rational(2)}, {{g, Sense::Ge}});
  auto pl = plan(po, Rational(1, 4));
  auto gb = to_gb(po, pl);
  CHECK(gb.num_vars() == 2);
  CHECK(gb.objective() == po.objective());
  // delta = 0: oracle equals original feasibility
  CHECK(gb.feasible({true, true}));
  CHECK(!gb.feasible({false, true}));
  CHECK(gb.objective_value({true, false}) == Rational(-1));
}

TEST_CASE("to_gb: continuous x >= 1/2 with eps = 1/2 accepts both bit values") {
  Polynomial f = Polynomial::term(1, 0) + Polynomial::constant(make_rational(-1, 2));
  POProblem po(1, 0, {Rational(1)}, {{f, Sense::Ge}});
  auto pl = plan(po, Rational(1, 2));
  auto gb = to_gb(po, pl);
  CHECK(gb.num_vars() == 1);  // one bit
  CHECK(gb.feasible({true}));   // 1/2 - 1/2 = 0 >= -3/4
  CHECK(gb.feasible({false}));  // -1/2 >= -3/4
  CHECK(gb.objective()[0] == Rational(1, 2));
}

TEST_CASE("to_gb: dropped continuous variables go to the objective offset") {
  // var 0 binary in one constraint; var 1 continuous, unconstrained, c = -3
  Polynomial g = Polynomial::term(1, 0);
  POProblem po(2, 1, {Rational(2), Rational(-3)}, {{g, Sense::Ge}});
  CHECK(po.pi() == 0);
  auto pl = plan(po, Rational(1, 4));
  auto gb = to_gb(po, pl);
  CHECK(gb.num_vars() == 1);
  CHECK(gb.objective_offset() == Rational(-3));
  auto x = recover({false}, pl);
  CHECK(x[1] == 1);  // negative cost pushes to the upper bound
  CHECK(po.objective_value(x) == gb.objective_value({false}));
}

TEST_CASE("lift_decomposition bag sizes and width bound") {
  // vars: 0 binary, 1-2 continuous; constraints giving edges {0,1},{1,2}
  Polynomial a = mono({{0, 1}, {1, 1}}, 1) + Polynomial::constant(-1);
  Polynomial b = mono({{1, 1}, {2, 2}}, 1) + Polynomial::constant(-1);
  POProblem po(3, 1, {Rational(1), Rational(1), Rational(1)}, {{a, Sense::Ge}, {b, Sense::Ge}});
  auto pl = plan(po, Rational(1, 4));
  Graph g = intersection_graph(po);
  auto td = normalize(heuristic_decomposition(g));
  int omega = td.width();
  auto lifted = lift_decomposition(td, pl);
  auto gb = to_gb(po, pl);
  Graph gg = intersection_graph(gb);
  CHECK(!validate(lifted, gg).has_value());
  CHECK(lifted.width() <= (omega + 1) * pl.L - 1);
}

TEST_CASE("recover place values") {
  Polynomial f = Polynomial::term(1, 0) + Polynomial::constant(make_rational(-1, 2));
  POProblem po(1, 0, {Rational(1)}, {{mono({{0, 3}}, 1) - Polynomial::constant(0), Sense::Ge}});
  (void)f;
  auto pl = plan(po, Rational(1, 4));  // pi = 3
  REQUIRE(pl.L >= 3);
  std::vector<bool> bits(pl.gb_num_vars, false);
  bits[pl.var_map.at(0)[0]] = true;
  bits[pl.var_map.at(0)[2]] = true;
  auto x = recover(bits, pl);
  CHECK(x[0] == Rational(5, 8));
  auto zero = recover(std::vector<bool>(pl.gb_num_vars, false), pl);
  CHECK(zero[0] == 0);
}

TEST_CASE("product inequality behind the error budget") {
  // prod (u+v)^q - prod u^q <= 1 - prod (1-v)^q for 0 <= u, v, u+v <= 1
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> num(0, 8), q(0, 3);
  for (int it = 0; it < 80; ++it) {
    int k = 1 + it % 3;
    Rational lhs1(1), lhs2(1), rhs(1);
    for (int i = 0; i < k; ++i) {
      Rational u = make_rational(num(rng), 16);
      Rational v = make_rational(num(rng), 16);
      if (u + v > 1) v = Rational(1) - u;
      unsigned e = static_cast<unsigned>(q(rng));
      lhs1 *= rational_pow(u + v, e);
      lhs2 *= rational_pow(u, e);
      rhs *= rational_pow(Rational(1) - v, e);
    }
    CHECK(lhs1 - lhs2 <= Rational(1) - rhs);
  }
}

TEST_CASE("exactly feasible points survive discretization") {
  // For random PO with a known feasible point x~, the expanded bits pass all
  // GB(gamma) oracles and the GB objective is within delta*||c||_1 of c.x~.
  std::mt19937 rng(21);
  int tested = 0;
  for (int it = 0; it < 200 && tested < 25; ++it) {
    POProblem po = random_po(rng, 1, 2, 2, 2);
    if (po.pi() == 0) continue;
    // sample candidate points until one is exactly feasible
    std::uniform_int_distribution<int> num(0, 4), bit(0, 1);
    std::vector<Rational> x(po.num_vars());
    bool found = false;
    for (int tries = 0; tries < 40 && !found; ++tries) {
      for (int j = 0; j < po.num_vars(); ++j)
        x[j] = j < po.num_binary() ? Rational(bit(rng)) : make_rational(num(rng), 4);
      found = po.scaled_violation(x) == 0;
    }
    if (!found) continue;
    ++tested;
    auto pl = plan(po, Rational(1, 4));
    auto gb = to_gb(po, pl);
    auto bits = expand_point(x, pl);
    CHECK(gb.feasible(bits));
    CHECK(gb.objective_value(bits) <= po.objective_value(x) + pl.delta * po.objective_one_norm());
  }
  CHECK(tested >= 10);
}
