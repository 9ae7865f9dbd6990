#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "twlp/npo.hpp"

using namespace twlp;

namespace {

Polynomial mono(std::map<int, int> exps, const Rational& c) {
  Polynomial p;
  p.add_term(Monomial(std::move(exps)), c);
  return p;
}

/// One binary variable per vertex; constraint terms w -> a x_v x_w + b x_w.
NPOProblem one_var_per_vertex(Graph g) {
  NPOProblem pr;
  int nv = g.num_vertices();
  pr.graph = std::move(g);
  pr.vertex_vars.resize(nv);
  for (int v = 0; v < nv; ++v) pr.vertex_vars[v] = {v};
  pr.num_vars = nv;
  pr.num_binary = nv;
  pr.objective.assign(nv, Rational(0));
  return pr;
}

/// Degree-5 star with edge polynomials w_i * x_0 * x_i, i = 1..5.
NPOProblem star5() {
  Graph g(6);
  for (int v = 1; v <= 5; ++v) g.add_edge(0, v);
  NPOProblem pr = one_var_per_vertex(std::move(g));
  NPOConstraint con;
  con.at = 0;
  for (int v = 1; v <= 5; ++v) con.terms[v] = mono({{0, 1}, {v, 1}}, Rational(v));
  pr.constraints.push_back(con);
  return pr;
}

Polynomial family_sum(const SplitResult& s, int orig) {
  Polynomial f;
  for (int i : s.provenance[orig]) f = f + s.problem.constraints[i].sum();
  return f;
}

/// The root y+ variable of the family replacing original constraint `orig`,
/// or -1 when the constraint was not split.
int root_y(const SplitResult& s, int orig) {
  for (const YVar& yv : s.y_vars)
    if (yv.k == orig && yv.plus && yv.tree_vertex == yv.u) return yv.index;
  return -1;
}

/// Checks that the replacement family of every constraint sums back to the
/// original polynomial minus nu_root * y+_root.
void check_telescoping(const NPOProblem& original, const SplitResult& s) {
  for (int k = 0; k < static_cast<int>(original.constraints.size()); ++k) {
    Polynomial expected = original.constraints[k].sum();
    int yr = root_y(s, k);
    if (yr >= 0) expected = expected - Polynomial::term(original.constraints[k].one_norm(), yr);
    CHECK(family_sum(s, k) == expected);
  }
}

/// Random connected graph with a few chords and edge-wise constraints.
NPOProblem random_npo(std::mt19937& rng, int nv, int chords, int ncons) {
  Graph g(nv);
  std::uniform_int_distribution<int> any(0, nv - 1), coef(-2, 2);
  for (int v = 1; v < nv; ++v) g.add_edge(v, std::uniform_int_distribution<int>(0, v - 1)(rng));
  for (int e = 0; e < chords; ++e) {
    int a = any(rng), b = any(rng);
    if (a != b && !g.has_edge(a, b)) g.add_edge(a, b);
  }
  NPOProblem pr = one_var_per_vertex(std::move(g));
  for (int j = 0; j < nv; ++j) pr.objective[j] = Rational(coef(rng));
  for (int i = 0; i < ncons; ++i) {
    int at = any(rng);
    if (pr.graph.degree(at) == 0) continue;
    NPOConstraint con;
    con.at = at;
    bool first = true;
    for (int w : pr.graph.neighbors(at)) {
      Polynomial p = mono({{at, 1}, {w, 1}}, Rational(coef(rng))) + mono({{w, 1}}, Rational(coef(rng)));
      if (first) {
        p = p + Polynomial::constant(Rational(coef(rng)));
        first = false;
      }
      if (!p.is_zero()) con.terms[w] = p;
    }
    if (!con.terms.empty()) pr.constraints.push_back(con);
  }
  return pr;
}

/// Extends an exactly feasible assignment of the original variables to a
/// point over the split problem's variables: each y value is the scaled
/// partial sum of the edge polynomials below its tree vertex.
std::vector<Rational> extend_point(const NPOProblem& original, const SplitResult& s,
                                   const std::vector<Rational>& x) {
  std::vector<Rational> full(s.problem.num_vars, Rational(0));
  for (int j = 0; j < original.num_vars; ++j) full[j] = x[j];
  for (const YVar& yv : s.y_vars) {
    const SplitTree* tree = nullptr;
    for (const SplitTree& tr : s.trees)
      if (tr.u == yv.u) tree = &tr;
    REQUIRE(tree != nullptr);
    const NPOConstraint& orig = original.constraints[yv.k];
    Rational value(0), norm(0);
    std::function<void(int)> walk = [&](int sv) {
      if (tree->is_internal(sv)) {
        for (int c : tree->children.at(sv)) walk(c);
        return;
      }
      auto it = orig.terms.find(s.origin[sv]);
      if (it == orig.terms.end()) return;
      value += it->second.evaluate(x);
      norm += it->second.one_norm();
    };
    walk(yv.tree_vertex);
    REQUIRE(norm > 0);
    Rational d = value / norm;
    full[yv.index] = yv.plus ? (d > 0 ? d : Rational(0)) : (d < 0 ? -d : Rational(0));
  }
  return full;
}

}  // namespace

TEST_CASE("validation catches malformed network problems") {
  NPOProblem pr = star5();
  CHECK_NOTHROW(pr.validate());

  NPOProblem bad = pr;
  bad.constraints[0].terms[2] = Polynomial::variable(3);  // var 3 not at vertex 0 or 2
  CHECK_THROWS_AS(bad.validate(), StructuralError);

  bad = pr;
  bad.constraints[0].terms.clear();
  bad.constraints[0].terms[1] = mono({{0, 1}}, 1);
  bad.constraints[0].terms[2] = mono({{0, 1}}, 1);  // shared monomial across edges
  CHECK_THROWS_AS(bad.validate(), StructuralError);

  bad = pr;
  bad.vertex_vars[5] = {};
  CHECK_THROWS_AS(bad.validate(), StructuralError);  // var 5 held by nobody

  // disconnected holder set: var 1 at vertices 1 and 2 (not adjacent)
  bad = pr;
  bad.vertex_vars[2].insert(1);
  CHECK_THROWS_AS(bad.validate(), StructuralError);

  CHECK(pr.coupling_delta() == 2);  // |X_0| + 1 constraint
  CHECK(pr.max_degree() == 5);
}

TEST_CASE("splitting the degree-5 star") {
  NPOProblem pr = star5();
  SplitTree tree;
  tree.u = 0;
  tree.children[0] = {1, 6, 7};
  tree.children[6] = {2, 3};
  tree.children[7] = {4, 5};
  CHECK(tree.num_vertices() == 8);  // < 2 * 5

  SplitResult s = split_vertex(pr, tree);
  const NPOProblem& q = s.problem;

  // graph surgery
  CHECK(q.graph.num_vertices() == 8);
  CHECK(q.graph.max_degree() == 3);
  std::vector<std::pair<int, int>> want{{0, 1}, {0, 6}, {0, 7}, {2, 6}, {3, 6}, {4, 7}, {5, 7}};
  CHECK(q.graph.edges() == want);
  CHECK(s.origin[6] == 0);
  CHECK(s.origin[7] == 0);

  // y variables: root y+, two internal pairs, five leaf pairs
  CHECK(q.num_vars == 6 + 1 + 4 + 10);
  CHECK(q.num_binary == 6);
  int yr = root_y(s, 0);
  REQUIRE(yr >= 0);
  CHECK(q.vertex_vars[0].count(yr) == 1);

  // variable association: root gets X_u + {y+_r, y+-_leaf1}; each inner
  // vertex gets X_u + its own pair + two leaf pairs
  CHECK(q.vertex_vars[0].size() == 4);
  CHECK(q.vertex_vars[6].size() == 7);
  CHECK(q.vertex_vars[7].size() == 7);
  CHECK(q.vertex_vars[1] == std::set<int>{1});  // neighbors untouched

  // eight equations: five leaf, two internal, one root
  REQUIRE(s.provenance[0].size() == 8);
  CHECK(q.constraints_at(0).size() == 2);
  CHECK(q.constraints_at(6).size() == 3);
  CHECK(q.constraints_at(7).size() == 3);
  for (int i : s.provenance[0]) CHECK(q.constraints[i].sense == Sense::Eq);

  // nu recursion shows up in the internal equation at vertex 6: the term on
  // the parent edge carries coefficient nu_6 = 2 + 3 = 5
  bool found = false;
  for (int i : s.provenance[0]) {
    const NPOConstraint& con = q.constraints[i];
    if (con.at != 6 || !con.terms.count(0)) continue;
    found = true;
    CHECK(con.terms.at(0).one_norm() == Rational(10));  // 5 y+ and 5 y-
  }
  CHECK(found);

  check_telescoping(pr, s);
}

TEST_CASE("degree-4 split with unit norms counts leaves") {
  Graph g(5);
  for (int v = 1; v <= 4; ++v) g.add_edge(0, v);
  NPOProblem pr = one_var_per_vertex(std::move(g));
  NPOConstraint con;
  con.at = 0;
  for (int v = 1; v <= 4; ++v) con.terms[v] = mono({{0, 1}, {v, 1}}, 1);
  pr.constraints.push_back(con);

  SplitTree tree;
  tree.u = 0;
  tree.children[0] = {1, 2, 5};
  tree.children[5] = {3, 4};
  CHECK(tree.num_vertices() == 6);  // < 2 * 4

  SplitResult s = split_vertex(pr, tree);
  REQUIRE(s.provenance[0].size() == 6);  // 4 leaf + 1 internal + 1 root
  check_telescoping(pr, s);
  // nu_root = 4, nu_5 = 2: read off the root equation's y+_r coefficient
  int yr = root_y(s, 0);
  bool seen = false;
  for (int i : s.problem.constraints_at(0)) {
    Polynomial f = s.problem.constraints[i].sum();
    for (const auto& [m, c] : f.terms())
      if (m == Monomial(std::map<int, int>{{yr, 1}})) {
        CHECK(c == Rational(-4));
        seen = true;
      }
  }
  CHECK(seen);
}

TEST_CASE("splitting without constraints is pure surgery") {
  Graph g(5);
  for (int v = 1; v <= 4; ++v) g.add_edge(0, v);
  NPOProblem pr = one_var_per_vertex(std::move(g));
  SplitTree tree;
  tree.u = 0;
  tree.children[0] = {1, 2, 5};
  tree.children[5] = {3, 4};
  SplitResult s = split_vertex(pr, tree);
  CHECK(s.problem.num_vars == pr.num_vars);
  CHECK(s.problem.constraints.empty());
  CHECK(s.y_vars.empty());
  CHECK(s.problem.graph.max_degree() == 3);
}

TEST_CASE("split_vertex rejects malformed trees") {
  NPOProblem pr = star5();
  SplitTree tree;
  tree.u = 0;
  tree.children[0] = {1, 2, 6};
  tree.children[6] = {3, 4};  // leaf 5 missing
  CHECK_THROWS_AS(split_vertex(pr, tree), StructuralError);

  tree.children[6] = {3, 4, 5};  // non-root with three children
  CHECK_THROWS_AS(split_vertex(pr, tree), StructuralError);

  Graph path(4);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  path.add_edge(2, 3);
  NPOProblem low = one_var_per_vertex(std::move(path));
  SplitTree t2;
  t2.u = 1;
  CHECK_THROWS_AS(split_vertex(low, t2), StructuralError);  // degree <= 3
}

TEST_CASE("neighbor constraints are rekeyed to the adjacent copy") {
  NPOProblem pr = star5();
  NPOConstraint at2;
  at2.at = 2;
  at2.terms[0] = mono({{0, 1}, {2, 1}}, 1) + mono({{0, 1}}, 1);
  pr.constraints.push_back(at2);
  SplitTree tree;
  tree.u = 0;
  tree.children[0] = {1, 6, 7};
  tree.children[6] = {2, 3};
  tree.children[7] = {4, 5};
  SplitResult s = split_vertex(pr, tree);
  REQUIRE(s.provenance[1].size() == 1);
  const NPOConstraint& moved = s.problem.constraints[s.provenance[1][0]];
  CHECK(moved.at == 2);
  CHECK(moved.terms.count(6) == 1);  // vertex 2 now borders copy 6, not 0
  CHECK(moved.terms.count(0) == 0);
  CHECK(moved.sum() == at2.sum());
}

TEST_CASE("good_split is the identity on low-degree graphs") {
  Graph path(4);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  path.add_edge(2, 3);
  NPOProblem pr = one_var_per_vertex(std::move(path));
  auto td = normalize(heuristic_decomposition(pr.graph));
  SplitResult s = good_split(pr, td);
  CHECK(s.problem.num_vars == pr.num_vars);
  CHECK(s.trees.empty());
  CHECK(s.td->width() == td.width());
}

TEST_CASE("good_split on the column family keeps the width bound") {
  // odd columns: paths of k vertices; even columns: single hubs adjacent to
  // both neighboring columns (high-degree hubs, small tree-width)
  int k = 3;
  Graph g(3 * k + 2);  // columns: [0..k), hub k, [k+1..2k+1), hub 2k+1, ...
  auto col = [&](int c, int i) { return c == 1 ? k + 1 + i : (c == 0 ? i : 2 * k + 2 + i); };
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i + 1 < k; ++i) g.add_edge(col(c, i), col(c, i + 1));
  int hub1 = k, hub2 = 2 * k + 1;
  for (int i = 0; i < k; ++i) {
    g.add_edge(hub1, col(0, i));
    g.add_edge(hub1, col(1, i));
    g.add_edge(hub2, col(1, i));
    g.add_edge(hub2, col(2, i));
  }
  NPOProblem pr = one_var_per_vertex(std::move(g));
  for (int hub : {hub1, hub2}) {
    NPOConstraint con;
    con.at = hub;
    for (int w : pr.graph.neighbors(hub)) con.terms[w] = mono({{hub, 1}, {w, 1}}, 1);
    pr.constraints.push_back(con);
  }
  auto td = normalize(heuristic_decomposition(pr.graph));
  SplitResult s = good_split(pr, td);
  CHECK(s.problem.graph.max_degree() <= 3);
  CHECK(s.td->width() <= 2 * td.width() + 1);
  CHECK(!validate(*s.td, s.problem.graph).has_value());
  check_telescoping(pr, s);
}

TEST_CASE("good_split property suite") {
  std::mt19937 rng(17);
  int split_something = 0;
  for (int it = 0; it < 40; ++it) {
    NPOProblem pr = random_npo(rng, 5 + it % 5, 2 + it % 5, 3);
    auto td = normalize(heuristic_decomposition(pr.graph));
    SplitResult s = good_split(pr, td);
    CHECK(s.problem.graph.max_degree() <= 3);
    CHECK(s.td->width() <= 2 * td.width() + 1);
    CHECK(!validate(*s.td, s.problem.graph).has_value());
    CHECK_NOTHROW(s.problem.validate());
    check_telescoping(pr, s);
    for (const SplitTree& tr : s.trees) {
      ++split_something;
      CHECK(tr.num_vertices() < 2 * pr.graph.degree(tr.u));
      // untouched vertices keep their variables
      for (int v = 0; v < pr.graph.num_vertices(); ++v)
        if (v != tr.u && !tr.is_internal(v)) {
          std::set<int> before = pr.vertex_vars[v];
          for (int j : before) CHECK(s.problem.vertex_vars[v].count(j) == 1);
        }
    }
  }
  CHECK(split_something >= 10);
}

TEST_CASE("npo_to_po: structure, width bound, equality expansion") {
  std::mt19937 rng(29);
  for (int it = 0; it < 25; ++it) {
    NPOProblem pr = random_npo(rng, 5 + it % 5, 2 + it % 4, 3);
    auto td = normalize(heuristic_decomposition(pr.graph));
    SplitResult s = good_split(pr, td);
    NpoToPoResult flat = npo_to_po(s);
    CHECK(!validate(flat.td, intersection_graph(flat.po)).has_value());
    int delta = pr.coupling_delta();
    CHECK(flat.td.width() <= 7 * delta * (s.td->width() + 1) - 1);
    // every equality expands into a >= pair, every inequality into one row
    for (int i = 0; i < static_cast<int>(s.problem.constraints.size()); ++i) {
      const auto& con = s.problem.constraints[i];
      std::size_t want = con.sum().is_zero() ? 0 : (con.sense == Sense::Eq ? 2 : 1);
      CHECK(flat.po_of_npo[i].size() == want);
      if (want == 2) {
        const auto& a = flat.po.constraints()[flat.po_of_npo[i][0]];
        const auto& b = flat.po.constraints()[flat.po_of_npo[i][1]];
        CHECK(a.poly == -b.poly);
      }
    }
    CHECK(flat.po.num_binary() == pr.num_binary);
  }
}

TEST_CASE("feasible points extend exactly across a split") {
  std::mt19937 rng(41);
  int checked = 0;
  for (int it = 0; it < 30 && checked < 12; ++it) {
    NPOProblem pr = random_npo(rng, 6, 4, 3);
    if (pr.graph.max_degree() <= 3) continue;
    auto td = normalize(heuristic_decomposition(pr.graph));
    SplitResult s = good_split(pr, td);
    if (s.trees.empty()) continue;
    NpoToPoResult flat = npo_to_po(s);
    for (unsigned mask = 0; mask < (1u << pr.num_vars); ++mask) {
      std::vector<Rational> x(pr.num_vars);
      for (int j = 0; j < pr.num_vars; ++j) x[j] = (mask >> j) & 1u;
      bool feasible = true;
      for (const auto& con : pr.constraints)
        if (con.sum().evaluate(x) < 0) feasible = false;
      if (!feasible) continue;
      auto full = extend_point(pr, s, x);
      CHECK(flat.po.scaled_violation(full) == 0);
      Rational orig_obj(0);
      for (int j = 0; j < pr.num_vars; ++j) orig_obj += pr.objective[j] * x[j];
      CHECK(flat.po.objective_value(full) == orig_obj);
      ++checked;
      break;  // one feasible point per instance is enough
    }
  }
  CHECK(checked >= 8);
}

TEST_CASE("npo_tolerance formula and propagation") {
  CHECK(npo_tolerance(Rational(1, 2), 5) == Rational(1, 80));
  CHECK(npo_tolerance(Rational(1, 4), 1) == Rational(1, 32));
  CHECK_THROWS_AS(npo_tolerance(Rational(0), 3), StructuralError);
  CHECK_THROWS_AS(npo_tolerance(Rational(1), 3), StructuralError);
  CHECK_THROWS_AS(npo_tolerance(Rational(1, 2), 0), StructuralError);

  // propagation: for any point, the original constraint's violation is at
  // most 8 * ||p||_1 * deg(u) * (worst scaled violation over the family);
  // also each family member's 1-norm stays within 4 * ||p||_1
  std::mt19937 rng(53);
  std::uniform_int_distribution<int> num(0, 8);
  int measured = 0;
  for (int it = 0; it < 80 && measured < 12; ++it) {
    NPOProblem pr = random_npo(rng, 6, 4, 3);
    auto td = normalize(heuristic_decomposition(pr.graph));
    SplitResult s = good_split(pr, td);
    if (s.trees.empty()) continue;
    std::vector<Rational> pt(s.problem.num_vars);
    for (auto& v : pt) v = make_rational(num(rng), 8);
    for (int k = 0; k < static_cast<int>(pr.constraints.size()); ++k) {
      if (root_y(s, k) < 0) continue;
      Rational norm = pr.constraints[k].one_norm();
      if (norm == 0) continue;
      int deg = pr.graph.degree(pr.constraints[k].at);
      Rational theta(0);
      for (int i : s.provenance[k]) {
        Polynomial f = s.problem.constraints[i].sum();
        Rational fn = f.one_norm();
        CHECK(fn <= Rational(4) * norm);
        Rational scaled = rational_abs(f.evaluate(pt)) / fn;
        if (scaled > theta) theta = scaled;
      }
      Rational original = pr.constraints[k].sum().evaluate(pt);
      CHECK(original >= -(Rational(8 * deg) * norm * theta));
      ++measured;
    }
  }
  CHECK(measured >= 10);
}
