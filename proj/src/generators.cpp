#include "twlp/generators.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace twlp {

namespace {

Monomial mono(std::map<int, int> exps) { return Monomial(std::move(exps)); }

}  // namespace

POProblem gen_knapsack(int n, unsigned seed) {
  if (n < 1) throw StructuralError("knapsack needs at least one item");
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> small(1, 9);
  std::vector<long> w(n), v(n);
  long total = 0;
  for (int j = 0; j < n; ++j) {
    w[j] = small(rng);
    v[j] = small(rng);
    total += w[j];
  }
  long budget = (total + 1) / 2;
  std::vector<Rational> c;
  for (int j = 0; j < n; ++j) c.emplace_back(-v[j]);
  Polynomial f = Polynomial::constant(Rational(budget));
  for (int j = 0; j < n; ++j) f.add_term(mono({{j, 1}}), Rational(-w[j]));
  return POProblem(n, n, std::move(c), {{f, Sense::Ge}});
}

long subsetsum_scale(int n, long target) { return 4L * n * target; }

Rational subsetsum_epsilon(int n, long target) {
  Rational eps(1);
  eps /= Rational(3) * Rational(target) * Rational(subsetsum_scale(n, target));
  return eps;
}

POProblem gen_subsetsum(const std::vector<long>& a, long target, bool scaled) {
  int n = static_cast<int>(a.size());
  if (n < 2) throw StructuralError("subset-sum needs at least two numbers");
  if (target <= 0) throw StructuralError("target must be positive");
  for (long v : a)
    if (v <= 0) throw StructuralError("numbers must be positive");
  Rational m = scaled ? Rational(subsetsum_scale(n, target)) : Rational(1);
  Rational s(target);
  // variables: x_1..x_n then y_1..y_n, all continuous
  auto x = [](int j) { return j; };
  auto y = [n](int j) { return n + j; };
  std::vector<Constraint> cons;
  for (int i = 0; i < n; ++i) {
    // M S y_i - M a_i x_i - M S y_{i-1} = 0
    Polynomial f = Polynomial::term(m * s, y(i));
    f.add_term(mono({{x(i), 1}}), -m * Rational(a[i]));
    if (i > 0) f.add_term(mono({{y(i - 1), 1}}), -m * s);
    cons.push_back({f, Sense::Eq});
  }
  {
    // M y_n - M = 0
    Polynomial f = Polynomial::term(m, y(n - 1));
    f.add_term(Monomial(), -m);
    cons.push_back({f, Sense::Eq});
  }
  for (int j = 0; j < n; ++j) {
    // M x_j (1 - x_j) = 0
    Polynomial f = Polynomial::term(m, x(j));
    f.add_term(mono({{x(j), 2}}), -m);
    cons.push_back({f, Sense::Eq});
  }
  return POProblem(2 * n, 0, std::vector<Rational>(2 * n, Rational(0)), std::move(cons));
}

FcnfInstance gen_fcnf(int num_vertices, unsigned seed) {
  if (num_vertices < 2) throw StructuralError("need at least two vertices");
  std::mt19937 rng(seed);
  int n = num_vertices;
  // random tree: caterpillar-leaning attachment keeps degrees small
  std::vector<int> parent(n, -1);
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(std::max(0, v - 2), v - 1);
    parent[v] = pick(rng);
  }
  // supplies summing to zero
  std::vector<long> b(n, 0);
  std::uniform_int_distribution<int> supply(-3, 3);
  long acc = 0;
  for (int v = 0; v + 1 < n; ++v) {
    b[v] = supply(rng);
    acc += b[v];
  }
  b[n - 1] = -acc;
  // unique tree flow: edge (parent[v], v) carries the subtree net supply of v
  std::vector<long> subtree = b;
  for (int v = n - 1; v >= 1; --v) subtree[parent[v]] += subtree[v];

  FcnfInstance inst;
  inst.supply = b;
  std::uniform_int_distribution<int> extra(1, 4);
  std::uniform_int_distribution<int> fc(1, 5), cc(0, 3);
  for (int v = 1; v < n; ++v) {
    long s = subtree[v];  // net amount that must move v -> parent
    int tail = s >= 0 ? v : parent[v];
    int head = s >= 0 ? parent[v] : v;
    long f = s >= 0 ? s : -s;
    inst.arcs.emplace_back(tail, head);
    inst.capacity.push_back(f + extra(rng));
    inst.fixed_cost.push_back(fc(rng));
    inst.flow_cost.push_back(cc(rng));
    inst.flow.push_back(f);
  }
  int m = static_cast<int>(inst.arcs.size());

  NPOProblem& npo = inst.npo;
  npo.graph = Graph(n);
  npo.num_vars = 2 * m;  // y_a = a, scaled flow x_a = m + a
  npo.num_binary = m;
  npo.vertex_vars.assign(n, {});
  npo.objective.assign(2 * m, Rational(0));
  for (int a = 0; a < m; ++a) {
    auto [tail, head] = inst.arcs[a];
    npo.graph.add_edge(tail, head);
    npo.vertex_vars[tail].insert(a);
    npo.vertex_vars[tail].insert(m + a);
    npo.objective[a] = Rational(inst.fixed_cost[a]);
    npo.objective[m + a] = Rational(inst.flow_cost[a]) * Rational(inst.capacity[a]);
  }
  // conservation at each vertex: sum of outgoing minus incoming flow = b_v
  for (int v = 0; v < n; ++v) {
    NPOConstraint con;
    con.at = v;
    con.sense = Sense::Eq;
    for (int a = 0; a < m; ++a) {
      auto [tail, head] = inst.arcs[a];
      if (tail != v && head != v) continue;
      int other = tail == v ? head : tail;
      Rational coef = Rational(tail == v ? 1 : -1) * Rational(inst.capacity[a]);
      con.terms[other] = con.terms[other] + Polynomial::term(coef, m + a);
    }
    if (b[v] != 0 && !con.terms.empty())
      con.terms.begin()->second.add_term(Monomial(), Rational(-b[v]));
    if (!con.terms.empty()) npo.constraints.push_back(std::move(con));
  }
  // capacity coupling at each tail: y_a - x_a >= 0
  for (int a = 0; a < m; ++a) {
    auto [tail, head] = inst.arcs[a];
    NPOConstraint con;
    con.at = tail;
    con.sense = Sense::Ge;
    Polynomial p = Polynomial::variable(a);
    p = p - Polynomial::variable(m + a);
    con.terms[head] = p;
    npo.constraints.push_back(std::move(con));
  }
  npo.validate();
  return inst;
}

NPOProblem gen_acopf_toy() {
  const int nv = 3;
  NPOProblem npo;
  npo.graph = Graph(nv);
  npo.graph.add_edge(0, 1);
  npo.graph.add_edge(1, 2);
  npo.num_vars = 3 * nv;  // per vertex u: e = 3u, f = 3u+1, g = 3u+2
  npo.num_binary = 0;
  npo.vertex_vars.assign(nv, {});
  npo.objective.assign(npo.num_vars, Rational(0));
  auto e = [](int u) { return 3 * u; };
  auto f = [](int u) { return 3 * u + 1; };
  auto g = [](int u) { return 3 * u + 2; };
  for (int u = 0; u < nv; ++u) {
    npo.vertex_vars[u] = {e(u), f(u), g(u)};
    npo.objective[e(u)] = Rational(-1);
  }
  for (int u = 0; u < nv; ++u) {
    std::vector<int> nbrs(npo.graph.neighbors(u).begin(), npo.graph.neighbors(u).end());
    // g_u = sum over incident edges of w^T M w with
    // w = (e_u, f_u, e_v, f_v) and q = e_u^2 + f_u^2 + 2 e_u e_v + 2 f_u f_v;
    // all monomials in e_u, f_u alone are merged into the first edge term.
    NPOConstraint flow;
    flow.at = u;
    flow.sense = Sense::Eq;
    int deg = static_cast<int>(nbrs.size());
    for (size_t i = 0; i < nbrs.size(); ++i) {
      int v = nbrs[i];
      Polynomial p;
      p.add_term(mono({{e(u), 1}, {e(v), 1}}), Rational(-2));
      p.add_term(mono({{f(u), 1}, {f(v), 1}}), Rational(-2));
      if (i == 0) {
        p.add_term(mono({{g(u), 1}}), Rational(1));
        p.add_term(mono({{e(u), 2}}), Rational(-deg));
        p.add_term(mono({{f(u), 2}}), Rational(-deg));
      }
      flow.terms[v] = p;
    }
    npo.constraints.push_back(std::move(flow));
    // budget 1 - e_u - f_u >= 0
    NPOConstraint budget;
    budget.at = u;
    budget.sense = Sense::Ge;
    Polynomial p = Polynomial::constant(Rational(1));
    p.add_term(mono({{e(u), 1}}), Rational(-1));
    p.add_term(mono({{f(u), 1}}), Rational(-1));
    budget.terms[nbrs.front()] = p;
    npo.constraints.push_back(std::move(budget));
  }
  npo.validate();
  return npo;
}

NPOProblem gen_twtrap(int k) {
  if (k < 1) throw StructuralError("need at least one column");
  int n = 3 * k + 2;
  int hub_a = 3 * k, hub_b = 3 * k + 1;
  NPOProblem npo;
  npo.graph = Graph(n);
  for (int c = 0; c < k; ++c) {
    npo.graph.add_edge(3 * c, 3 * c + 1);
    npo.graph.add_edge(3 * c + 1, 3 * c + 2);
    npo.graph.add_edge(hub_a, 3 * c);
    npo.graph.add_edge(hub_a, 3 * c + 1);
    npo.graph.add_edge(hub_b, 3 * c + 1);
    npo.graph.add_edge(hub_b, 3 * c + 2);
  }
  npo.num_vars = n;
  npo.num_binary = n;
  npo.vertex_vars.assign(n, {});
  for (int v = 0; v < n; ++v) npo.vertex_vars[v] = {v};
  npo.objective.assign(n, Rational(-1));
  // hub dominance: neighborhood sum at least deg times the hub value
  for (int h : {hub_a, hub_b}) {
    NPOConstraint con;
    con.at = h;
    con.sense = Sense::Ge;
    int deg = npo.graph.degree(h);
    bool first = true;
    for (int v : npo.graph.neighbors(h)) {
      Polynomial p = Polynomial::variable(v);
      if (first) {
        p.add_term(mono({{h, 1}}), Rational(-deg));
        first = false;
      }
      con.terms[v] = p;
    }
    npo.constraints.push_back(std::move(con));
  }
  // column convexity: top + bottom at least twice the middle
  for (int c = 0; c < k; ++c) {
    NPOConstraint con;
    con.at = 3 * c + 1;
    con.sense = Sense::Ge;
    Polynomial top = Polynomial::variable(3 * c);
    top.add_term(mono({{3 * c + 1, 1}}), Rational(-2));
    con.terms[3 * c] = top;
    con.terms[3 * c + 2] = Polynomial::variable(3 * c + 2);
    npo.constraints.push_back(std::move(con));
  }
  npo.validate();
  return npo;
}

}  // namespace twlp
