#include "twlp/npo.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

namespace twlp {

Polynomial NPOConstraint::sum() const {
  Polynomial f;
  for (const auto& [v, p] : terms) f = f + p;
  return f;
}

Rational NPOConstraint::one_norm() const {
  Rational r(0);
  for (const auto& [v, p] : terms) r += p.one_norm();
  return r;
}

void NPOProblem::validate() const {
  int m = graph.num_vertices();
  if (static_cast<int>(vertex_vars.size()) != m)
    throw StructuralError("vertex variable sets do not match the graph");
  if (num_binary < 0 || num_binary > num_vars) throw StructuralError("bad binary count");
  if (static_cast<int>(objective.size()) != num_vars)
    throw StructuralError("objective length mismatch");
  std::vector<std::vector<int>> holders(num_vars);
  for (int v = 0; v < m; ++v) {
    for (int j : vertex_vars[v]) {
      if (j < 0 || j >= num_vars) throw StructuralError("variable index out of range");
      holders[j].push_back(v);
    }
  }
  for (int j = 0; j < num_vars; ++j) {
    if (holders[j].empty())
      throw StructuralError("variable " + std::to_string(j) + " belongs to no vertex");
    // the vertices holding j must induce a connected subgraph
    std::set<int> all(holders[j].begin(), holders[j].end());
    std::set<int> seen{holders[j][0]};
    std::deque<int> queue{holders[j][0]};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int w : graph.neighbors(v))
        if (all.count(w) && !seen.count(w)) {
          seen.insert(w);
          queue.push_back(w);
        }
    }
    if (seen.size() != all.size())
      throw StructuralError("variable " + std::to_string(j) + " spans a disconnected vertex set");
  }
  for (const auto& con : constraints) {
    if (con.at < 0 || con.at >= m) throw StructuralError("constraint attached to no vertex");
    std::set<Monomial> seen_monomials;
    for (const auto& [v, p] : con.terms) {
      if (!graph.has_edge(con.at, v))
        throw StructuralError("constraint term on a non-edge");
      std::set<int> allowed = vertex_vars[con.at];
      allowed.insert(vertex_vars[v].begin(), vertex_vars[v].end());
      for (int j : p.support())
        if (!allowed.count(j))
          throw StructuralError("edge polynomial uses a variable outside its two endpoints");
      for (const auto& [mono, coef] : p.terms())
        if (!seen_monomials.insert(mono).second)
          throw StructuralError("two edge polynomials of one constraint share a monomial");
    }
  }
}

std::vector<int> NPOProblem::constraints_at(int v) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(constraints.size()); ++i)
    if (constraints[i].at == v) out.push_back(i);
  return out;
}

int NPOProblem::coupling_delta() const {
  std::vector<int> count(graph.num_vertices(), 0);
  for (const auto& con : constraints) ++count[con.at];
  int best = 0;
  for (int v = 0; v < graph.num_vertices(); ++v)
    best = std::max(best, static_cast<int>(vertex_vars[v].size()) + count[v]);
  return best;
}

std::vector<int> SplitTree::internal_vertices() const {
  std::vector<int> out;
  for (const auto& [i, ch] : children) out.push_back(i);
  return out;  // map keys are already sorted
}

std::vector<int> SplitTree::leaves() const {
  std::vector<int> out;
  for (const auto& [i, ch] : children)
    for (int c : ch)
      if (!is_internal(c)) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

std::map<int, int> SplitTree::parents() const {
  std::map<int, int> par;
  for (const auto& [i, ch] : children)
    for (int c : ch) par[c] = i;
  return par;
}

int SplitTree::num_vertices() const {
  return static_cast<int>(children.size() + leaves().size());
}

namespace {

void check_split_tree(const NPOProblem& pr, const SplitTree& tree) {
  int u = tree.u;
  if (u < 0 || u >= pr.graph.num_vertices()) throw StructuralError("split vertex out of range");
  if (pr.graph.degree(u) <= 3) throw StructuralError("vertex has degree <= 3, nothing to split");
  if (!tree.is_internal(u)) throw StructuralError("split vertex must be the tree root");
  auto par = tree.parents();
  if (par.count(u)) throw StructuralError("root must have no parent");
  for (const auto& [i, ch] : tree.children) {
    int want = i == u ? 3 : 2;
    if (static_cast<int>(ch.size()) != want)
      throw StructuralError("internal tree vertices must have degree three");
    if (i != u && !par.count(i)) throw StructuralError("tree is disconnected");
  }
  auto lv = tree.leaves();
  const auto& nb = pr.graph.neighbors(u);
  if (std::set<int>(lv.begin(), lv.end()) != nb ||
      static_cast<int>(lv.size()) != pr.graph.degree(u))
    throw StructuralError("tree leaves must be exactly the neighbors of the split vertex");
  // fresh internal vertices must extend the vertex range contiguously
  int next = pr.graph.num_vertices();
  for (int i : tree.internal_vertices()) {
    if (i == u) continue;
    if (i != next) throw StructuralError("fresh tree vertices must extend the vertex range");
    ++next;
  }
}

}  // namespace

SplitResult split_vertex(const NPOProblem& pr, const SplitTree& tree) {
  pr.validate();
  check_split_tree(pr, tree);
  int u = tree.u;

  SplitResult res;
  res.problem = pr;
  NPOProblem& q = res.problem;
  auto par = tree.parents();

  // new vertices; every internal vertex carries a copy of X_u
  for (int i : tree.internal_vertices()) {
    if (i == u) continue;
    q.graph.add_vertex();
    q.vertex_vars.push_back(pr.vertex_vars[u]);
  }
  res.origin.resize(q.graph.num_vertices());
  std::iota(res.origin.begin(), res.origin.end(), 0);
  for (int v = pr.graph.num_vertices(); v < q.graph.num_vertices(); ++v) res.origin[v] = u;

  // rebuild edges: drop the star at u, wire in the tree
  Graph g2(q.graph.num_vertices());
  for (auto [a, b] : pr.graph.edges())
    if (a != u && b != u) g2.add_edge(a, b);
  for (const auto& [i, ch] : tree.children)
    for (int c : ch) g2.add_edge(i, c);
  q.graph = g2;

  // keep untouched constraints in order, then append replacement families
  std::vector<NPOConstraint> cons2;
  res.provenance.assign(pr.constraints.size(), {});
  std::vector<int> at_u;
  for (int i = 0; i < static_cast<int>(pr.constraints.size()); ++i) {
    if (pr.constraints[i].at == u) {
      at_u.push_back(i);
    } else {
      NPOConstraint c = pr.constraints[i];
      // a neighbor's edge toward u now points at the copy adjacent to it
      auto it = c.terms.find(u);
      if (it != c.terms.end()) {
        int stand_in = par.at(c.at);
        if (stand_in != u) {
          c.terms[stand_in] = std::move(it->second);
          c.terms.erase(u);
        }
      }
      res.provenance[i] = {static_cast<int>(cons2.size())};
      cons2.push_back(std::move(c));
    }
  }

  for (int k : at_u) {
    const NPOConstraint& con = pr.constraints[k];
    if (con.sense != Sense::Ge)
      throw StructuralError("only >= constraints can be split");

    // nu_s: total 1-norm of the edge polynomials below tree vertex s
    std::map<int, Rational> nu;
    std::function<Rational(int)> fill = [&](int s) -> Rational {
      Rational total(0);
      if (!tree.is_internal(s)) {
        auto it = con.terms.find(s);
        if (it != con.terms.end()) total = it->second.one_norm();
      } else {
        for (int c : tree.children.at(s)) total += fill(c);
      }
      nu[s] = total;
      return total;
    };
    fill(u);

    // fresh y variables; skip subtrees that carry no mass
    std::map<int, std::pair<int, int>> y;  // tree vertex -> (y+ id, y- id or -1)
    auto add_y = [&](int s, int owner, bool with_minus) {
      if (nu[s] == 0) return;
      int plus = q.num_vars++;
      q.objective.push_back(Rational(0));
      q.vertex_vars[owner].insert(plus);
      res.y_vars.push_back({plus, s, owner, u, k, true});
      int minus = -1;
      if (with_minus) {
        minus = q.num_vars++;
        q.objective.push_back(Rational(0));
        q.vertex_vars[owner].insert(minus);
        res.y_vars.push_back({minus, s, owner, u, k, false});
      }
      y[s] = {plus, minus};
    };
    add_y(u, u, false);  // the root only gets y+
    for (int i : tree.internal_vertices())
      if (i != u) add_y(i, i, true);
    for (int v : tree.leaves()) add_y(v, par.at(v), true);

    // nu_s * (y+_s - y-_s); for the root, nu_r * y+_r
    auto ydiff = [&](int s) {
      auto [plus, minus] = y.at(s);
      Polynomial d = Polynomial::term(nu[s], plus);
      if (minus >= 0) d = d - Polynomial::term(nu[s], minus);
      return d;
    };

    // one equation per leaf and per internal vertex, in a fixed orientation
    // whose plain sum telescopes to sum(p) - nu_root * y+_root
    for (int i : tree.internal_vertices()) {
      // leaf equations attach to the leaf's parent: p_v - nu_v (y+_v - y-_v)
      for (int v : tree.children.at(i)) {
        if (tree.is_internal(v) || nu[v] == 0) continue;
        NPOConstraint eq;
        eq.at = i;
        eq.sense = Sense::Eq;
        eq.terms[v] = con.terms.at(v) - ydiff(v);
        res.provenance[k].push_back(static_cast<int>(cons2.size()));
        cons2.push_back(std::move(eq));
      }
      if (nu[i] == 0) continue;
      NPOConstraint eq;
      eq.at = i;
      eq.sense = Sense::Eq;
      if (i == u) {
        // root: sum over children of nu_s (y+_s - y-_s), minus nu_r y+_r
        int host = tree.children.at(i).front();
        for (int c : tree.children.at(i))
          if (nu[c] > 0) eq.terms[c] = ydiff(c);
        Polynomial& h = eq.terms[host];
        h = h - ydiff(i);
      } else {
        // internal: nu_j (y_j) + nu_l (y_l) - nu_i (y_i), the last term
        // riding on the parent edge
        for (int c : tree.children.at(i))
          if (nu[c] > 0) eq.terms[c] = ydiff(c);
        eq.terms[par.at(i)] = -ydiff(i);
      }
      res.provenance[k].push_back(static_cast<int>(cons2.size()));
      cons2.push_back(std::move(eq));
    }
  }

  q.constraints = std::move(cons2);
  res.trees = {tree};
  q.validate();
  return res;
}

namespace {

SplitResult identity_split(const NPOProblem& pr, const TreeDecomposition& td) {
  SplitResult res;
  res.problem = pr;
  res.origin.resize(pr.graph.num_vertices());
  std::iota(res.origin.begin(), res.origin.end(), 0);
  res.provenance.resize(pr.constraints.size());
  for (int i = 0; i < static_cast<int>(pr.constraints.size()); ++i) res.provenance[i] = {i};
  res.td = td;
  return res;
}

}  // namespace

SplitResult good_split(const NPOProblem& pr, const TreeDecomposition& td) {
  pr.validate();
  if (auto bad = validate(td, pr.graph))
    throw StructuralError("invalid decomposition: " + bad->message);
  int z = td.width();
  if (pr.graph.max_degree() <= 3) return identity_split(pr, td);

  auto prep = prepare_for_splitting(td, pr.graph);
  const Graph& t = prep.td.tree;
  std::vector<std::set<int>> bags = prep.td.bags;  // rewritten in place below

  // per edge leaf t^e of original edge {a,b}: the current graph vertex
  // standing in for each endpoint (splits of a replace its entry)
  std::map<int, std::map<int, int>> leaf_current;
  for (const auto& [e, node] : prep.edge_leaves) {
    leaf_current[node][e.first] = e.first;
    leaf_current[node][e.second] = e.second;
  }

  SplitResult res = identity_split(pr, prep.td);
  res.td.reset();
  // descent map: constraint index in the current problem -> original index
  std::vector<int> con_origin(pr.constraints.size());
  std::iota(con_origin.begin(), con_origin.end(), 0);

  int original_n = pr.graph.num_vertices();
  for (int u = 0; u < original_n; ++u) {
    if (pr.graph.degree(u) <= 3) continue;

    // T_u inside the prepared tree, with degrees measured inside T_u
    std::set<int> tu;
    for (int node = 0; node < t.num_vertices(); ++node)
      if (prep.td.bags[node].count(u)) tu.insert(node);
    auto deg_tu = [&](int node) {
      int d = 0;
      for (int w : t.neighbors(node)) d += tu.count(w) ? 1 : 0;
      return d;
    };
    std::set<int> blue;
    for (int node : tu)
      if (deg_tu(node) != 2) blue.insert(node);

    // contract blue-to-blue paths into the replacement tree's edges
    std::map<int, std::set<int>> hat;  // adjacency among blue tree nodes
    for (int b : blue)
      for (int w : t.neighbors(b)) {
        if (!tu.count(w)) continue;
        int prev = b, cur = w;
        while (!blue.count(cur)) {
          int nxt = -1;
          for (int x : t.neighbors(cur))
            if (tu.count(x) && x != prev) nxt = x;
          prev = cur;
          cur = nxt;
        }
        hat[b].insert(cur);
        hat[cur].insert(b);
      }

    int root_node = -1;  // smallest internal blue tree node
    for (int b : blue)
      if (deg_tu(b) == 3) {
        root_node = b;
        break;
      }
    if (root_node < 0) throw StructuralError("no branching node for a high-degree vertex");

    // graph vertex behind each blue node: edge leaves keep their far
    // endpoint, the root reuses u, other branching nodes get fresh ids
    std::map<int, int> gv;
    gv[root_node] = u;
    int next_id = res.problem.graph.num_vertices();
    for (int b : blue) {
      if (b == root_node) continue;
      if (deg_tu(b) == 3) {
        gv[b] = next_id++;
      } else {
        const auto& cur = leaf_current.at(b);
        for (const auto& [orig, now] : cur)
          if (orig != u) gv[b] = now;
      }
    }

    // orient away from the root
    SplitTree stree;
    stree.u = u;
    std::map<int, int> node_parent;
    std::deque<int> queue{root_node};
    std::set<int> seen{root_node};
    while (!queue.empty()) {
      int b = queue.front();
      queue.pop_front();
      std::vector<int> kids;
      for (int w : hat[b])
        if (!seen.count(w)) {
          seen.insert(w);
          node_parent[w] = b;
          kids.push_back(gv[w]);
          queue.push_back(w);
        }
      if (deg_tu(b) == 3) {
        std::sort(kids.begin(), kids.end());
        stree.children[gv[b]] = kids;
      }
    }

    SplitResult step = split_vertex(res.problem, stree);

    // y variables reference pre-split constraint indices; send them back to
    // the original problem's numbering before the descent map moves on
    for (YVar yv : step.y_vars) {
      yv.k = con_origin[yv.k];
      res.y_vars.push_back(yv);
    }
    // compose provenance and the constraint descent map
    std::vector<int> con_origin2(step.problem.constraints.size(), -1);
    std::vector<std::vector<int>> prov2(pr.constraints.size());
    for (int orig = 0; orig < static_cast<int>(pr.constraints.size()); ++orig)
      for (int cur : res.provenance[orig])
        for (int nxt : step.provenance[cur]) {
          prov2[orig].push_back(nxt);
          con_origin2[nxt] = orig;
        }
    res.provenance = std::move(prov2);
    con_origin = std::move(con_origin2);
    res.problem = std::move(step.problem);
    res.trees.push_back(stree);
    for (int v = static_cast<int>(res.origin.size()); v < res.problem.graph.num_vertices(); ++v)
      res.origin.push_back(u);

    // rewrite bags: each tree node of T_u swaps u for the copies dictated
    // by its nearest branching ancestor
    std::map<int, int> nearest_blue;  // T_u tree node -> blue ancestor node
    nearest_blue[root_node] = root_node;
    std::deque<int> walk{root_node};
    std::set<int> visited{root_node};
    std::map<int, int> tparent;
    while (!walk.empty()) {
      int node = walk.front();
      walk.pop_front();
      for (int w : t.neighbors(node)) {
        if (!tu.count(w) || visited.count(w)) continue;
        visited.insert(w);
        tparent[w] = node;
        int up = node;
        nearest_blue[w] = blue.count(up) ? up : nearest_blue[up];
        walk.push_back(w);
      }
    }
    for (int node : tu) {
      bags[node].erase(u);
      int anchor = gv.at(nearest_blue.at(node));
      if (blue.count(node) && deg_tu(node) == 3) {
        bags[node].insert(gv.at(node));
        if (node != root_node) bags[node].insert(anchor);
      } else {
        bags[node].insert(anchor);
        if (blue.count(node)) {
          // edge leaf: record the copy now standing in for u
          leaf_current[node][u] = anchor;
        }
      }
    }
  }

  res.td = TreeDecomposition{t, bags};
  if (auto bad = validate(*res.td, res.problem.graph))
    throw StructuralError("split decomposition invalid: " + bad->message);
  if (res.td->width() > 2 * z + 1) throw StructuralError("split width bound exceeded");
  if (res.problem.graph.max_degree() > 3) throw StructuralError("split left a high degree");
  return res;
}

NpoToPoResult npo_to_po(const SplitResult& split) {
  const NPOProblem& q = split.problem;
  q.validate();
  if (q.graph.max_degree() > 3)
    throw StructuralError("flattening requires max degree <= 3; split first");
  if (!split.td) throw StructuralError("split result carries no decomposition");

  std::vector<Constraint> cons;
  std::vector<std::vector<int>> po_of_npo(q.constraints.size());
  for (int i = 0; i < static_cast<int>(q.constraints.size()); ++i) {
    Polynomial f = q.constraints[i].sum();
    if (f.is_zero()) continue;
    po_of_npo[i].push_back(static_cast<int>(cons.size()));
    cons.push_back({f, Sense::Ge});
    if (q.constraints[i].sense == Sense::Eq) {
      po_of_npo[i].push_back(static_cast<int>(cons.size()));
      cons.push_back({-f, Sense::Ge});
    }
  }
  POProblem po(q.num_vars, q.num_binary, q.objective, cons);

  // bag rule: take every variable of each bag vertex, plus the variables of
  // every neighbor its constraints reach (at most three, the children in a
  // replacement tree or the keyed neighbors of an ordinary vertex)
  std::vector<std::set<int>> reach(q.graph.num_vertices());
  for (const SplitTree& tr : split.trees)
    for (const auto& [i, ch] : tr.children) reach[i].insert(ch.begin(), ch.end());
  for (const auto& con : q.constraints)
    for (const auto& [w, p] : con.terms) reach[con.at].insert(w);

  std::vector<std::set<int>> bags(split.td->num_nodes());
  for (int node = 0; node < split.td->num_nodes(); ++node) {
    for (int v : split.td->bags[node]) {
      bags[node].insert(q.vertex_vars[v].begin(), q.vertex_vars[v].end());
      for (int w : reach[v])
        bags[node].insert(q.vertex_vars[w].begin(), q.vertex_vars[w].end());
    }
  }
  TreeDecomposition td{split.td->tree, bags};
  if (auto bad = validate(td, intersection_graph(po)))
    throw StructuralError("flattened decomposition invalid: " + bad->message);
  return {std::move(po), std::move(td), std::move(po_of_npo)};
}

Rational npo_tolerance(const Rational& epsilon, int max_degree) {
  if (epsilon <= 0 || epsilon >= 1) throw StructuralError("tolerance must be in (0,1)");
  if (max_degree < 1) throw StructuralError("degree must be positive");
  return epsilon / Rational(8 * max_degree);
}

}  // namespace twlp
