#include "twlp/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace twlp {

int Graph::num_edges() const {
  int m = 0;
  for (const auto& a : adj_) m += static_cast<int>(a.size());
  return m / 2;
}

void Graph::add_edge(int u, int v) {
  if (u == v) throw StructuralError("self-loop");
  adj_.at(u).insert(v);
  adj_.at(v).insert(u);
}

bool Graph::has_edge(int u, int v) const { return adj_.at(u).count(v) > 0; }

int Graph::add_vertex() {
  adj_.emplace_back();
  return num_vertices() - 1;
}

int Graph::max_degree() const {
  int d = 0;
  for (const auto& a : adj_) d = std::max(d, static_cast<int>(a.size()));
  return d;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> es;
  for (int u = 0; u < num_vertices(); ++u)
    for (int v : adj_[u])
      if (u < v) es.emplace_back(u, v);
  return es;
}

bool Graph::is_tree() const {
  int n = num_vertices();
  if (n == 0) return false;
  if (num_edges() != n - 1) return false;
  std::vector<bool> seen(n, false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int reached = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj_[u])
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        q.push(v);
      }
  }
  return reached == n;
}

int TreeDecomposition::width() const {
  int w = 0;
  for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()));
  return w - 1;
}

std::optional<TdViolation> validate(const TreeDecomposition& td, const Graph& g) {
  if (!td.tree.is_tree())
    return TdViolation{TdViolation::Kind::NotATree, -1, {-1, -1}, "decomposition tree is not a tree"};
  if (static_cast<int>(td.bags.size()) != td.tree.num_vertices())
    return TdViolation{TdViolation::Kind::BagCount, -1, {-1, -1}, "bag count != tree node count"};
  int n = g.num_vertices();
  for (const auto& bag : td.bags)
    for (int v : bag)
      if (v < 0 || v >= n)
        return TdViolation{TdViolation::Kind::VertexUncovered, v, {-1, -1},
                           "bag contains vertex outside the graph"};
  // (i) each vertex's bag set induces a connected nonempty subtree
  for (int v = 0; v < n; ++v) {
    std::vector<int> nodes;
    for (int t = 0; t < td.num_nodes(); ++t)
      if (td.bags[t].count(v)) nodes.push_back(t);
    if (nodes.empty())
      return TdViolation{TdViolation::Kind::VertexUncovered, v, {-1, -1},
                         "vertex " + std::to_string(v) + " appears in no bag"};
    std::set<int> in(nodes.begin(), nodes.end());
    std::set<int> seen;
    std::queue<int> q;
    q.push(nodes[0]);
    seen.insert(nodes[0]);
    while (!q.empty()) {
      int t = q.front();
      q.pop();
      for (int s : td.tree.neighbors(t))
        if (in.count(s) && !seen.count(s)) {
          seen.insert(s);
          q.push(s);
        }
    }
    if (seen.size() != in.size())
      return TdViolation{TdViolation::Kind::SubtreeProperty, v, {-1, -1},
                         "bags containing vertex " + std::to_string(v) + " are not connected"};
  }
  // (ii) every edge covered by some bag
  for (auto [u, v] : g.edges()) {
    bool covered = false;
    for (const auto& bag : td.bags)
      if (bag.count(u) && bag.count(v)) {
        covered = true;
        break;
      }
    if (!covered)
      return TdViolation{TdViolation::Kind::EdgeUncovered, -1, {u, v},
                         "edge {" + std::to_string(u) + "," + std::to_string(v) + "} uncovered"};
  }
  return std::nullopt;
}

std::optional<int> find_covering_bag(const TreeDecomposition& td, const std::set<int>& clique) {
  for (int t = 0; t < td.num_nodes(); ++t) {
    if (std::includes(td.bags[t].begin(), td.bags[t].end(), clique.begin(), clique.end()))
      return t;
  }
  return std::nullopt;
}

TreeDecomposition heuristic_decomposition(const Graph& g, ElimOrder method) {
  int n = g.num_vertices();
  if (n == 0) throw StructuralError("empty graph");
  std::vector<std::set<int>> adj(n);
  for (int u = 0; u < n; ++u) adj[u] = g.neighbors(u);
  std::vector<bool> gone(n, false);
  std::vector<int> position(n, -1);
  std::vector<std::set<int>> bags;

  auto fill_count = [&](int u) {
    int fill = 0;
    for (auto it = adj[u].begin(); it != adj[u].end(); ++it)
      for (auto jt = std::next(it); jt != adj[u].end(); ++jt)
        if (!adj[*it].count(*jt)) ++fill;
    return fill;
  };

  for (int step = 0; step < n; ++step) {
    int best = -1;
    long best_score = 0;
    for (int u = 0; u < n; ++u) {
      if (gone[u]) continue;
      long score = method == ElimOrder::MinFill ? fill_count(u) : static_cast<long>(adj[u].size());
      if (best < 0 || score < best_score) {
        best = u;
        best_score = score;
      }
    }
    std::set<int> bag = adj[best];
    bag.insert(best);
    bags.push_back(bag);
    position[best] = step;
    for (auto it = adj[best].begin(); it != adj[best].end(); ++it)
      for (auto jt = std::next(it); jt != adj[best].end(); ++jt) {
        adj[*it].insert(*jt);
        adj[*jt].insert(*it);
      }
    for (int v : adj[best]) adj[v].erase(best);
    adj[best].clear();
    gone[best] = true;
  }

  TreeDecomposition td;
  td.tree = Graph(n);
  td.bags = bags;
  std::vector<int> elim_of_position(n);
  for (int u = 0; u < n; ++u) elim_of_position[position[u]] = u;
  std::vector<int> roots;
  for (int i = 0; i < n; ++i) {
    int vi = elim_of_position[i];
    int parent_pos = -1;
    for (int w : bags[i])
      if (w != vi && (parent_pos < 0 || position[w] < parent_pos)) parent_pos = position[w];
    if (parent_pos >= 0)
      td.tree.add_edge(i, parent_pos);
    else
      roots.push_back(i);
  }
  for (size_t k = 1; k < roots.size(); ++k) td.tree.add_edge(roots[k - 1], roots[k]);
  return td;
}

TreeDecomposition normalize(const TreeDecomposition& td) {
  int m = td.num_nodes();
  std::vector<std::set<int>> bags = td.bags;
  std::vector<std::set<int>> adj(m);
  for (auto [s, t] : td.tree.edges()) {
    adj[s].insert(t);
    adj[t].insert(s);
  }
  std::vector<bool> alive(m, true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < m && !changed; ++s) {
      if (!alive[s]) continue;
      for (int t : adj[s]) {
        if (std::includes(bags[t].begin(), bags[t].end(), bags[s].begin(), bags[s].end())) {
          // contract s into t
          for (int w : adj[s])
            if (w != t) {
              adj[w].erase(s);
              adj[w].insert(t);
              adj[t].insert(w);
            }
          adj[t].erase(s);
          adj[s].clear();
          alive[s] = false;
          changed = true;
          break;
        }
      }
    }
  }
  TreeDecomposition out;
  std::vector<int> remap(m, -1);
  int k = 0;
  for (int s = 0; s < m; ++s)
    if (alive[s]) remap[s] = k++;
  out.tree = Graph(k);
  out.bags.resize(k);
  for (int s = 0; s < m; ++s) {
    if (!alive[s]) continue;
    out.bags[remap[s]] = bags[s];
    for (int t : adj[s])
      if (s < t) out.tree.add_edge(remap[s], remap[t]);
  }
  return out;
}

Graph intersection_graph(const POProblem& problem) {
  Graph g(problem.num_vars());
  for (const auto& con : problem.constraints()) {
    auto supp = con.poly.support();
    for (auto it = supp.begin(); it != supp.end(); ++it)
      for (auto jt = std::next(it); jt != supp.end(); ++jt)
        if (!g.has_edge(*it, *jt)) g.add_edge(*it, *jt);
  }
  return g;
}

int PreparedDecomposition::edge_leaf(int u, int v) const {
  if (u > v) std::swap(u, v);
  for (const auto& [e, t] : edge_leaves)
    if (e.first == u && e.second == v) return t;
  throw StructuralError("no edge leaf recorded for that edge");
}

PreparedDecomposition prepare_for_splitting(const TreeDecomposition& input, const Graph& g) {
  if (auto bad = validate(input, g))
    throw StructuralError("invalid input decomposition: " + bad->message);

  PreparedDecomposition prep;
  TreeDecomposition& td = prep.td;
  td = input;

  // Step 1: one dedicated leaf per graph edge, attached to the smallest
  // tree node covering it.
  for (auto [u, v] : g.edges()) {
    int host = *find_covering_bag(td, {u, v});
    int leaf = td.tree.add_vertex();
    td.bags.push_back({u, v});
    td.tree.add_edge(leaf, host);
    prep.edge_leaves.push_back({{u, v}, leaf});
  }

  // Step 2: split tree vertices of degree > 3, grouping the first two
  // neighbors in sorted order.
  for (int t = 0; t < td.num_nodes(); ++t) {
    while (td.tree.degree(t) > 3) {
      std::vector<int> nbrs(td.tree.neighbors(t).begin(), td.tree.neighbors(t).end());
      int twin = td.tree.add_vertex();
      td.bags.push_back(td.bags[t]);
      // move all but the first two neighbors to the twin
      Graph rebuilt(td.tree.num_vertices());
      for (auto [a, b] : td.tree.edges())
        if (a != t && b != t) rebuilt.add_edge(a, b);
      rebuilt.add_edge(t, nbrs[0]);
      rebuilt.add_edge(t, nbrs[1]);
      rebuilt.add_edge(t, twin);
      for (size_t k = 2; k < nbrs.size(); ++k) rebuilt.add_edge(twin, nbrs[k]);
      td.tree = rebuilt;
    }
  }

  // Step 3: shrink each T_u to the Steiner subtree spanning its edge leaves.
  int nodes = td.num_nodes();
  std::vector<std::set<int>> is_edge_leaf_for(nodes);
  for (const auto& [e, t] : prep.edge_leaves) {
    is_edge_leaf_for[t].insert(e.first);
    is_edge_leaf_for[t].insert(e.second);
  }
  for (int u = 0; u < g.num_vertices(); ++u) {
    std::set<int> tu;
    for (int t = 0; t < nodes; ++t)
      if (td.bags[t].count(u)) tu.insert(t);
    if (g.degree(u) == 0) {
      int keep = *tu.begin();
      for (int t : tu)
        if (t != keep) td.bags[t].erase(u);
      continue;
    }
    bool stripped = true;
    while (stripped) {
      stripped = false;
      for (int t : tu) {
        int deg_in = 0;
        for (int s : td.tree.neighbors(t))
          if (tu.count(s)) ++deg_in;
        if (deg_in <= 1 && !is_edge_leaf_for[t].count(u)) {
          tu.erase(t);
          td.bags[t].erase(u);
          stripped = true;
          break;
        }
      }
    }
  }
  if (auto bad = validate(td, g))
    throw StructuralError("prepare_for_splitting produced invalid decomposition: " + bad->message);
  return prep;
}

}  // namespace twlp
