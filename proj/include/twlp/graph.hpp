#ifndef TWLP_GRAPH_HPP
#define TWLP_GRAPH_HPP

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "twlp/poly.hpp"

namespace twlp {

/// Simple undirected graph on vertices 0..n-1, no self-loops.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : adj_(n) {}

  int num_vertices() const { return static_cast<int>(adj_.size()); }
  int num_edges() const;
  void add_edge(int u, int v);
  bool has_edge(int u, int v) const;
  /// Appends a fresh vertex, returns its index.
  int add_vertex();
  const std::set<int>& neighbors(int u) const { return adj_.at(u); }
  int degree(int u) const { return static_cast<int>(adj_.at(u).size()); }
  int max_degree() const;
  std::vector<std::pair<int, int>> edges() const;  // u < v, sorted
  bool is_tree() const;

 private:
  std::vector<std::set<int>> adj_;
};

/// A tree of vertex bags. Bag t is attached to tree vertex t.
struct TreeDecomposition {
  Graph tree;
  std::vector<std::set<int>> bags;

  int width() const;
  int num_nodes() const { return tree.num_vertices(); }
};

struct TdViolation {
  enum class Kind { NotATree, BagCount, SubtreeProperty, EdgeUncovered, VertexUncovered };
  Kind kind;
  int vertex = -1;  // offending graph vertex (subtree/vertex violations)
  std::pair<int, int> edge{-1, -1};
  std::string message;
};

/// Checks properties (i) subtree connectivity per vertex and (ii) edge
/// coverage. Returns the first violation found, or nullopt when valid.
std::optional<TdViolation> validate(const TreeDecomposition& td, const Graph& g);

/// Smallest tree node whose bag contains the whole set, if any. Every clique
/// of g is contained in some bag of a valid decomposition.
std::optional<int> find_covering_bag(const TreeDecomposition& td, const std::set<int>& clique);

enum class ElimOrder { MinFill, MinDegree };

/// Elimination-game decomposition; deterministic with lowest-index tie-break.
TreeDecomposition heuristic_decomposition(const Graph& g, ElimOrder method = ElimOrder::MinFill);

/// Contracts tree edges whose bag is contained in the neighbor's bag.
/// Output has at most max(1, n) nodes and never larger width.
TreeDecomposition normalize(const TreeDecomposition& td);

/// Intersection graph of a PO problem: each constraint support induces a clique.
Graph intersection_graph(const POProblem& problem);

/// Rewrites a decomposition so that (1) every graph edge e has a dedicated
/// leaf node with bag exactly e, (2) every tree vertex has degree <= 3, and
/// (3) for every graph vertex u, every leaf of the subtree T_u is an edge
/// leaf of some e incident to u. Width never increases.
struct PreparedDecomposition {
  TreeDecomposition td;
  /// edge (u,v) with u < v -> tree node t^e carrying bag {u,v}
  std::vector<std::pair<std::pair<int, int>, int>> edge_leaves;

  int edge_leaf(int u, int v) const;
};

PreparedDecomposition prepare_for_splitting(const TreeDecomposition& td, const Graph& g);

}  // namespace twlp

#endif
