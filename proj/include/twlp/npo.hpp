#ifndef TWLP_NPO_HPP
#define TWLP_NPO_HPP

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "twlp/graph.hpp"
#include "twlp/poly.hpp"

namespace twlp {

/// One constraint of a network problem, attached to vertex `at`: the sum of
/// the edge-polynomials, one per incident edge, compared against zero.
/// Within a single constraint no two edge-polynomials may share a monomial,
/// so the 1-norm of the sum equals the sum of the 1-norms.
struct NPOConstraint {
  int at = -1;
  /// neighbor v -> p_{at,v}, a polynomial over the variables of `at` and v
  std::map<int, Polynomial> terms;
  Sense sense = Sense::Ge;

  Polynomial sum() const;
  Rational one_norm() const;
};

/// Polynomial optimization over a network: variables live on vertices and
/// every constraint at a vertex couples that vertex only with its neighbors.
/// Variables 0..num_binary-1 are 0/1, the rest live in [0,1].
struct NPOProblem {
  Graph graph;
  std::vector<std::set<int>> vertex_vars;  // X_v, one set per vertex
  int num_vars = 0;
  int num_binary = 0;
  std::vector<Rational> objective;
  std::vector<NPOConstraint> constraints;

  /// Throws StructuralError on any broken invariant: variable sets out of
  /// range or not covering all variables, a variable whose vertex set is
  /// disconnected, a term on a non-edge, a term escaping its two variable
  /// sets, or two edge-polynomials of one constraint sharing a monomial.
  void validate() const;

  std::vector<int> constraints_at(int v) const;
  /// max over vertices of |X_v| + number of constraints at v
  int coupling_delta() const;
  int max_degree() const { return graph.max_degree(); }
};

/// Rooted tree used to replace one high-degree vertex u. The vertex u itself
/// is reused as the root; the leaves are the current neighbors of u; every
/// other internal vertex takes a fresh index directly above the current
/// vertex range. The root has three children, every other internal vertex
/// has two, so all internal vertices end up with degree three.
struct SplitTree {
  int u = -1;  // split vertex, also the root
  std::map<int, std::vector<int>> children;  // internal vertex -> children

  bool is_internal(int s) const { return children.find(s) != children.end(); }
  std::vector<int> internal_vertices() const;  // sorted
  std::vector<int> leaves() const;             // sorted
  std::map<int, int> parents() const;          // child -> parent
  int num_vertices() const;
};

/// A fresh [0,1] variable introduced while splitting a vertex.
struct YVar {
  int index;        // variable id in the rewritten problem
  int tree_vertex;  // the tree vertex the variable speaks for
  int owner;        // vertex whose variable set carries it
  int u;            // split vertex
  int k;            // constraint index in the problem handed to the splitter
  bool plus;        // y+ when true, y- when false
};

/// Outcome of splitting one vertex or of a full decomposition-guided pass.
///
/// Each replaced constraint with edge sum P and total norm nu_r turns into a
/// family of equations stored in a fixed orientation chosen so that the
/// plain sum of the family polynomials equals P - nu_r * y+_root. Since
/// y+_root ranges over [0,1] and carries no cost, the rewritten problem is
/// equivalent to the original.
struct SplitResult {
  NPOProblem problem;
  std::vector<SplitTree> trees;
  std::vector<YVar> y_vars;
  /// input constraint index -> replacement indices in `problem` (singleton
  /// for untouched constraints, possibly empty for vacuous ones)
  std::vector<std::vector<int>> provenance;
  /// vertex of the rewritten graph -> originating vertex of the input graph
  std::vector<int> origin;
  /// filled by good_split: a decomposition of the rewritten graph
  std::optional<TreeDecomposition> td;
};

/// Replaces one vertex of degree > 3 by the given tree, rewriting each of
/// its constraints into one equation per leaf plus one per internal vertex.
SplitResult split_vertex(const NPOProblem& problem, const SplitTree& tree);

/// Splits every vertex of degree > 3, deriving each replacement tree from
/// the branching structure of the vertex's subtree in the prepared
/// decomposition. The returned decomposition covers the new graph and has
/// width at most 2 * td.width() + 1; the new graph has max degree <= 3.
/// A problem of max degree <= 3 is returned unchanged with td passed through.
SplitResult good_split(const NPOProblem& problem, const TreeDecomposition& td);

struct NpoToPoResult {
  POProblem po;
  TreeDecomposition td;  // decomposition of the intersection graph of po
  /// network constraint index -> flat constraint indices (equalities expand
  /// into a >= pair)
  std::vector<std::vector<int>> po_of_npo;
};

/// Flattens a (split) network problem of max degree <= 3 into a flat
/// polynomial problem together with a decomposition of its intersection
/// graph of width at most 7 * coupling_delta * (W + 1) - 1, where W is the
/// width of the decomposition carried by the split result.
NpoToPoResult npo_to_po(const SplitResult& split);

/// Tolerance to request from the flat pipeline so that every original
/// network constraint is violated by at most epsilon times its 1-norm:
/// epsilon / (8 * max_degree).
Rational npo_tolerance(const Rational& epsilon, int max_degree);

}  // namespace twlp

#endif
