#ifndef TWLP_GENERATORS_HPP
#define TWLP_GENERATORS_HPP

#include <utility>
#include <vector>

#include "twlp/npo.hpp"
#include "twlp/poly.hpp"

namespace twlp {

/// 0/1 knapsack: minimize -v^T x subject to b - w^T x >= 0, w, v uniform in
/// 1..9, b = ceil(sum(w)/2). Deterministic per seed.
POProblem gen_knapsack(int n, unsigned seed);

/// Subset-sum as a continuous system with quadratic binarity rows
/// x_j (1 - x_j) = 0: running sums S y_i = a_i x_i + S y_{i-1}, y_n = 1.
/// With `scaled` every row is multiplied by M = 4 n S. Zero objective; the
/// instance is a pure feasibility question "does a subset of a sum to S?".
/// The intersection graph is a chain of triangles of tree-width 2.
POProblem gen_subsetsum(const std::vector<long>& a, long target, bool scaled);

/// Row scale M = 4 n S of the scaled system.
long subsetsum_scale(int n, long target);

/// Tolerance 1/(3 S M) under which rounding the recovered x to the nearest
/// integer yields an exact subset.
Rational subsetsum_epsilon(int n, long target);

/// Fixed-charge network flow on a random spanning tree with `num_vertices`
/// vertices: arcs oriented along the unique feasible flow, capacities at
/// least the required flow, flows rescaled to [0,1] per arc.
struct FcnfInstance {
  NPOProblem npo;
  std::vector<std::pair<int, int>> arcs;  // (tail, head); arc a owns vars y_a, x_a
  std::vector<long> capacity;             // w_a
  std::vector<long> fixed_cost;           // f_a, charged on y_a
  std::vector<long> flow_cost;            // c_a, per unit of unscaled flow
  std::vector<long> supply;               // b_v, sums to zero
  std::vector<long> flow;                 // feasible flow along each arc
};
FcnfInstance gen_fcnf(int num_vertices, unsigned seed);

/// Toy quadratic power-flow instance on a 3-vertex path: per vertex the
/// variables (e_u, f_u, g_u) and two constraints, an equality tying g_u to
/// quadratic forms over the incident edges and a linear budget
/// 1 - e_u - f_u >= 0. Coupling measure 5, continuous degree 2.
NPOProblem gen_acopf_toy();

/// Binary network instance on the k-column trap graph: k columns of three
/// vertices plus two hubs adjacent to two rows each; hub constraints compare
/// the hub against its neighborhood sum. Small tree-width for every k.
NPOProblem gen_twtrap(int k);

}  // namespace twlp

#endif
