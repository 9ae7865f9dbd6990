#ifndef TWLP_GB_HPP
#define TWLP_GB_HPP

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "twlp/graph.hpp"
#include "twlp/poly.hpp"

namespace twlp {

/// One GB constraint: a sorted support K and a membership oracle over bit
/// assignments to K (bits given in support order).
struct GBConstraint {
  std::vector<int> support;
  std::function<bool(const std::vector<bool>&)> oracle;
  std::string label;
};

/// Binary problem with linear objective and oracle constraints.
class GBProblem {
 public:
  GBProblem(int n, std::vector<Rational> c, std::vector<GBConstraint> constraints,
            Rational objective_offset = Rational(0));

  int num_vars() const { return n_; }
  const std::vector<Rational>& objective() const { return c_; }
  const Rational& objective_offset() const { return offset_; }
  const std::vector<GBConstraint>& constraints() const { return constraints_; }

  /// Linear objective value (incl. offset) of a full bit assignment.
  Rational objective_value(const std::vector<bool>& x) const;

  /// True iff every constraint oracle accepts the restriction of x.
  bool feasible(const std::vector<bool>& x) const;

 private:
  int n_;
  std::vector<Rational> c_;
  Rational offset_;
  std::vector<GBConstraint> constraints_;
};

Graph intersection_graph(const GBProblem& gb);

/// Assigns each constraint to a tree node whose bag covers its support.
/// Throws StructuralError naming the first uncovered constraint.
std::vector<int> cover_check(const GBProblem& gb, const TreeDecomposition& td);

struct OracleStats {
  long long queries = 0;  // total oracle invocations (once per support assignment)
};

/// Per tree node t: the sorted list F_t of feasible bit assignments over Q_t.
/// An assignment over bag {j_1 < ... < j_k} is encoded as a k-bit mask with
/// bit b corresponding to j_{b+1}; masks sorted ascending (= lexicographic on
/// the reversed bit string, duplicate-free).
struct FeasibleTable {
  std::vector<std::vector<int>> bag_vars;        // sorted bag contents per node
  std::vector<std::vector<unsigned>> feasible;   // F_t as sorted masks
  std::vector<std::vector<int>> covered;         // constraints with K[i] ⊆ Q_t
  OracleStats stats;
};

FeasibleTable build_feasible_tables(const GBProblem& gb, const TreeDecomposition& td);

/// LP in the form min c^T x + offset, rows a^T x {=,>=} rhs, x >= 0.
struct LPModel {
  enum class VarRole { Lambda, ZSet, XYN, Other };
  struct Variable {
    std::string name;
    VarRole role = VarRole::Other;
    Rational objective{0};
  };
  struct Row {
    std::vector<std::pair<int, Rational>> coefs;  // (variable index, coefficient)
    Sense sense = Sense::Eq;
    Rational rhs{0};
    std::string name;
  };
  std::vector<Variable> vars;
  std::vector<Row> rows;
  Rational objective_offset{0};
  /// lambda_index[t][k] = variable index of λ^t_v for the k-th entry of F_t.
  std::vector<std::vector<int>> lambda_index;

  int add_var(std::string name, VarRole role, Rational obj = Rational(0));
};

/// Consistency rows Z_S = Σ{λ^t_v : v ⊇ S} for every node t and S ⊆ Q_t,
/// with Z keys deduplicated globally, plus one convexity row per node.
LPModel build_lpz(const GBProblem& gb, const TreeDecomposition& td, const FeasibleTable& tables);

/// Consistency rows X[Y,N] = Σ{λ^t_v : v_Y ≡ 1, v_N ≡ 0} for (Y,N) in Ω_t:
/// the pairs with |Y| ≤ 1, N = ∅ together with all partitions of each
/// tree-edge separator, X keys deduplicated globally.
LPModel build_lpgb(const GBProblem& gb, const TreeDecomposition& td, const FeasibleTable& tables);

/// Helper shared with tests: make an oracle accepting assignments where the
/// polynomial (over the support variables, exact arithmetic) is >= rhs.
GBConstraint poly_ge_constraint(const Polynomial& f, const Rational& rhs, std::string label = "");

}  // namespace twlp

#endif
