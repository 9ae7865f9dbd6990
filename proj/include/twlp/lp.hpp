#ifndef TWLP_LP_HPP
#define TWLP_LP_HPP

#include <vector>

#include "twlp/gb.hpp"

namespace twlp {

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  std::vector<Rational> point;  // per LPModel variable
  Rational objective{0};        // includes the model offset
  std::vector<Rational> duals;  // per model row (certificate)
};

/// Exact two-phase rational simplex with Bland's rule. All model variables
/// are nonnegative.
LPSolution solve(const LPModel& model);

/// Double-precision variant of `solve`. Faster but approximate: the returned
/// point and objective carry floating-point error and no dual certificate is
/// produced, so verify_certificate will reject its output.
LPSolution solve_float(const LPModel& model);

/// Independent exactness check: every row satisfied, objective = c·x + offset,
/// and the dual certificate proves optimality (dual feasibility + matching
/// objective). Returns false on any discrepancy.
bool verify_certificate(const LPModel& model, const LPSolution& sol);

/// Convex combination of feasible GB assignments.
struct Mixture {
  std::vector<std::pair<Rational, std::vector<bool>>> atoms;  // (weight, point)
};

/// Rewrites a feasible LP point (LPz or LP-GB) as an exact mixture of GB
/// assignments, bottom-up over the tree rooted at the smallest leaf.
/// Throws StructuralError if the point violates a defining row.
Mixture decompose(const LPModel& model, const std::vector<Rational>& point,
                  const TreeDecomposition& td, const FeasibleTable& tables);

/// Min-cost atom (ties broken lexicographically smallest).
std::vector<bool> extract(const Mixture& mixture, const std::vector<Rational>& c);

}  // namespace twlp

#endif
