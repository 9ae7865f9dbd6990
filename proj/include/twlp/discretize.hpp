#ifndef TWLP_DISCRETIZE_HPP
#define TWLP_DISCRETIZE_HPP

#include <map>
#include <vector>

#include "twlp/gb.hpp"
#include "twlp/graph.hpp"
#include "twlp/poly.hpp"

namespace twlp {

/// Binary-expansion plan for the continuous variables of a POProblem.
/// Bit h of continuous variable j (1-based h, place value 2^{-h}) becomes GB
/// variable var_map.at(j)[h-1]. When pi = 0 no constraint touches a
/// continuous variable; those variables are dropped from the GB problem and
/// fixed at their objective-optimal bound instead (fixed_continuous).
struct DiscretizationPlan {
  int n = 0;       // PO variable count
  int p = 0;       // PO binary count
  int pi = 0;      // max continuous degree
  int L = 0;       // bits per continuous variable (0 when pi = 0)
  Rational gamma{0};
  Rational delta{0};  // 1 - (1-gamma)^pi
  std::map<int, std::vector<int>> var_map;
  std::map<int, Rational> fixed_continuous;
  int gb_num_vars = 0;

  bool empty() const { return var_map.empty(); }
};

/// gamma = epsilon/pi, L = ceil(log2(1/gamma)), delta = 1-(1-gamma)^pi.
/// Requires 0 < epsilon < 1.
DiscretizationPlan plan(const POProblem& problem, const Rational& epsilon);

/// Greedy high-order-first L-bit expansion: sum 2^{-h} z_h <= r, residual < 2^{-L}.
std::vector<bool> expand(const Rational& r, int L);

/// Bit value sum 2^{-h} z_h of an expansion.
Rational bits_value(const std::vector<bool>& z);

/// Full GB assignment from a PO point: binaries copied, continuous expanded.
std::vector<bool> expand_point(const std::vector<Rational>& x, const DiscretizationPlan& plan);

/// The relaxed binary problem GB(gamma): each constraint f >= 0 becomes an
/// oracle testing f(x, sum 2^{-h} z) >= -delta*||f||_1 (equalities give two
/// oracles); objective coefficient on bit h of j is c_j * 2^{-h}.
GBProblem to_gb(const POProblem& problem, const DiscretizationPlan& plan);

/// Replaces each continuous j in every bag by its L bit variables.
TreeDecomposition lift_decomposition(const TreeDecomposition& td, const DiscretizationPlan& plan);

/// Back-substitution: binaries copied, continuous j = sum 2^{-h} z_{j,h}
/// (or its fixed value when dropped).
std::vector<Rational> recover(const std::vector<bool>& bits, const DiscretizationPlan& plan);

}  // namespace twlp

#endif
