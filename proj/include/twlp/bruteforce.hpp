#ifndef TWLP_BRUTEFORCE_HPP
#define TWLP_BRUTEFORCE_HPP

#include <optional>
#include <string>
#include <vector>

#include "twlp/discretize.hpp"
#include "twlp/gb.hpp"

namespace twlp {

struct BruteForceResult {
  bool feasible = false;
  std::vector<bool> point;
  Rational objective{0};
};

/// Exhaustive optimum over all 2^n assignments; throws when n exceeds cap.
BruteForceResult solve_gb_bruteforce(const GBProblem& gb, int cap = 20);

/// Exhaustive optimum of the relaxed binary problem GB(gamma) derived from a
/// PO problem, evaluated directly from the PO constraints (independent of the
/// gb_core oracle machinery). Point is a GB bit assignment.
BruteForceResult solve_po_bruteforce(const POProblem& problem, const DiscretizationPlan& plan,
                                     int cap = 20);

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> failures;
  Rational violation{0};
};

/// End-of-pipeline audit: (1) scaled violation of the recovered point is at
/// most epsilon, (2) LP value equals the brute-force GB(gamma) optimum and is
/// at most any known feasible PO cost plus delta*||c||_1, (3) the recovered
/// point's objective equals the LP value.
VerifyReport verify_pipeline(const POProblem& problem, const Rational& epsilon,
                             const DiscretizationPlan& plan, const std::vector<Rational>& x_star,
                             const Rational& lp_value,
                             const std::optional<std::vector<Rational>>& known_feasible = {},
                             int cap = 20);

}  // namespace twlp

#endif
