#include "twlp/bruteforce.hpp"

namespace twlp {

BruteForceResult solve_gb_bruteforce(const GBProblem& gb, int cap) {
  int n = gb.num_vars();
  if (n > cap) throw CapExceeded("brute-force cap exceeded");
  BruteForceResult best;
  std::vector<bool> x(n);
  for (unsigned long long mask = 0; mask < (1ull << n); ++mask) {
    for (int j = 0; j < n; ++j) x[j] = (mask >> j) & 1ull;
    if (!gb.feasible(x)) continue;
    Rational obj = gb.objective_value(x);
    if (!best.feasible || obj < best.objective) {
      best.feasible = true;
      best.point = x;
      best.objective = obj;
    }
  }
  return best;
}

namespace {

// x values induced by a GB bit assignment, written without gb_core helpers.
std::vector<Rational> induced_point(const std::vector<bool>& bits, const DiscretizationPlan& pl) {
  std::vector<Rational> x(pl.n, Rational(0));
  for (int j = 0; j < pl.p; ++j) x[j] = bits[j] ? 1 : 0;
  for (int j = pl.p; j < pl.n; ++j) {
    auto fix = pl.fixed_continuous.find(j);
    if (fix != pl.fixed_continuous.end()) {
      x[j] = fix->second;
      continue;
    }
    Rational v(0), place(1, 2);
    for (int id : pl.var_map.at(j)) {
      if (bits[id]) v += place;
      place /= 2;
    }
    x[j] = v;
  }
  return x;
}

bool relaxed_feasible(const POProblem& po, const std::vector<Rational>& x, const Rational& delta) {
  for (const auto& con : po.constraints()) {
    Rational budget = delta * con.poly.one_norm();
    Rational v = con.poly.evaluate(x);
    if (con.sense == Sense::Ge ? v < -budget : rational_abs(v) > budget) return false;
  }
  return true;
}

}  // namespace

BruteForceResult solve_po_bruteforce(const POProblem& problem, const DiscretizationPlan& plan,
                                     int cap) {
  int n = plan.gb_num_vars;
  if (n > cap) throw CapExceeded("brute-force cap exceeded");
  BruteForceResult best;
  std::vector<bool> bits(n);
  for (unsigned long long mask = 0; mask < (1ull << n); ++mask) {
    for (int j = 0; j < n; ++j) bits[j] = (mask >> j) & 1ull;
    auto x = induced_point(bits, plan);
    if (!relaxed_feasible(problem, x, plan.delta)) continue;
    Rational obj = problem.objective_value(x);
    if (!best.feasible || obj < best.objective) {
      best.feasible = true;
      best.point = bits;
      best.objective = obj;
    }
  }
  return best;
}

VerifyReport verify_pipeline(const POProblem& problem, const Rational& epsilon,
                             const DiscretizationPlan& plan, const std::vector<Rational>& x_star,
                             const Rational& lp_value,
                             const std::optional<std::vector<Rational>>& known_feasible, int cap) {
  VerifyReport rep;
  rep.violation = problem.scaled_violation(x_star);
  if (rep.violation > epsilon) {
    rep.ok = false;
    rep.failures.push_back("recovered point exceeds the scaled-epsilon budget");
  }
  auto bf = solve_po_bruteforce(problem, plan, cap);
  if (!bf.feasible) {
    rep.ok = false;
    rep.failures.push_back("relaxed problem is infeasible by exhaustion but a point was produced");
  } else {
    if (lp_value != bf.objective) {
      rep.ok = false;
      rep.failures.push_back("LP value differs from the exhaustive relaxed optimum");
    }
    if (known_feasible) {
      Rational bound = problem.objective_value(*known_feasible) +
                       plan.delta * problem.objective_one_norm();
      if (bf.objective > bound) {
        rep.ok = false;
        rep.failures.push_back("relaxed optimum exceeds known feasible cost plus delta budget");
      }
    }
  }
  if (problem.objective_value(x_star) != lp_value) {
    rep.ok = false;
    rep.failures.push_back("recovered point objective differs from the LP value");
  }
  return rep;
}

}  // namespace twlp
