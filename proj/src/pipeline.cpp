#include "twlp/pipeline.hpp"

#include <algorithm>

namespace twlp {

namespace {

TreeDecomposition choose_decomposition(const Graph& g, const RunConfig& config) {
  if (config.decomposition == DecompMethod::Provided) {
    if (!config.provided_td) throw StructuralError("no decomposition provided");
    if (auto v = validate(*config.provided_td, g))
      throw StructuralError("provided decomposition invalid: " + v->message);
    return *config.provided_td;
  }
  return heuristic_decomposition(g, config.decomposition == DecompMethod::MinFill
                                        ? ElimOrder::MinFill
                                        : ElimOrder::MinDegree);
}

void check_cap(const TreeDecomposition& td, int cap) {
  for (const auto& bag : td.bags)
    if (static_cast<int>(bag.size()) > cap)
      throw CapExceeded("bag of " + std::to_string(bag.size()) +
                        " binary variables exceeds the cap of " + std::to_string(cap));
}

void fill_table_stats(PipelineResult& res) {
  for (const auto& bag : res.td.bags) res.stats.bag_sizes.push_back(static_cast<int>(bag.size()));
  for (const auto& f : res.tables.feasible)
    res.stats.ft_sizes.push_back(static_cast<long long>(f.size()));
  res.stats.oracle_queries = res.tables.stats.queries;
  res.stats.lp_rows = static_cast<int>(res.lp.rows.size());
  res.stats.lp_cols = static_cast<int>(res.lp.vars.size());
}

// Shared back end: tables, LP, solve, mixture, extraction. Assumes res.td is
// the decomposition to build on and gb has at least one variable.
void run_core(const GBProblem& gb, const RunConfig& config, PipelineResult& res) {
  check_cap(res.td, config.cap);
  res.tables = build_feasible_tables(gb, res.td);
  res.lp = (config.formulation == Formulation::LPz ? build_lpz : build_lpgb)(gb, res.td,
                                                                             res.tables);
  fill_table_stats(res);
  if (config.stats_only) return;

  LPSolution sol = config.exact_solver ? solve(res.lp) : solve_float(res.lp);
  res.status = sol.status;
  if (sol.status != LPStatus::Optimal) return;
  if (config.exact_solver && !verify_certificate(res.lp, sol))
    throw StructuralError("optimality certificate failed verification");
  res.objective = sol.objective;

  if (config.exact_solver) {
    res.mixture = decompose(res.lp, sol.point, res.td, res.tables);
    res.gb_point = extract(res.mixture, gb.objective());
  } else {
    // No exact mixture exists for a floating-point solution; round the
    // per-variable marginals instead.
    res.gb_point.assign(gb.num_vars(), false);
    std::vector<Rational> marg(gb.num_vars(), Rational(0));
    std::vector<bool> seen(gb.num_vars(), false);
    for (size_t t = 0; t < res.tables.bag_vars.size(); ++t) {
      const auto& bag = res.tables.bag_vars[t];
      for (size_t b = 0; b < bag.size(); ++b) {
        int j = bag[b];
        if (seen[j]) continue;
        seen[j] = true;
        for (size_t k = 0; k < res.tables.feasible[t].size(); ++k)
          if ((res.tables.feasible[t][k] >> b) & 1u)
            marg[j] += sol.point[res.lp.lambda_index[t][k]];
      }
    }
    for (int j = 0; j < gb.num_vars(); ++j) res.gb_point[j] = marg[j] * 2 >= 1;
  }
  res.solved = true;
}

}  // namespace

PipelineResult run_po(const POProblem& problem, const RunConfig& config) {
  PipelineResult res;
  res.plan = plan(problem, config.epsilon);
  res.stats.L = res.plan.L;
  res.stats.gamma = res.plan.gamma;
  res.stats.delta = res.plan.delta;
  res.stats.theta = config.epsilon;
  GBProblem gb = to_gb(problem, res.plan);

  if (gb.num_vars() == 0) {
    // Every variable was dropped: the problem is a set of constant facts.
    if (config.stats_only) return res;
    if (!gb.feasible({})) {
      res.status = LPStatus::Infeasible;
      return res;
    }
    res.status = LPStatus::Optimal;
    res.objective = gb.objective_value({});
    res.point = recover({}, res.plan);
    res.violation = problem.scaled_violation(res.point);
    res.solved = true;
    return res;
  }

  TreeDecomposition td0 = choose_decomposition(intersection_graph(problem), config);
  res.stats.omega_input = td0.width();
  res.td = normalize(lift_decomposition(normalize(td0), res.plan));
  res.stats.omega = res.td.width();

  run_core(gb, config, res);
  if (!res.solved) return res;
  res.point = recover(res.gb_point, res.plan);
  res.violation = problem.scaled_violation(res.point);
  return res;
}

PipelineResult run_gb(const GBProblem& gb, const RunConfig& config) {
  PipelineResult res;
  if (gb.num_vars() == 0) {
    if (config.stats_only) return res;
    if (!gb.feasible({})) {
      res.status = LPStatus::Infeasible;
      return res;
    }
    res.status = LPStatus::Optimal;
    res.objective = gb.objective_value({});
    res.solved = true;
    return res;
  }
  TreeDecomposition td0 = choose_decomposition(intersection_graph(gb), config);
  res.stats.omega_input = td0.width();
  res.td = normalize(td0);
  res.stats.omega = res.td.width();

  run_core(gb, config, res);
  if (!res.solved) return res;
  res.point.reserve(res.gb_point.size());
  for (bool b : res.gb_point) res.point.emplace_back(b ? 1 : 0);
  Rational worst(0);
  for (const auto& c : gb.constraints()) {
    std::vector<bool> sub;
    sub.reserve(c.support.size());
    for (int j : c.support) sub.push_back(res.gb_point[j]);
    if (!c.oracle(sub)) worst = Rational(1);
  }
  res.violation = worst;
  return res;
}

Rational npo_scaled_violation(const NPOProblem& problem, const std::vector<Rational>& x) {
  Rational worst(0);
  for (const auto& c : problem.constraints) {
    Polynomial f = c.sum();
    Rational norm = f.one_norm();
    if (norm == 0) continue;
    Rational val = f.evaluate(x);
    Rational bad = c.sense == Sense::Ge ? (val < 0 ? Rational(-val) : Rational(0))
                                        : rational_abs(val);
    bad /= norm;
    if (bad > worst) worst = bad;
  }
  return worst;
}

NpoResult run_npo(const NPOProblem& problem, const RunConfig& config) {
  problem.validate();
  NpoResult out;
  TreeDecomposition td0 = choose_decomposition(problem.graph, config);
  out.split = good_split(problem, td0);
  out.theta = out.split.trees.empty() ? config.epsilon
                                      : npo_tolerance(config.epsilon, problem.max_degree());
  out.flattened = npo_to_po(out.split);

  RunConfig inner = config;
  inner.epsilon = out.theta;
  inner.decomposition = DecompMethod::Provided;
  inner.provided_td = out.flattened.td;
  out.flat_result = run_po(out.flattened.po, inner);
  out.flat_result.stats.theta = out.theta;
  out.flat_result.stats.split_count = static_cast<int>(out.split.trees.size());
  if (!out.flat_result.solved) return out;

  out.point.assign(out.flat_result.point.begin(),
                   out.flat_result.point.begin() + problem.num_vars);
  out.violation = npo_scaled_violation(problem, out.point);
  return out;
}

}  // namespace twlp
