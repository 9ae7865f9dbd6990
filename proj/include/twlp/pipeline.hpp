#ifndef TWLP_PIPELINE_HPP
#define TWLP_PIPELINE_HPP

#include <optional>
#include <vector>

#include "twlp/discretize.hpp"
#include "twlp/gb.hpp"
#include "twlp/lp.hpp"
#include "twlp/npo.hpp"

namespace twlp {

enum class Formulation { LPz, LPGB };
enum class DecompMethod { MinFill, MinDegree, Provided };

struct RunConfig {
  Rational epsilon = make_rational(1, 8);
  Formulation formulation = Formulation::LPGB;
  DecompMethod decomposition = DecompMethod::MinFill;
  /// Required when decomposition == Provided; validated against the
  /// appropriate graph (intersection graph for flat problems, the network
  /// graph for network problems).
  std::optional<TreeDecomposition> provided_td;
  bool exact_solver = true;
  /// Build the tables and the LP but skip solving and extraction.
  bool stats_only = false;
  /// Largest bag (in binary variables, after lifting) that may be
  /// enumerated; CapExceeded is thrown beyond it.
  int cap = 25;
};

struct PipelineStats {
  int omega_input = 0;  ///< width of the decomposition before lifting
  int omega = 0;        ///< width of the lifted decomposition the LP is built on
  int L = 0;
  Rational gamma{0};
  Rational delta{0};
  Rational theta{0};  ///< tolerance handed to the flat stage
  std::vector<int> bag_sizes;
  std::vector<long long> ft_sizes;  ///< |F_t| per node
  long long oracle_queries = 0;
  int lp_rows = 0;
  int lp_cols = 0;
  int split_count = 0;  ///< vertices replaced by trees (network runs only)
};

struct PipelineResult {
  bool solved = false;  ///< false in stats-only runs
  LPStatus status = LPStatus::Infeasible;
  Rational objective{0};         ///< LP optimum, includes any constant offset
  std::vector<bool> gb_point;    ///< extracted binary assignment
  std::vector<Rational> point;   ///< recovered point in original variables
  Rational violation{0};         ///< scaled violation of `point`
  Mixture mixture;               ///< empty for the floating-point solver
  LPModel lp;
  DiscretizationPlan plan;       ///< trivial for direct binary runs
  TreeDecomposition td;          ///< lifted decomposition used for the LP
  FeasibleTable tables;
  PipelineStats stats;
};

/// Full flat pipeline: discretize, decompose (or take the provided
/// decomposition of the intersection graph), enumerate feasible tables, build
/// the chosen LP, solve, verify, decompose the optimum into a mixture, and
/// recover a point in the original variables.
PipelineResult run_po(const POProblem& problem, const RunConfig& config);

/// Same machinery applied directly to a binary oracle problem (no
/// discretization); `point` is the extracted assignment as rationals.
PipelineResult run_gb(const GBProblem& gb, const RunConfig& config);

/// Max over constraints of the violation of the summed edge polynomials,
/// scaled by the constraint 1-norm.
Rational npo_scaled_violation(const NPOProblem& problem, const std::vector<Rational>& x);

struct NpoResult {
  PipelineResult flat_result;     ///< run of the flattened problem
  SplitResult split;
  NpoToPoResult flattened{POProblem(0, 0, {}, {}), {}, {}};
  Rational theta{0};              ///< tolerance used for the flat stage
  std::vector<Rational> point;    ///< restricted to the original variables
  Rational violation{0};          ///< scaled violation on the network constraints
};

/// Network pipeline: split high-degree vertices guided by a decomposition of
/// the network graph, flatten, then run the flat pipeline at tolerance
/// epsilon / (8 * max_degree) (or epsilon unchanged when nothing splits).
NpoResult run_npo(const NPOProblem& problem, const RunConfig& config);

}  // namespace twlp

#endif
