#ifndef TWLP_IO_HPP
#define TWLP_IO_HPP

#include <optional>
#include <string>

#include "json.hpp"
#include "twlp/npo.hpp"
#include "twlp/pipeline.hpp"

namespace twlp {

/// Raised when an input file is not syntactically usable (bad JSON shape,
/// missing or mistyped fields). Structural problems in a well-formed file
/// (indices out of range, broken invariants) raise StructuralError instead.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Serializable form of a binary oracle problem: each constraint is either an
/// explicit list of accepted assignments over its support or a polynomial
/// predicate f(x) >= rhs evaluated exactly.
struct GBSpecConstraint {
  std::vector<int> support;  // 0-based, sorted
  std::optional<std::vector<unsigned>> accepted;  // masks in support order
  std::optional<Polynomial> poly;                 // over the support variables
  Rational rhs{0};
  std::string label;
};

struct GBSpec {
  int n = 0;
  std::vector<Rational> c;
  Rational offset{0};
  std::vector<GBSpecConstraint> constraints;

  GBProblem to_problem() const;
};

enum class InstanceKind { PO, NPO, GB };

struct Instance {
  InstanceKind kind = InstanceKind::PO;
  std::optional<POProblem> po;
  std::optional<NPOProblem> npo;
  std::optional<GBSpec> gb;
};

/// Variable indices are 1-based in files, 0-based in memory; graph vertices
/// are 0-based everywhere. Coefficients are integers, decimal strings, or
/// "num/den" strings.
Rational json_to_rational(const nlohmann::json& j);
nlohmann::json rational_to_json(const Rational& q);

Polynomial json_to_polynomial(const nlohmann::json& terms);
nlohmann::json polynomial_to_json(const Polynomial& p);

Instance parse_instance(const nlohmann::json& j);
Instance load_instance(const std::string& path);

nlohmann::json po_to_json(const POProblem& problem);
nlohmann::json npo_to_json(const NPOProblem& problem);
nlohmann::json gb_to_json(const GBSpec& spec);
nlohmann::json instance_to_json(const Instance& instance);

/// Decomposition files: {"nodes":[{"id":..., "bag":[...]}], "edges":[[i,j]...]}.
/// Node ids must be 0..k-1; bag entries are graph vertices for network
/// instances and 1-based variable indices for flat and binary instances
/// (`one_based_bags` selects the latter convention).
TreeDecomposition parse_decomposition(const nlohmann::json& j, bool one_based_bags);
TreeDecomposition load_decomposition(const std::string& path, bool one_based_bags);
nlohmann::json decomposition_to_json(const TreeDecomposition& td, bool one_based_bags);

/// Deterministic human-readable LP text (Minimize / Subject To / Bounds-free,
/// all variables implicitly >= 0), exact rational coefficients.
std::string lp_to_text(const LPModel& model);

nlohmann::json stats_to_json(const PipelineStats& stats);
nlohmann::json mixture_to_json(const Mixture& mixture);
/// Full solution report: status, objective, recovered point (1-based keys),
/// extracted binary assignment, scaled violation, stats.
nlohmann::json solution_to_json(const PipelineResult& result);
nlohmann::json solution_to_json(const NpoResult& result);

}  // namespace twlp

#endif
