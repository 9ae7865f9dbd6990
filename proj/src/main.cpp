#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "twlp/generators.hpp"
#include "twlp/io.hpp"
#include "twlp/pipeline.hpp"

namespace {

// Exit codes, also documented in --help:
constexpr int kOk = 0;
constexpr int kUsage = 1;       // bad flags (CLI11 default)
constexpr int kParse = 2;       // unreadable or malformed input file
constexpr int kValidation = 3;  // well-formed input violating an invariant
constexpr int kInfeasible = 4;  // problem proved infeasible
constexpr int kCap = 5;         // an enumeration exceeded the configured cap
constexpr int kUnbounded = 6;   // LP unbounded

constexpr const char* kExitDoc =
    "Exit codes: 0 solved, 1 bad flags, 2 input parse error, 3 validation error,\n"
    "4 infeasible, 5 size cap exceeded, 6 unbounded.";

struct SolveOptions {
  std::string file;
  std::string epsilon = "1/8";
  std::string formulation = "lpgb";
  std::string decomposition = "minfill";
  std::string solver = "exact";
  std::vector<std::string> emit;
  std::string out_dir = ".";
  int cap = 25;
};

twlp::RunConfig make_config(const SolveOptions& opt, bool npo_bags) {
  twlp::RunConfig cfg;
  cfg.epsilon = twlp::parse_rational(opt.epsilon);
  if (cfg.epsilon <= 0 || cfg.epsilon >= 1)
    throw twlp::StructuralError("epsilon must lie strictly between 0 and 1");
  if (opt.formulation == "lpz")
    cfg.formulation = twlp::Formulation::LPz;
  else if (opt.formulation == "lpgb")
    cfg.formulation = twlp::Formulation::LPGB;
  else
    throw twlp::StructuralError("formulation must be lpz or lpgb");
  if (opt.decomposition == "minfill") {
    cfg.decomposition = twlp::DecompMethod::MinFill;
  } else if (opt.decomposition == "mindegree") {
    cfg.decomposition = twlp::DecompMethod::MinDegree;
  } else if (opt.decomposition.rfind("file:", 0) == 0) {
    cfg.decomposition = twlp::DecompMethod::Provided;
    cfg.provided_td = twlp::load_decomposition(opt.decomposition.substr(5), !npo_bags);
  } else {
    throw twlp::StructuralError("decomposition must be minfill, mindegree, or file:<path>");
  }
  if (opt.solver == "exact")
    cfg.exact_solver = true;
  else if (opt.solver == "float")
    cfg.exact_solver = false;
  else
    throw twlp::StructuralError("solver must be exact or float");
  cfg.cap = opt.cap;
  return cfg;
}

bool wants(const SolveOptions& opt, const std::string& what) {
  for (const auto& e : opt.emit)
    if (e == what) return true;
  return false;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw twlp::StructuralError("cannot write " + path);
  out << content;
}

std::string artifact_path(const SolveOptions& opt, const std::string& suffix) {
  std::string stem = std::filesystem::path(opt.file).stem().string();
  return (std::filesystem::path(opt.out_dir) / (stem + suffix)).string();
}

int finish(const SolveOptions& opt, const twlp::PipelineResult& res, nlohmann::json solution) {
  if (wants(opt, "lp")) write_file(artifact_path(opt, ".lp"), twlp::lp_to_text(res.lp));
  if (wants(opt, "solution"))
    write_file(artifact_path(opt, ".solution.json"), solution.dump(2) + "\n");
  if (wants(opt, "stats"))
    write_file(artifact_path(opt, ".stats.json"), twlp::stats_to_json(res.stats).dump(2) + "\n");
  if (wants(opt, "mixture"))
    write_file(artifact_path(opt, ".mixture.json"),
               twlp::mixture_to_json(res.mixture).dump(2) + "\n");
  std::cout << solution["status"].get<std::string>();
  if (res.solved)
    std::cout << " objective=" << twlp::rational_to_string(res.objective)
              << " violation=" << solution.value("violation", std::string("0"));
  std::cout << "\n";
  switch (res.status) {
    case twlp::LPStatus::Optimal:
      return kOk;
    case twlp::LPStatus::Infeasible:
      return kInfeasible;
    case twlp::LPStatus::Unbounded:
      return kUnbounded;
  }
  return kValidation;
}

int cmd_solve(const SolveOptions& opt, bool stats_only) {
  twlp::Instance inst = twlp::load_instance(opt.file);
  twlp::RunConfig cfg = make_config(opt, inst.kind == twlp::InstanceKind::NPO);
  cfg.stats_only = stats_only;
  if (inst.kind == twlp::InstanceKind::NPO) {
    twlp::NpoResult res = twlp::run_npo(*inst.npo, cfg);
    if (stats_only) {
      std::cout << twlp::stats_to_json(res.flat_result.stats).dump(2) << "\n";
      return kOk;
    }
    return finish(opt, res.flat_result, twlp::solution_to_json(res));
  }
  twlp::PipelineResult res = inst.kind == twlp::InstanceKind::PO
                                 ? twlp::run_po(*inst.po, cfg)
                                 : twlp::run_gb(inst.gb->to_problem(), cfg);
  if (stats_only) {
    std::cout << twlp::stats_to_json(res.stats).dump(2) << "\n";
    return kOk;
  }
  return finish(opt, res, twlp::solution_to_json(res));
}

struct GenerateOptions {
  std::string family;
  std::string out;
  unsigned seed = 1;
  int n = 5;
  int vertices = 4;
  int columns = 3;
  std::vector<long> numbers;
  long target = 0;
};

int cmd_generate(const GenerateOptions& opt) {
  nlohmann::json j;
  if (opt.family == "knapsack") {
    j = twlp::po_to_json(twlp::gen_knapsack(opt.n, opt.seed));
  } else if (opt.family == "subsetsum-scaled" || opt.family == "subsetsum-unscaled") {
    std::vector<long> a = opt.numbers;
    if (a.empty()) a = {3, 5, 8, 2};
    long sum = 0;
    for (long v : a) sum += v;
    long target = opt.target > 0 ? opt.target : sum / 2;
    j = twlp::po_to_json(
        twlp::gen_subsetsum(a, target, opt.family == "subsetsum-scaled"));
  } else if (opt.family == "fcnf") {
    j = twlp::npo_to_json(twlp::gen_fcnf(opt.vertices, opt.seed).npo);
  } else if (opt.family == "acopf-toy") {
    j = twlp::npo_to_json(twlp::gen_acopf_toy());
  } else if (opt.family == "twtrap") {
    j = twlp::npo_to_json(twlp::gen_twtrap(opt.columns));
  } else {
    throw twlp::StructuralError("unknown family " + opt.family);
  }
  std::string text = j.dump(2) + "\n";
  if (opt.out.empty())
    std::cout << text;
  else
    write_file(opt.out, text);
  return kOk;
}

void add_config_flags(CLI::App* cmd, SolveOptions& opt) {
  cmd->add_option("file", opt.file, "instance file (JSON)")->required();
  cmd->add_option("--epsilon", opt.epsilon, "feasibility tolerance in (0,1), e.g. 1/4");
  cmd->add_option("--formulation", opt.formulation, "lpz or lpgb (default lpgb)");
  cmd->add_option("--decomposition", opt.decomposition,
                  "minfill, mindegree, or file:<path> (default minfill)");
  cmd->add_option("--solver", opt.solver, "exact or float (default exact)");
  cmd->add_option("--emit", opt.emit, "artifacts to write: lp, solution, stats, mixture")
      ->delimiter(',');
  cmd->add_option("--out", opt.out_dir, "directory for emitted artifacts (default .)");
  cmd->add_option("--cap", opt.cap, "largest bag, in bits, that may be enumerated");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("Tree-width-driven LP compiler for polynomial optimization\n") +
               kExitDoc};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  CLI::App* solve = app.add_subcommand("solve", "solve an instance end to end");
  add_config_flags(solve, solve_opt);

  SolveOptions stats_opt;
  CLI::App* stats = app.add_subcommand("stats", "report sizes without solving");
  add_config_flags(stats, stats_opt);

  GenerateOptions gen_opt;
  CLI::App* gen = app.add_subcommand("generate", "emit a fixture instance");
  gen->add_option("family", gen_opt.family,
                  "knapsack, subsetsum-scaled, subsetsum-unscaled, fcnf, acopf-toy, twtrap")
      ->required();
  gen->add_option("--seed", gen_opt.seed, "random seed (default 1)");
  gen->add_option("-n,--items", gen_opt.n, "knapsack item count");
  gen->add_option("--vertices", gen_opt.vertices, "fcnf vertex count");
  gen->add_option("--columns", gen_opt.columns, "twtrap column count");
  gen->add_option("--numbers", gen_opt.numbers, "subset-sum numbers")->delimiter(',');
  gen->add_option("--target", gen_opt.target, "subset-sum target (default half the sum)");
  gen->add_option("--out", gen_opt.out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(solve_opt, false);
    if (stats->parsed()) return cmd_solve(stats_opt, true);
    return cmd_generate(gen_opt);
  } catch (const twlp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const twlp::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCap;
  } catch (const twlp::StructuralError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
}
