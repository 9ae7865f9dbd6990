#include "twlp/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace twlp {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw ParseError(what); }

int to_int(const json& j, const char* what) {
  if (!j.is_number_integer()) parse_fail(std::string(what) + " must be an integer");
  return j.get<int>();
}

Sense parse_sense(const json& j) {
  if (!j.is_string()) parse_fail("sense must be a string");
  std::string s = j.get<std::string>();
  if (s == ">=") return Sense::Ge;
  if (s == "=") return Sense::Eq;
  parse_fail("unsupported sense \"" + s + "\" (only \">=\" and \"=\")");
}

std::string sense_string(Sense s) { return s == Sense::Ge ? ">=" : "="; }

std::vector<Rational> parse_objective(const json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    parse_fail("c must be an array of length n");
  std::vector<Rational> c;
  c.reserve(n);
  for (const auto& e : j) c.push_back(json_to_rational(e));
  return c;
}

POProblem parse_po(const json& j) {
  int n = to_int(j.at("n"), "n");
  int p = to_int(j.at("p"), "p");
  std::vector<Rational> c = parse_objective(j.at("c"), n);
  std::vector<Constraint> cons;
  for (const auto& cj : j.at("constraints")) {
    Constraint con;
    con.sense = parse_sense(cj.at("sense"));
    con.poly = json_to_polynomial(cj.at("terms"));
    if (con.poly.max_index() >= n)
      throw StructuralError("constraint references variable beyond n");
    cons.push_back(std::move(con));
  }
  return POProblem(n, p, std::move(c), std::move(cons));
}

NPOProblem parse_npo(const json& j) {
  NPOProblem npo;
  npo.num_vars = to_int(j.at("n"), "n");
  npo.num_binary = to_int(j.at("p"), "p");
  npo.objective = parse_objective(j.at("c"), npo.num_vars);
  const json& gj = j.at("graph");
  int nv = to_int(gj.at("n"), "graph.n");
  npo.graph = Graph(nv);
  for (const auto& e : gj.at("edges")) {
    if (!e.is_array() || e.size() != 2) parse_fail("edge must be a pair");
    npo.graph.add_edge(to_int(e[0], "edge endpoint"), to_int(e[1], "edge endpoint"));
  }
  npo.vertex_vars.assign(nv, {});
  for (const auto& [key, arr] : j.at("vertex_vars").items()) {
    int v = std::stoi(key);
    if (v < 0 || v >= nv) throw StructuralError("vertex_vars key out of range");
    for (const auto& e : arr) {
      int x = to_int(e, "variable index") - 1;
      if (x < 0 || x >= npo.num_vars) throw StructuralError("vertex variable out of range");
      npo.vertex_vars[v].insert(x);
    }
  }
  for (const auto& cj : j.at("constraints")) {
    NPOConstraint con;
    con.at = to_int(cj.at("at"), "at");
    con.sense = parse_sense(cj.at("sense"));
    for (const auto& [key, terms] : cj.at("terms").items()) {
      // key "(u,v)": one endpoint is the holder, the other the neighbor
      if (key.size() < 5 || key.front() != '(' || key.back() != ')')
        parse_fail("term key must look like \"(u,v)\"");
      auto comma = key.find(',');
      if (comma == std::string::npos) parse_fail("term key must look like \"(u,v)\"");
      int a = std::stoi(key.substr(1, comma - 1));
      int b = std::stoi(key.substr(comma + 1, key.size() - comma - 2));
      int neighbor = a == con.at ? b : a;
      if (a != con.at && b != con.at)
        throw StructuralError("term key does not mention the holding vertex");
      con.terms[neighbor] = json_to_polynomial(terms);
    }
    npo.constraints.push_back(std::move(con));
  }
  npo.validate();
  return npo;
}

GBSpec parse_gb(const json& j) {
  GBSpec spec;
  spec.n = to_int(j.at("n"), "n");
  spec.c = parse_objective(j.at("c"), spec.n);
  if (j.contains("offset")) spec.offset = json_to_rational(j.at("offset"));
  for (const auto& cj : j.at("constraints")) {
    GBSpecConstraint con;
    for (const auto& e : cj.at("support")) {
      int x = to_int(e, "support index") - 1;
      if (x < 0 || x >= spec.n) throw StructuralError("support index out of range");
      con.support.push_back(x);
    }
    std::sort(con.support.begin(), con.support.end());
    if (std::adjacent_find(con.support.begin(), con.support.end()) != con.support.end())
      throw StructuralError("duplicate support index");
    if (cj.contains("label")) con.label = cj.at("label").get<std::string>();
    if (cj.contains("accept")) {
      std::vector<unsigned> acc;
      for (const auto& e : cj.at("accept")) {
        long long m = e.get<long long>();
        if (m < 0 || m >= (1LL << con.support.size()))
          throw StructuralError("accepted mask out of range");
        acc.push_back(static_cast<unsigned>(m));
      }
      std::sort(acc.begin(), acc.end());
      acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
      con.accepted = std::move(acc);
    } else if (cj.contains("poly")) {
      con.poly = json_to_polynomial(cj.at("poly"));
      con.rhs = cj.contains("rhs") ? json_to_rational(cj.at("rhs")) : Rational(0);
      std::set<int> sup = con.poly->support();
      for (int x : sup)
        if (!std::binary_search(con.support.begin(), con.support.end(), x))
          throw StructuralError("predicate polynomial escapes the stated support");
    } else {
      parse_fail("constraint needs either \"accept\" or \"poly\"");
    }
    spec.constraints.push_back(std::move(con));
  }
  return spec;
}

json term_array(const Polynomial& p) {
  json arr = json::array();
  for (const auto& [m, coef] : p.terms()) {
    json vars = json::object();
    for (const auto& [j, e] : m.exponents()) vars[std::to_string(j + 1)] = e;
    arr.push_back({{"vars", vars}, {"coef", rational_to_json(coef)}});
  }
  return arr;
}

}  // namespace

Rational json_to_rational(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) {
    Rational q(j.get<double>());
    q.canonicalize();
    return q;
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  parse_fail("expected a number or a rational string");
}

json rational_to_json(const Rational& q) { return rational_to_string(q); }

Polynomial json_to_polynomial(const json& terms) {
  if (!terms.is_array()) parse_fail("polynomial must be an array of terms");
  Polynomial p;
  for (const auto& t : terms) {
    std::map<int, int> exps;
    for (const auto& [key, e] : t.at("vars").items()) {
      int j = std::stoi(key) - 1;
      if (j < 0) throw StructuralError("variable index must be >= 1");
      int exp = to_int(e, "exponent");
      if (exp <= 0) throw StructuralError("exponents must be positive");
      exps[j] = exp;
    }
    p.add_term(Monomial(std::move(exps)), json_to_rational(t.at("coef")));
  }
  return p;
}

json polynomial_to_json(const Polynomial& p) { return term_array(p); }

GBProblem GBSpec::to_problem() const {
  std::vector<GBConstraint> cons;
  for (const auto& sc : constraints) {
    GBConstraint gc;
    gc.support = sc.support;
    gc.label = sc.label;
    if (sc.accepted) {
      std::vector<unsigned> acc = *sc.accepted;
      gc.oracle = [acc](const std::vector<bool>& bits) {
        unsigned mask = 0;
        for (size_t b = 0; b < bits.size(); ++b)
          if (bits[b]) mask |= 1u << b;
        return std::binary_search(acc.begin(), acc.end(), mask);
      };
    } else {
      Polynomial f = *sc.poly;
      Rational r = sc.rhs;
      std::vector<int> sup = sc.support;
      gc.oracle = [f, r, sup](const std::vector<bool>& bits) {
        std::map<int, Rational> x;
        for (size_t i = 0; i < sup.size(); ++i) x[sup[i]] = bits[i] ? 1 : 0;
        return f.evaluate(x) >= r;
      };
    }
    cons.push_back(std::move(gc));
  }
  return GBProblem(n, c, std::move(cons), offset);
}

Instance parse_instance(const json& j) {
  try {
    if (!j.is_object() || !j.contains("type")) parse_fail("instance needs a \"type\" field");
    std::string type = j.at("type").get<std::string>();
    Instance inst;
    if (type == "po") {
      inst.kind = InstanceKind::PO;
      inst.po = parse_po(j);
    } else if (type == "npo") {
      inst.kind = InstanceKind::NPO;
      inst.npo = parse_npo(j);
    } else if (type == "gb") {
      inst.kind = InstanceKind::GB;
      inst.gb = parse_gb(j);
    } else {
      parse_fail("unknown instance type \"" + type + "\"");
    }
    return inst;
  } catch (const json::exception& e) {
    parse_fail(e.what());
  } catch (const std::invalid_argument& e) {
    parse_fail(std::string("bad numeric field: ") + e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
  return parse_instance(j);
}

json po_to_json(const POProblem& problem) {
  json cons = json::array();
  for (const auto& c : problem.constraints())
    cons.push_back({{"sense", sense_string(c.sense)}, {"terms", term_array(c.poly)}});
  json cj = json::array();
  for (const auto& v : problem.objective()) cj.push_back(rational_to_json(v));
  return {{"type", "po"},
          {"n", problem.num_vars()},
          {"p", problem.num_binary()},
          {"c", cj},
          {"constraints", cons}};
}

json npo_to_json(const NPOProblem& problem) {
  json edges = json::array();
  for (const auto& [u, v] : problem.graph.edges()) edges.push_back({u, v});
  json vv = json::object();
  for (int v = 0; v < problem.graph.num_vertices(); ++v) {
    json arr = json::array();
    for (int x : problem.vertex_vars[v]) arr.push_back(x + 1);
    vv[std::to_string(v)] = arr;
  }
  json cons = json::array();
  for (const auto& c : problem.constraints) {
    json terms = json::object();
    for (const auto& [nb, p] : c.terms)
      terms["(" + std::to_string(c.at) + "," + std::to_string(nb) + ")"] = term_array(p);
    cons.push_back({{"at", c.at}, {"sense", sense_string(c.sense)}, {"terms", terms}});
  }
  json cj = json::array();
  for (const auto& v : problem.objective) cj.push_back(rational_to_json(v));
  return {{"type", "npo"},
          {"n", problem.num_vars},
          {"p", problem.num_binary},
          {"c", cj},
          {"graph", {{"n", problem.graph.num_vertices()}, {"edges", edges}}},
          {"vertex_vars", vv},
          {"constraints", cons}};
}

json gb_to_json(const GBSpec& spec) {
  json cons = json::array();
  for (const auto& c : spec.constraints) {
    json sup = json::array();
    for (int x : c.support) sup.push_back(x + 1);
    json cj = {{"support", sup}};
    if (!c.label.empty()) cj["label"] = c.label;
    if (c.accepted) {
      json acc = json::array();
      for (unsigned m : *c.accepted) acc.push_back(m);
      cj["accept"] = acc;
    } else {
      cj["poly"] = term_array(*c.poly);
      cj["rhs"] = rational_to_json(c.rhs);
    }
    cons.push_back(std::move(cj));
  }
  json cj = json::array();
  for (const auto& v : spec.c) cj.push_back(rational_to_json(v));
  json out = {{"type", "gb"}, {"n", spec.n}, {"c", cj}, {"constraints", cons}};
  if (spec.offset != 0) out["offset"] = rational_to_json(spec.offset);
  return out;
}

json instance_to_json(const Instance& instance) {
  switch (instance.kind) {
    case InstanceKind::PO:
      return po_to_json(*instance.po);
    case InstanceKind::NPO:
      return npo_to_json(*instance.npo);
    case InstanceKind::GB:
      return gb_to_json(*instance.gb);
  }
  throw StructuralError("unreachable");
}

TreeDecomposition parse_decomposition(const json& j, bool one_based_bags) {
  try {
    const json& nodes = j.at("nodes");
    int k = static_cast<int>(nodes.size());
    TreeDecomposition td;
    td.tree = Graph(k);
    td.bags.assign(std::max(k, 0), {});
    std::vector<bool> seen(k, false);
    for (const auto& nj : nodes) {
      int id = to_int(nj.at("id"), "node id");
      if (id < 0 || id >= k || seen[id])
        throw StructuralError("node ids must be exactly 0..k-1, no repeats");
      seen[id] = true;
      for (const auto& e : nj.at("bag")) {
        int v = to_int(e, "bag entry") - (one_based_bags ? 1 : 0);
        if (v < 0) throw StructuralError("bag entry out of range");
        td.bags[id].insert(v);
      }
    }
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) parse_fail("edge must be a pair");
      td.tree.add_edge(to_int(e[0], "tree edge"), to_int(e[1], "tree edge"));
    }
    return td;
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
}

TreeDecomposition load_decomposition(const std::string& path, bool one_based_bags) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
  return parse_decomposition(j, one_based_bags);
}

json decomposition_to_json(const TreeDecomposition& td, bool one_based_bags) {
  json nodes = json::array();
  for (int t = 0; t < td.num_nodes(); ++t) {
    json bag = json::array();
    for (int v : td.bags[t]) bag.push_back(v + (one_based_bags ? 1 : 0));
    nodes.push_back({{"id", t}, {"bag", bag}});
  }
  json edges = json::array();
  for (const auto& [a, b] : td.tree.edges()) edges.push_back({a, b});
  return {{"nodes", nodes}, {"edges", edges}};
}

namespace {

void append_expr(std::ostringstream& out,
                 const std::vector<std::pair<std::string, Rational>>& terms) {
  bool first = true;
  for (const auto& [name, c] : terms) {
    if (c == 0) continue;
    Rational a = rational_abs(c);
    if (first) {
      if (c < 0) out << "- ";
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    out << rational_to_string(a) << " " << name;
  }
  if (first) out << "0";
}

}  // namespace

std::string lp_to_text(const LPModel& model) {
  std::ostringstream out;
  out << "\\ " << model.vars.size() << " variables, " << model.rows.size() << " rows\n";
  if (model.objective_offset != 0)
    out << "\\ objective offset: " << rational_to_string(model.objective_offset) << "\n";
  out << "Minimize\n obj: ";
  std::vector<std::pair<std::string, Rational>> obj;
  for (const auto& v : model.vars)
    if (v.objective != 0) obj.emplace_back(v.name, v.objective);
  append_expr(out, obj);
  out << "\nSubject To\n";
  for (const auto& r : model.rows) {
    out << " " << r.name << ": ";
    std::vector<std::pair<std::string, Rational>> terms;
    for (const auto& [j, co] : r.coefs) terms.emplace_back(model.vars[j].name, co);
    append_expr(out, terms);
    out << (r.sense == Sense::Eq ? " = " : " >= ") << rational_to_string(r.rhs) << "\n";
  }
  out << "End\n";
  return out.str();
}

json stats_to_json(const PipelineStats& stats) {
  return {{"omega_input", stats.omega_input},
          {"omega", stats.omega},
          {"L", stats.L},
          {"gamma", rational_to_json(stats.gamma)},
          {"delta", rational_to_json(stats.delta)},
          {"theta", rational_to_json(stats.theta)},
          {"bag_sizes", stats.bag_sizes},
          {"ft_sizes", stats.ft_sizes},
          {"oracle_queries", stats.oracle_queries},
          {"lp_rows", stats.lp_rows},
          {"lp_cols", stats.lp_cols},
          {"split_count", stats.split_count}};
}

json mixture_to_json(const Mixture& mixture) {
  json atoms = json::array();
  for (const auto& [w, x] : mixture.atoms) {
    std::string bits;
    for (bool b : x) bits += b ? '1' : '0';
    atoms.push_back({{"weight", rational_to_json(w)}, {"point", bits}});
  }
  return atoms;
}

namespace {

std::string status_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal:
      return "optimal";
    case LPStatus::Infeasible:
      return "infeasible";
    case LPStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

}  // namespace

json solution_to_json(const PipelineResult& result) {
  json out = {{"status", status_string(result.status)}, {"stats", stats_to_json(result.stats)}};
  if (!result.solved) return out;
  out["objective"] = rational_to_json(result.objective);
  json point = json::array();
  for (const auto& v : result.point) point.push_back(rational_to_json(v));
  out["point"] = point;
  std::string bits;
  for (bool b : result.gb_point) bits += b ? '1' : '0';
  out["gb_point"] = bits;
  out["violation"] = rational_to_json(result.violation);
  if (!result.mixture.atoms.empty()) out["mixture"] = mixture_to_json(result.mixture);
  return out;
}

json solution_to_json(const NpoResult& result) {
  json out = solution_to_json(result.flat_result);
  out["theta"] = rational_to_json(result.theta);
  if (result.flat_result.solved) {
    json point = json::array();
    for (const auto& v : result.point) point.push_back(rational_to_json(v));
    out["point"] = point;
    out["violation"] = rational_to_json(result.violation);
  }
  return out;
}

}  // namespace twlp
