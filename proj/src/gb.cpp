#include "twlp/gb.hpp"

#include <algorithm>
#include <map>

namespace twlp {

GBProblem::GBProblem(int n, std::vector<Rational> c, std::vector<GBConstraint> constraints,
                     Rational objective_offset)
    : n_(n), c_(std::move(c)), offset_(std::move(objective_offset)),
      constraints_(std::move(constraints)) {
  if (n < 0 || static_cast<int>(c_.size()) != n) throw StructuralError("objective length != n");
  for (const auto& con : constraints_) {
    if (con.support.empty()) throw StructuralError("empty constraint support");
    if (!std::is_sorted(con.support.begin(), con.support.end()))
      throw StructuralError("constraint support not sorted");
    for (int j : con.support)
      if (j < 0 || j >= n) throw StructuralError("constraint support out of range");
    if (!con.oracle) throw StructuralError("missing constraint oracle");
  }
}

Rational GBProblem::objective_value(const std::vector<bool>& x) const {
  if (static_cast<int>(x.size()) != n_) throw StructuralError("dimension mismatch");
  Rational v = offset_;
  for (int j = 0; j < n_; ++j)
    if (x[j]) v += c_[j];
  return v;
}

bool GBProblem::feasible(const std::vector<bool>& x) const {
  if (static_cast<int>(x.size()) != n_) throw StructuralError("dimension mismatch");
  for (const auto& con : constraints_) {
    std::vector<bool> sub;
    sub.reserve(con.support.size());
    for (int j : con.support) sub.push_back(x[j]);
    if (!con.oracle(sub)) return false;
  }
  return true;
}

Graph intersection_graph(const GBProblem& gb) {
  Graph g(gb.num_vars());
  for (const auto& con : gb.constraints())
    for (size_t a = 0; a < con.support.size(); ++a)
      for (size_t b = a + 1; b < con.support.size(); ++b)
        if (!g.has_edge(con.support[a], con.support[b]))
          g.add_edge(con.support[a], con.support[b]);
  return g;
}

std::vector<int> cover_check(const GBProblem& gb, const TreeDecomposition& td) {
  std::vector<int> host(gb.constraints().size(), -1);
  for (size_t i = 0; i < gb.constraints().size(); ++i) {
    std::set<int> k(gb.constraints()[i].support.begin(), gb.constraints()[i].support.end());
    auto t = find_covering_bag(td, k);
    if (!t)
      throw StructuralError("constraint " + std::to_string(i) +
                            " not covered by any bag (decomposition invalid for this problem)");
    host[i] = *t;
  }
  return host;
}

namespace {

constexpr int kMaxBagBits = 25;

// Full truth table of one constraint: accept[mask] with bit b of mask giving
// the value of support[b]. Exactly 2^{|K|} oracle queries.
std::vector<bool> truth_table(const GBConstraint& con, OracleStats& stats) {
  int k = static_cast<int>(con.support.size());
  if (k > kMaxBagBits) throw CapExceeded("constraint support too large to enumerate");
  std::vector<bool> accept(1u << k);
  std::vector<bool> bits(k);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    for (int b = 0; b < k; ++b) bits[b] = (mask >> b) & 1u;
    accept[mask] = con.oracle(bits);
    ++stats.queries;
  }
  return accept;
}

}  // namespace

FeasibleTable build_feasible_tables(const GBProblem& gb, const TreeDecomposition& td) {
  auto host = cover_check(gb, td);
  (void)host;
  FeasibleTable ft;
  int nodes = td.num_nodes();
  ft.bag_vars.resize(nodes);
  ft.feasible.resize(nodes);
  ft.covered.resize(nodes);

  std::vector<std::vector<bool>> tables(gb.constraints().size());
  for (size_t i = 0; i < gb.constraints().size(); ++i)
    tables[i] = truth_table(gb.constraints()[i], ft.stats);

  for (int t = 0; t < nodes; ++t) {
    ft.bag_vars[t].assign(td.bags[t].begin(), td.bags[t].end());
    const auto& bag = ft.bag_vars[t];
    std::map<int, int> pos;
    for (size_t b = 0; b < bag.size(); ++b) pos[bag[b]] = static_cast<int>(b);
    // constraints fully inside this bag, with positions of their support bits
    std::vector<std::pair<int, std::vector<int>>> local;
    for (size_t i = 0; i < gb.constraints().size(); ++i) {
      const auto& supp = gb.constraints()[i].support;
      bool inside = std::all_of(supp.begin(), supp.end(),
                                [&](int j) { return pos.count(j) > 0; });
      if (!inside) continue;
      ft.covered[t].push_back(static_cast<int>(i));
      std::vector<int> where;
      for (int j : supp) where.push_back(pos[j]);
      local.emplace_back(static_cast<int>(i), std::move(where));
    }
    int k = static_cast<int>(bag.size());
    if (k > kMaxBagBits) throw CapExceeded("bag too large to enumerate");
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      bool ok = true;
      for (const auto& [i, where] : local) {
        unsigned sub = 0;
        for (size_t b = 0; b < where.size(); ++b)
          if ((mask >> where[b]) & 1u) sub |= 1u << b;
        if (!tables[i][sub]) {
          ok = false;
          break;
        }
      }
      if (ok) ft.feasible[t].push_back(mask);
    }
  }
  return ft;
}

int LPModel::add_var(std::string name, VarRole role, Rational obj) {
  vars.push_back({std::move(name), role, std::move(obj)});
  return static_cast<int>(vars.size()) - 1;
}

namespace {

std::string mask_string(unsigned mask, int k) {
  std::string s(k, '0');
  for (int b = 0; b < k; ++b)
    if ((mask >> b) & 1u) s[b] = '1';
  return s;
}

std::string set_name(const std::set<int>& s) {
  if (s.empty()) return "e";
  std::string out;
  for (int j : s) {
    if (!out.empty()) out += '.';
    out += std::to_string(j + 1);
  }
  return out;
}

}  // namespace

LPModel build_lpz(const GBProblem& gb, const TreeDecomposition& td, const FeasibleTable& ft) {
  LPModel lp;
  lp.objective_offset = gb.objective_offset();
  int nodes = td.num_nodes();
  // lambda variables
  std::vector<std::vector<int>> lambda(nodes);
  for (int t = 0; t < nodes; ++t) {
    int k = static_cast<int>(ft.bag_vars[t].size());
    for (unsigned v : ft.feasible[t])
      lambda[t].push_back(
          lp.add_var("l_" + std::to_string(t) + "_" + mask_string(v, k), LPModel::VarRole::Lambda));
  }
  // Z variables, deduplicated by canonical sorted set
  std::map<std::set<int>, int> zvar;
  auto z_of = [&](const std::set<int>& s) {
    auto it = zvar.find(s);
    if (it != zvar.end()) return it->second;
    Rational obj(0);
    if (s.size() == 1) obj = gb.objective()[*s.begin()];
    int id = lp.add_var("Z_" + set_name(s), LPModel::VarRole::ZSet, obj);
    zvar.emplace(s, id);
    return id;
  };
  for (int t = 0; t < nodes; ++t) {
    const auto& bag = ft.bag_vars[t];
    int k = static_cast<int>(bag.size());
    // consistency row per subset S of the bag
    for (unsigned smask = 0; smask < (1u << k); ++smask) {
      std::set<int> s;
      for (int b = 0; b < k; ++b)
        if ((smask >> b) & 1u) s.insert(bag[b]);
      LPModel::Row row;
      row.name = "cons_t" + std::to_string(t) + "_Z_" + set_name(s);
      row.coefs.emplace_back(z_of(s), Rational(1));
      for (size_t vi = 0; vi < ft.feasible[t].size(); ++vi)
        if ((ft.feasible[t][vi] & smask) == smask)
          row.coefs.emplace_back(lambda[t][vi], Rational(-1));
      row.sense = Sense::Eq;
      row.rhs = 0;
      lp.rows.push_back(std::move(row));
    }
    // convexity
    LPModel::Row conv;
    conv.name = "conv_t" + std::to_string(t);
    for (int id : lambda[t]) conv.coefs.emplace_back(id, Rational(1));
    conv.sense = Sense::Eq;
    conv.rhs = 1;
    lp.rows.push_back(std::move(conv));
  }
  lp.lambda_index = lambda;
  // make sure every objective variable exists even if its vertex sits in no bag
  for (int j = 0; j < gb.num_vars(); ++j)
    if (gb.objective()[j] != 0 && !zvar.count({j}))
      throw StructuralError("objective variable " + std::to_string(j) + " missing from all bags");
  return lp;
}

LPModel build_lpgb(const GBProblem& gb, const TreeDecomposition& td, const FeasibleTable& ft) {
  LPModel lp;
  lp.objective_offset = gb.objective_offset();
  int nodes = td.num_nodes();
  std::vector<std::vector<int>> lambda(nodes);
  for (int t = 0; t < nodes; ++t) {
    int k = static_cast<int>(ft.bag_vars[t].size());
    for (unsigned v : ft.feasible[t])
      lambda[t].push_back(
          lp.add_var("l_" + std::to_string(t) + "_" + mask_string(v, k), LPModel::VarRole::Lambda));
  }
  using Key = std::pair<std::set<int>, std::set<int>>;
  std::map<Key, int> xvar;
  auto x_of = [&](const std::set<int>& y, const std::set<int>& n) {
    Key key{y, n};
    auto it = xvar.find(key);
    if (it != xvar.end()) return it->second;
    Rational obj(0);
    if (y.size() == 1 && n.empty()) obj = gb.objective()[*y.begin()];
    int id = lp.add_var("X_" + set_name(y) + "_" + set_name(n), LPModel::VarRole::XYN, obj);
    xvar.emplace(std::move(key), id);
    return id;
  };

  // Omega_t: (empty,empty), singletons, and all partitions of each tree-edge
  // separator; deduplicated per node.
  std::vector<std::set<Key>> omega(nodes);
  for (int t = 0; t < nodes; ++t) {
    omega[t].insert(Key{{}, {}});
    for (int j : ft.bag_vars[t]) omega[t].insert(Key{{j}, {}});
  }
  for (auto [s, t] : td.tree.edges()) {
    std::vector<int> sep;
    std::set_intersection(td.bags[s].begin(), td.bags[s].end(), td.bags[t].begin(),
                          td.bags[t].end(), std::back_inserter(sep));
    int d = static_cast<int>(sep.size());
    if (d > kMaxBagBits) throw CapExceeded("separator too large to enumerate");
    for (unsigned ymask = 0; ymask < (1u << d); ++ymask) {
      std::set<int> y, n;
      for (int b = 0; b < d; ++b)
        ((ymask >> b) & 1u ? y : n).insert(sep[b]);
      Key key{y, n};
      omega[s].insert(key);
      omega[t].insert(key);
    }
  }

  for (int t = 0; t < nodes; ++t) {
    const auto& bag = ft.bag_vars[t];
    std::map<int, int> pos;
    for (size_t b = 0; b < bag.size(); ++b) pos[bag[b]] = static_cast<int>(b);
    for (const auto& [y, n] : omega[t]) {
      unsigned ymask = 0, nmask = 0;
      for (int j : y) ymask |= 1u << pos.at(j);
      for (int j : n) nmask |= 1u << pos.at(j);
      LPModel::Row row;
      row.name = "cons_t" + std::to_string(t) + "_X_" + set_name(y) + "_" + set_name(n);
      row.coefs.emplace_back(x_of(y, n), Rational(1));
      for (size_t vi = 0; vi < ft.feasible[t].size(); ++vi) {
        unsigned v = ft.feasible[t][vi];
        if ((v & ymask) == ymask && (v & nmask) == 0)
          row.coefs.emplace_back(lambda[t][vi], Rational(-1));
      }
      row.sense = Sense::Eq;
      row.rhs = 0;
      lp.rows.push_back(std::move(row));
    }
  }
  // normalization: X[empty,empty] = 1 (replaces per-node convexity)
  LPModel::Row norm;
  norm.name = "norm";
  norm.coefs.emplace_back(x_of({}, {}), Rational(1));
  norm.sense = Sense::Eq;
  norm.rhs = 1;
  lp.rows.push_back(std::move(norm));
  lp.lambda_index = lambda;

  for (int j = 0; j < gb.num_vars(); ++j)
    if (gb.objective()[j] != 0 && !xvar.count(Key{{j}, {}}))
      throw StructuralError("objective variable " + std::to_string(j) + " missing from all bags");
  return lp;
}

GBConstraint poly_ge_constraint(const Polynomial& f, const Rational& rhs, std::string label) {
  GBConstraint con;
  auto supp = f.support();
  if (supp.empty()) throw StructuralError("constant polynomial constraint");
  con.support.assign(supp.begin(), supp.end());
  con.label = std::move(label);
  std::vector<int> support = con.support;
  con.oracle = [f, rhs, support](const std::vector<bool>& bits) {
    std::map<int, Rational> x;
    for (size_t k = 0; k < support.size(); ++k) x[support[k]] = bits[k] ? 1 : 0;
    return f.evaluate(x) >= rhs;
  };
  return con;
}

}  // namespace twlp
