#include "twlp/discretize.hpp"

#include <algorithm>

namespace twlp {

DiscretizationPlan plan(const POProblem& problem, const Rational& epsilon) {
  if (epsilon <= 0 || epsilon >= 1) throw StructuralError("epsilon must lie in (0,1)");
  DiscretizationPlan pl;
  pl.n = problem.num_vars();
  pl.p = problem.num_binary();
  pl.pi = problem.pi();
  if (pl.pi == 0) {
    pl.gamma = epsilon;
    pl.delta = 0;
    pl.L = 0;
    for (int j = pl.p; j < pl.n; ++j)
      pl.fixed_continuous[j] = problem.objective()[j] < 0 ? Rational(1) : Rational(0);
    pl.gb_num_vars = pl.p;
    return pl;
  }
  pl.gamma = epsilon / pl.pi;
  pl.L = 1;
  Rational pow2(2);
  while (pl.gamma * pow2 < 1) {
    ++pl.L;
    pow2 *= 2;
  }
  pl.delta = Rational(1) - rational_pow(Rational(1) - pl.gamma, static_cast<unsigned>(pl.pi));
  int next = pl.p;
  for (int j = pl.p; j < pl.n; ++j) {
    std::vector<int> bits(pl.L);
    for (int h = 0; h < pl.L; ++h) bits[h] = next++;
    pl.var_map[j] = std::move(bits);
  }
  pl.gb_num_vars = next;
  return pl;
}

std::vector<bool> expand(const Rational& r, int L) {
  if (r < 0 || r > 1) throw StructuralError("expand: value outside [0,1]");
  std::vector<bool> z(L, false);
  Rational rem = r;
  Rational place(1, 2);
  for (int h = 0; h < L; ++h) {
    if (rem >= place) {
      z[h] = true;
      rem -= place;
    }
    place /= 2;
  }
  return z;
}

Rational bits_value(const std::vector<bool>& z) {
  Rational v(0), place(1, 2);
  for (bool b : z) {
    if (b) v += place;
    place /= 2;
  }
  return v;
}

std::vector<bool> expand_point(const std::vector<Rational>& x, const DiscretizationPlan& pl) {
  if (static_cast<int>(x.size()) != pl.n) throw StructuralError("dimension mismatch");
  std::vector<bool> bits(pl.gb_num_vars, false);
  for (int j = 0; j < pl.p; ++j) {
    if (x[j] != 0 && x[j] != 1) throw StructuralError("binary coordinate not 0/1");
    bits[j] = x[j] == 1;
  }
  for (const auto& [j, ids] : pl.var_map) {
    auto z = expand(x[j], pl.L);
    for (int h = 0; h < pl.L; ++h) bits[ids[h]] = z[h];
  }
  return bits;
}

namespace {

// Maps a GB support assignment back to PO variable values and tests the
// relaxed inequality sign * f >= -delta * ||f||_1.
GBConstraint relaxed_oracle(const Polynomial& f, int sign, const Rational& delta,
                            const POProblem& po, const DiscretizationPlan& pl,
                            const std::string& label) {
  std::set<int> gb_support;
  std::set<int> po_support = f.support();
  for (int j : po_support) {
    if (po.is_binary(j))
      gb_support.insert(j);
    else
      for (int id : pl.var_map.at(j)) gb_support.insert(id);
  }
  std::vector<int> support(gb_support.begin(), gb_support.end());
  std::map<int, int> pos;
  for (size_t k = 0; k < support.size(); ++k) pos[support[k]] = static_cast<int>(k);
  Rational threshold = -delta * f.one_norm();

  GBConstraint con;
  con.support = support;
  con.label = label;
  int p = po.num_binary();
  con.oracle = [f, sign, threshold, po_support, pos, p, pl](const std::vector<bool>& bits) {
    std::map<int, Rational> x;
    for (int j : po_support) {
      if (j < p) {
        x[j] = bits[pos.at(j)] ? 1 : 0;
      } else {
        Rational v(0), place(1, 2);
        for (int id : pl.var_map.at(j)) {
          if (bits[pos.at(id)]) v += place;
          place /= 2;
        }
        x[j] = v;
      }
    }
    Rational val = f.evaluate(x) * sign;
    return val >= threshold;
  };
  return con;
}

}  // namespace

GBProblem to_gb(const POProblem& problem, const DiscretizationPlan& pl) {
  if (pl.n != problem.num_vars() || pl.p != problem.num_binary())
    throw StructuralError("plan does not match problem");
  std::vector<Rational> c(pl.gb_num_vars, Rational(0));
  for (int j = 0; j < pl.p; ++j) c[j] = problem.objective()[j];
  Rational offset(0);
  for (int j = pl.p; j < pl.n; ++j) {
    auto fix = pl.fixed_continuous.find(j);
    if (fix != pl.fixed_continuous.end()) {
      offset += problem.objective()[j] * fix->second;
    } else {
      Rational place(1, 2);
      for (int id : pl.var_map.at(j)) {
        c[id] = problem.objective()[j] * place;
        place /= 2;
      }
    }
  }

  std::vector<GBConstraint> cons;
  int idx = 0;
  for (const auto& con : problem.constraints()) {
    std::string label = "c" + std::to_string(idx++);
    if (con.poly.support().empty()) {
      // constant constraint: decide now
      Rational v = con.poly.is_zero() ? Rational(0) : con.poly.terms().begin()->second;
      Rational budget = pl.delta * con.poly.one_norm();
      bool ok = con.sense == Sense::Ge ? v >= -budget : rational_abs(v) <= budget;
      if (ok) continue;
      GBConstraint never;
      never.support = {0};
      never.label = label + "_const_infeasible";
      never.oracle = [](const std::vector<bool>&) { return false; };
      cons.push_back(std::move(never));
      continue;
    }
    cons.push_back(relaxed_oracle(con.poly, 1, pl.delta, problem, pl, label));
    if (con.sense == Sense::Eq)
      cons.push_back(relaxed_oracle(con.poly, -1, pl.delta, problem, pl, label + "_neg"));
  }
  return GBProblem(pl.gb_num_vars, std::move(c), std::move(cons), offset);
}

TreeDecomposition lift_decomposition(const TreeDecomposition& td, const DiscretizationPlan& pl) {
  TreeDecomposition out;
  out.tree = td.tree;
  out.bags.reserve(td.bags.size());
  for (const auto& bag : td.bags) {
    std::set<int> lifted;
    for (int j : bag) {
      if (j < pl.p) {
        lifted.insert(j);
      } else if (auto it = pl.var_map.find(j); it != pl.var_map.end()) {
        lifted.insert(it->second.begin(), it->second.end());
      }
      // fixed continuous variables vanish from the GB problem
    }
    out.bags.push_back(std::move(lifted));
  }
  return out;
}

std::vector<Rational> recover(const std::vector<bool>& bits, const DiscretizationPlan& pl) {
  if (static_cast<int>(bits.size()) != pl.gb_num_vars)
    throw StructuralError("dimension mismatch");
  std::vector<Rational> x(pl.n, Rational(0));
  for (int j = 0; j < pl.p; ++j) x[j] = bits[j] ? 1 : 0;
  for (int j = pl.p; j < pl.n; ++j) {
    auto fix = pl.fixed_continuous.find(j);
    if (fix != pl.fixed_continuous.end()) {
      x[j] = fix->second;
    } else {
      Rational v(0), place(1, 2);
      for (int id : pl.var_map.at(j)) {
        if (bits[id]) v += place;
        place /= 2;
      }
      x[j] = v;
    }
  }
  return x;
}

}  // namespace twlp
