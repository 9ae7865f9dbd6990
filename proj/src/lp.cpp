#include "twlp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace twlp {

namespace {

// Dense exact simplex over the standardized system A x = b, x >= 0, b >= 0.
class Tableau {
 public:
  // columns: structural | surplus | artificial
  int m, n_struct, n_surplus, n_total;
  std::vector<std::vector<Rational>> a;  // m x n_total
  std::vector<Rational> b;               // m
  std::vector<int> basis;                // m, column index
  std::vector<bool> barred;              // columns barred from entering

  void pivot(int row, int col) {
    Rational piv = a[row][col];
    for (auto& e : a[row]) e /= piv;
    b[row] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == row || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (int j = 0; j < n_total; ++j)
        if (a[row][j] != 0) a[i][j] -= f * a[row][j];
      b[i] -= f * b[row];
    }
    basis[row] = col;
  }

  // Minimizes cost c over the current basis with Bland's rule.
  // Returns false if unbounded.
  bool run(const std::vector<Rational>& c) {
    // reduced cost row
    std::vector<Rational> z = c;
    Rational z0(0);
    for (int i = 0; i < m; ++i) {
      if (z[basis[i]] == 0) continue;
      Rational f = z[basis[i]];
      for (int j = 0; j < n_total; ++j)
        if (a[i][j] != 0) z[j] -= f * a[i][j];
      z0 -= f * b[i];
    }
    while (true) {
      int enter = -1;
      for (int j = 0; j < n_total; ++j)
        if (!barred[j] && z[j] < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (int i = 0; i < m; ++i) {
        if (a[i][enter] <= 0) continue;
        Rational ratio = b[i] / a[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter);
      // update reduced costs
      Rational f = z[enter];
      if (f != 0) {
        for (int j = 0; j < n_total; ++j)
          if (a[leave][j] != 0) z[j] -= f * a[leave][j];
        z0 -= f * b[leave];
      }
    }
  }
};

// Solves y^T B = c_B by Gaussian elimination (B given column-wise).
std::vector<Rational> solve_transposed(std::vector<std::vector<Rational>> cols,
                                       std::vector<Rational> rhs) {
  int m = static_cast<int>(rhs.size());
  // Build the system B^T y = c_B: row k of B^T is column k of B.
  std::vector<std::vector<Rational>> mat(m, std::vector<Rational>(m + 1, Rational(0)));
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) mat[k][i] = cols[k][i];
    mat[k][m] = rhs[k];
  }
  for (int col = 0, row = 0; col < m && row < m; ++col) {
    int piv = -1;
    for (int i = row; i < m; ++i)
      if (mat[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(mat[piv], mat[row]);
    Rational d = mat[row][col];
    for (auto& e : mat[row]) e /= d;
    for (int i = 0; i < m; ++i) {
      if (i == row || mat[i][col] == 0) continue;
      Rational f = mat[i][col];
      for (int j = col; j <= m; ++j) mat[i][j] -= f * mat[row][j];
    }
    ++row;
  }
  std::vector<Rational> y(m, Rational(0));
  for (int i = 0; i < m; ++i) {
    int lead = -1;
    for (int j = 0; j < m; ++j)
      if (mat[i][j] != 0) {
        lead = j;
        break;
      }
    if (lead >= 0) y[lead] = mat[i][m];
  }
  return y;
}

// The simplex body below requires linearly independent rows: with dependent
// equality rows the final basis can be singular over the pristine matrix and
// the dual reconstruction breaks down. Inequality rows always carry a private
// surplus column, so only equality rows can participate in a dependency.
LPSolution solve_independent(const LPModel& model);

}  // namespace

LPSolution solve(const LPModel& model) {
  int nvars = static_cast<int>(model.vars.size());
  std::vector<int> kept;
  std::vector<std::vector<Rational>> echelon;  // reduced kept equality rows
  std::vector<int> lead_col;
  LPModel reduced = model;
  reduced.rows.clear();
  for (size_t i = 0; i < model.rows.size(); ++i) {
    const auto& r = model.rows[i];
    if (r.sense != Sense::Eq) {
      kept.push_back(static_cast<int>(i));
      reduced.rows.push_back(r);
      continue;
    }
    std::vector<Rational> v(nvars + 1, Rational(0));
    for (const auto& [j, co] : r.coefs) v[j] += co;
    v[nvars] = r.rhs;
    for (size_t k = 0; k < echelon.size(); ++k) {
      int c = lead_col[k];
      if (v[c] == 0) continue;
      Rational f = v[c] / echelon[k][c];
      for (int j = 0; j <= nvars; ++j)
        if (echelon[k][j] != 0) v[j] -= f * echelon[k][j];
    }
    int lead = -1;
    for (int j = 0; j < nvars; ++j)
      if (v[j] != 0) {
        lead = j;
        break;
      }
    if (lead < 0) {
      if (v[nvars] != 0) {
        // combination of earlier equalities contradicts this one
        LPSolution sol;
        sol.status = LPStatus::Infeasible;
        return sol;
      }
      continue;  // redundant: implied by the kept equalities, dual weight 0
    }
    echelon.push_back(std::move(v));
    lead_col.push_back(lead);
    kept.push_back(static_cast<int>(i));
    reduced.rows.push_back(r);
  }

  LPSolution sol = solve_independent(reduced);
  if (sol.status != LPStatus::Optimal) return sol;
  std::vector<Rational> duals(model.rows.size(), Rational(0));
  for (size_t k = 0; k < kept.size(); ++k) duals[kept[k]] = sol.duals[k];
  sol.duals = std::move(duals);
  return sol;
}

namespace {

LPSolution solve_independent(const LPModel& model) {
  int nvars = static_cast<int>(model.vars.size());
  int nrows = static_cast<int>(model.rows.size());
  int nge = 0;
  for (const auto& r : model.rows)
    if (r.sense == Sense::Ge) ++nge;

  Tableau t;
  t.m = nrows;
  t.n_struct = nvars;
  t.n_surplus = nge;
  t.n_total = nvars + nge + nrows;
  t.a.assign(nrows, std::vector<Rational>(t.n_total, Rational(0)));
  t.b.assign(nrows, Rational(0));
  t.basis.resize(nrows);
  t.barred.assign(t.n_total, false);

  std::vector<int> sign(nrows, 1);
  std::vector<int> surplus_col(nrows, -1);
  {
    int s = 0;
    for (int i = 0; i < nrows; ++i) {
      const auto& r = model.rows[i];
      for (const auto& [j, co] : r.coefs) t.a[i][j] += co;
      if (r.sense == Sense::Ge) {
        surplus_col[i] = nvars + s;
        t.a[i][nvars + s] = -1;
        ++s;
      }
      t.b[i] = r.rhs;
      if (t.b[i] < 0) {
        sign[i] = -1;
        for (auto& e : t.a[i]) e = -e;
        t.b[i] = -t.b[i];
      }
      t.a[i][nvars + nge + i] = 1;  // artificial
      t.basis[i] = nvars + nge + i;
    }
  }
  // keep the pristine standardized matrix for the dual solve
  std::vector<std::vector<Rational>> a0 = t.a;
  std::vector<int> orig_row(nrows);
  for (int i = 0; i < nrows; ++i) orig_row[i] = i;

  LPSolution sol;

  // Phase 1
  std::vector<Rational> c1(t.n_total, Rational(0));
  for (int i = 0; i < nrows; ++i) c1[nvars + nge + i] = 1;
  t.run(c1);  // bounded by construction
  Rational infeas(0);
  for (int i = 0; i < t.m; ++i)
    if (t.basis[i] >= nvars + nge) infeas += t.b[i];
  if (infeas > 0) {
    sol.status = LPStatus::Infeasible;
    return sol;
  }
  // drive basic artificials out or drop redundant rows
  std::vector<bool> drop(t.m, false);
  for (int i = 0; i < t.m; ++i) {
    if (t.basis[i] < nvars + nge) continue;
    int col = -1;
    for (int j = 0; j < nvars + nge; ++j)
      if (t.a[i][j] != 0) {
        col = j;
        break;
      }
    if (col >= 0)
      t.pivot(i, col);
    else
      drop[i] = true;
  }
  if (std::any_of(drop.begin(), drop.end(), [](bool d) { return d; })) {
    Tableau t2;
    t2.n_struct = t.n_struct;
    t2.n_surplus = t.n_surplus;
    t2.n_total = t.n_total;
    t2.barred = t.barred;
    std::vector<std::vector<Rational>> a0k;
    std::vector<int> origk;
    for (int i = 0; i < t.m; ++i) {
      if (drop[i]) continue;
      t2.a.push_back(t.a[i]);
      t2.b.push_back(t.b[i]);
      t2.basis.push_back(t.basis[i]);
      a0k.push_back(a0[i]);
      origk.push_back(orig_row[i]);
    }
    t2.m = static_cast<int>(t2.a.size());
    t = std::move(t2);
    a0 = std::move(a0k);
    orig_row = std::move(origk);
  }
  for (int j = nvars + nge; j < t.n_total; ++j) t.barred[j] = true;

  // Phase 2
  std::vector<Rational> c2(t.n_total, Rational(0));
  for (int j = 0; j < nvars; ++j) c2[j] = model.vars[j].objective;
  if (!t.run(c2)) {
    sol.status = LPStatus::Unbounded;
    return sol;
  }

  sol.status = LPStatus::Optimal;
  sol.point.assign(nvars, Rational(0));
  for (int i = 0; i < t.m; ++i)
    if (t.basis[i] < nvars) sol.point[t.basis[i]] = t.b[i];
  sol.objective = model.objective_offset;
  for (int j = 0; j < nvars; ++j) sol.objective += model.vars[j].objective * sol.point[j];

  // dual certificate: solve y^T B = c_B over the surviving standardized rows,
  // then map back onto original rows (dropped redundant rows get dual 0).
  std::vector<std::vector<Rational>> bcols;
  std::vector<Rational> cb;
  for (int i = 0; i < t.m; ++i) {
    std::vector<Rational> col(t.m);
    for (int r = 0; r < t.m; ++r) col[r] = a0[r][t.basis[i]];
    bcols.push_back(std::move(col));
    cb.push_back(t.basis[i] < nvars ? model.vars[t.basis[i]].objective : Rational(0));
  }
  std::vector<Rational> ystd = solve_transposed(std::move(bcols), std::move(cb));
  sol.duals.assign(nrows, Rational(0));
  for (int k = 0; k < t.m; ++k) sol.duals[orig_row[k]] = sign[orig_row[k]] * ystd[k];
  return sol;
}

}  // namespace

bool verify_certificate(const LPModel& model, const LPSolution& sol) {
  if (sol.status != LPStatus::Optimal) return false;
  int nvars = static_cast<int>(model.vars.size());
  if (static_cast<int>(sol.point.size()) != nvars) return false;
  for (const auto& v : sol.point)
    if (v < 0) return false;
  // primal rows
  for (const auto& r : model.rows) {
    Rational lhs(0);
    for (const auto& [j, co] : r.coefs) lhs += co * sol.point[j];
    if (r.sense == Sense::Eq ? lhs != r.rhs : lhs < r.rhs) return false;
  }
  // objective equality
  Rational obj = model.objective_offset;
  for (int j = 0; j < nvars; ++j) obj += model.vars[j].objective * sol.point[j];
  if (obj != sol.objective) return false;
  // dual feasibility and strong duality
  if (static_cast<int>(sol.duals.size()) != static_cast<int>(model.rows.size())) return false;
  std::vector<Rational> ya(nvars, Rational(0));
  Rational yb(0);
  for (size_t i = 0; i < model.rows.size(); ++i) {
    const auto& r = model.rows[i];
    if (r.sense == Sense::Ge && sol.duals[i] < 0) return false;
    for (const auto& [j, co] : r.coefs) ya[j] += sol.duals[i] * co;
    yb += sol.duals[i] * r.rhs;
  }
  for (int j = 0; j < nvars; ++j)
    if (ya[j] > model.vars[j].objective) return false;
  return yb + model.objective_offset == sol.objective;
}

namespace {

constexpr double kFloatEps = 1e-9;

// Double-precision mirror of Tableau; identical layout, tolerance-based tests.
class FloatTableau {
 public:
  int m, n_total;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<int> basis;
  std::vector<bool> barred;

  void pivot(int row, int col) {
    double piv = a[row][col];
    for (auto& e : a[row]) e /= piv;
    b[row] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == row || a[i][col] == 0.0) continue;
      double f = a[i][col];
      for (int j = 0; j < n_total; ++j)
        if (a[row][j] != 0.0) a[i][j] -= f * a[row][j];
      b[i] -= f * b[row];
    }
    basis[row] = col;
  }

  bool run(const std::vector<double>& c) {
    std::vector<double> z = c;
    for (int i = 0; i < m; ++i) {
      if (z[basis[i]] == 0.0) continue;
      double f = z[basis[i]];
      for (int j = 0; j < n_total; ++j)
        if (a[i][j] != 0.0) z[j] -= f * a[i][j];
    }
    while (true) {
      int enter = -1;
      for (int j = 0; j < n_total; ++j)
        if (!barred[j] && z[j] < -kFloatEps) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        if (a[i][enter] <= kFloatEps) continue;
        double ratio = b[i] / a[i][enter];
        if (leave < 0 || ratio < best - kFloatEps ||
            (ratio < best + kFloatEps && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      double f = z[enter];
      if (f != 0.0) {
        for (int j = 0; j < n_total; ++j)
          if (a[leave][j] != 0.0) z[j] -= f * a[leave][j];
      }
    }
  }
};

}  // namespace

LPSolution solve_float(const LPModel& model) {
  int nvars = static_cast<int>(model.vars.size());
  int nrows = static_cast<int>(model.rows.size());
  int nge = 0;
  for (const auto& r : model.rows)
    if (r.sense == Sense::Ge) ++nge;

  FloatTableau t;
  t.m = nrows;
  t.n_total = nvars + nge + nrows;
  t.a.assign(nrows, std::vector<double>(t.n_total, 0.0));
  t.b.assign(nrows, 0.0);
  t.basis.resize(nrows);
  t.barred.assign(t.n_total, false);
  {
    int s = 0;
    for (int i = 0; i < nrows; ++i) {
      const auto& r = model.rows[i];
      for (const auto& [j, co] : r.coefs) t.a[i][j] += co.get_d();
      if (r.sense == Sense::Ge) {
        t.a[i][nvars + s] = -1.0;
        ++s;
      }
      t.b[i] = r.rhs.get_d();
      if (t.b[i] < 0.0) {
        for (auto& e : t.a[i]) e = -e;
        t.b[i] = -t.b[i];
      }
      t.a[i][nvars + nge + i] = 1.0;
      t.basis[i] = nvars + nge + i;
    }
  }

  LPSolution sol;
  std::vector<double> c1(t.n_total, 0.0);
  for (int i = 0; i < nrows; ++i) c1[nvars + nge + i] = 1.0;
  t.run(c1);
  double infeas = 0.0;
  for (int i = 0; i < t.m; ++i)
    if (t.basis[i] >= nvars + nge) infeas += t.b[i];
  if (infeas > kFloatEps * (1 + nrows)) {
    sol.status = LPStatus::Infeasible;
    return sol;
  }
  for (int i = 0; i < t.m; ++i) {
    if (t.basis[i] < nvars + nge) continue;
    for (int j = 0; j < nvars + nge; ++j)
      if (std::abs(t.a[i][j]) > kFloatEps) {
        t.pivot(i, j);
        break;
      }
  }
  for (int j = nvars + nge; j < t.n_total; ++j) t.barred[j] = true;

  std::vector<double> c2(t.n_total, 0.0);
  for (int j = 0; j < nvars; ++j) c2[j] = model.vars[j].objective.get_d();
  if (!t.run(c2)) {
    sol.status = LPStatus::Unbounded;
    return sol;
  }

  sol.status = LPStatus::Optimal;
  sol.point.assign(nvars, Rational(0));
  for (int i = 0; i < t.m; ++i)
    if (t.basis[i] < nvars && t.b[i] > 0.0) sol.point[t.basis[i]] = Rational(mpq_class(t.b[i]));
  sol.objective = model.objective_offset;
  for (int j = 0; j < nvars; ++j) sol.objective += model.vars[j].objective * sol.point[j];
  return sol;
}

namespace {

struct Atom {
  std::map<int, bool> vals;
  Rational w;
};
using AtomList = std::vector<Atom>;

std::string restriction_key(const Atom& a, const std::vector<int>& sep) {
  std::string k;
  for (int j : sep) k += a.vals.at(j) ? '1' : '0';
  return k;
}

AtomList dedupe(AtomList atoms) {
  std::map<std::map<int, bool>, Rational> merged;
  for (auto& a : atoms) merged[a.vals] += a.w;
  AtomList out;
  for (auto& [vals, w] : merged)
    if (w != 0) out.push_back({vals, w});
  return out;
}

AtomList merge(const AtomList& left, const AtomList& right, const std::vector<int>& sep) {
  std::map<std::string, std::pair<AtomList, AtomList>> groups;
  for (const auto& a : left) groups[restriction_key(a, sep)].first.push_back(a);
  for (const auto& a : right) groups[restriction_key(a, sep)].second.push_back(a);
  AtomList out;
  for (auto& [key, pr] : groups) {
    Rational wl(0), wr(0);
    for (const auto& a : pr.first) wl += a.w;
    for (const auto& a : pr.second) wr += a.w;
    if (wl != wr)
      throw StructuralError("inconsistent LP point: separator marginals disagree");
    if (wl == 0) continue;
    for (const auto& a : pr.first)
      for (const auto& b : pr.second) {
        Atom c;
        c.vals = a.vals;
        c.vals.insert(b.vals.begin(), b.vals.end());
        c.w = a.w * b.w / wl;
        out.push_back(std::move(c));
      }
  }
  return dedupe(std::move(out));
}

}  // namespace

Mixture decompose(const LPModel& model, const std::vector<Rational>& point,
                  const TreeDecomposition& td, const FeasibleTable& tables) {
  int nvars = static_cast<int>(model.vars.size());
  if (static_cast<int>(point.size()) != nvars) throw StructuralError("dimension mismatch");
  for (const auto& v : point)
    if (v < 0) throw StructuralError("negative LP value");
  for (const auto& r : model.rows) {
    Rational lhs(0);
    for (const auto& [j, co] : r.coefs) lhs += co * point[j];
    if (r.sense == Sense::Eq ? lhs != r.rhs : lhs < r.rhs)
      throw StructuralError("LP point violates row " + r.name);
  }

  int nodes = td.num_nodes();
  auto node_atoms = [&](int t) {
    AtomList atoms;
    const auto& bag = tables.bag_vars[t];
    for (size_t vi = 0; vi < tables.feasible[t].size(); ++vi) {
      Rational w = point[model.lambda_index[t][vi]];
      if (w == 0) continue;
      Atom a;
      a.w = w;
      unsigned mask = tables.feasible[t][vi];
      for (size_t b = 0; b < bag.size(); ++b) a.vals[bag[b]] = (mask >> b) & 1u;
      atoms.push_back(std::move(a));
    }
    return atoms;
  };

  // root at the lexicographically smallest leaf
  int root = 0;
  for (int t = 0; t < nodes; ++t)
    if (td.tree.degree(t) <= 1) {
      root = t;
      break;
    }

  // post-order merge
  std::vector<int> parent(nodes, -2);
  std::vector<int> order;
  {
    std::vector<int> stack{root};
    parent[root] = -1;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      order.push_back(t);
      for (int s : td.tree.neighbors(t))
        if (parent[s] == -2) {
          parent[s] = t;
          stack.push_back(s);
        }
    }
  }
  std::vector<AtomList> acc(nodes);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int t = *it;
    acc[t] = node_atoms(t);
    for (int s : td.tree.neighbors(t)) {
      if (parent[s] != t) continue;
      std::vector<int> sep;
      std::set_intersection(td.bags[t].begin(), td.bags[t].end(), td.bags[s].begin(),
                            td.bags[s].end(), std::back_inserter(sep));
      acc[t] = merge(acc[t], acc[s], sep);
      acc[s].clear();
    }
  }

  int n = 0;
  for (const auto& bag : tables.bag_vars)
    for (int j : bag) n = std::max(n, j + 1);
  Mixture mix;
  for (const auto& a : acc[root]) {
    std::vector<bool> x(n, false);
    for (const auto& [j, v] : a.vals) x[j] = v;
    mix.atoms.emplace_back(a.w, std::move(x));
  }
  return mix;
}

std::vector<bool> extract(const Mixture& mixture, const std::vector<Rational>& c) {
  if (mixture.atoms.empty()) throw StructuralError("empty mixture");
  const std::vector<bool>* best = nullptr;
  Rational best_cost(0);
  for (const auto& [w, x] : mixture.atoms) {
    Rational cost(0);
    for (size_t j = 0; j < x.size() && j < c.size(); ++j)
      if (x[j]) cost += c[j];
    if (!best || cost < best_cost || (cost == best_cost && x < *best)) {
      best = &x;
      best_cost = cost;
    }
  }
  return *best;
}

}  // namespace twlp
