#include "twlp/poly.hpp"

#include <algorithm>

namespace twlp {

Monomial::Monomial(std::map<int, int> exps) : exps_(std::move(exps)) {
  for (auto it = exps_.begin(); it != exps_.end();) {
    if (it->first < 0) throw StructuralError("negative variable index in monomial");
    if (it->second < 0) throw StructuralError("negative exponent in monomial");
    if (it->second == 0)
      it = exps_.erase(it);
    else
      ++it;
  }
}

int Monomial::degree() const {
  int d = 0;
  for (const auto& [j, e] : exps_) d += e;
  return d;
}

int Monomial::degree_from(int first_continuous) const {
  int d = 0;
  for (const auto& [j, e] : exps_)
    if (j >= first_continuous) d += e;
  return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
  std::map<int, int> exps = exps_;
  for (const auto& [j, e] : other.exps_) exps[j] += e;
  return Monomial(std::move(exps));
}

Polynomial Polynomial::constant(const Rational& c) {
  Polynomial p;
  p.add_term(Monomial(), c);
  return p;
}

Polynomial Polynomial::variable(int j) { return term(1, j); }

Polynomial Polynomial::term(const Rational& c, int j) {
  Polynomial p;
  p.add_term(Monomial(std::map<int, int>{{j, 1}}), c);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& coef) {
  if (coef == 0) return;
  auto [it, inserted] = terms_.emplace(m, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational Polynomial::one_norm() const {
  Rational s(0);
  for (const auto& [m, c] : terms_) s += rational_abs(c);
  return s;
}

Rational Polynomial::evaluate(const std::map<int, Rational>& x) const {
  Rational total(0);
  for (const auto& [m, c] : terms_) {
    Rational v = c;
    for (const auto& [j, e] : m.exponents()) {
      auto it = x.find(j);
      if (it == x.end()) throw StructuralError("missing value for variable " + std::to_string(j));
      v *= rational_pow(it->second, static_cast<unsigned>(e));
    }
    total += v;
  }
  return total;
}

Rational Polynomial::evaluate(const std::vector<Rational>& x) const {
  Rational total(0);
  for (const auto& [m, c] : terms_) {
    Rational v = c;
    for (const auto& [j, e] : m.exponents()) {
      if (j >= static_cast<int>(x.size()))
        throw StructuralError("missing value for variable " + std::to_string(j));
      v *= rational_pow(x[j], static_cast<unsigned>(e));
    }
    total += v;
  }
  return total;
}

std::set<int> Polynomial::support() const {
  std::set<int> s;
  for (const auto& [m, c] : terms_)
    for (const auto& [j, e] : m.exponents()) s.insert(j);
  return s;
}

int Polynomial::max_index() const {
  int mx = -1;
  for (const auto& [m, c] : terms_)
    for (const auto& [j, e] : m.exponents()) mx = std::max(mx, j);
  return mx;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
  return r;
}

Polynomial Polynomial::operator*(const Rational& k) const {
  Polynomial r;
  if (k == 0) return r;
  for (const auto& [m, c] : terms_) r.add_term(m, c * k);
  return r;
}

POProblem::POProblem(int n, int p, std::vector<Rational> c, std::vector<Constraint> constraints)
    : n_(n), p_(p), c_(std::move(c)), constraints_(std::move(constraints)) {
  if (n < 0 || p < 0 || p > n) throw StructuralError("bad variable counts");
  if (static_cast<int>(c_.size()) != n) throw StructuralError("objective length != n");
  pi_ = 0;
  for (const auto& con : constraints_) {
    if (con.poly.max_index() >= n) throw StructuralError("constraint references variable out of range");
    for (const auto& [m, coef] : con.poly.terms())
      pi_ = std::max(pi_, m.degree_from(p_));
  }
}

Rational POProblem::objective_value(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != n_) throw StructuralError("dimension mismatch");
  Rational v(0);
  for (int j = 0; j < n_; ++j) v += c_[j] * x[j];
  return v;
}

Rational POProblem::objective_one_norm() const {
  Rational s(0);
  for (const auto& cj : c_) s += rational_abs(cj);
  return s;
}

Rational POProblem::scaled_violation(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != n_) throw StructuralError("dimension mismatch");
  Rational worst(0);
  for (const auto& con : constraints_) {
    Rational val = con.poly.evaluate(x);
    Rational viol = con.sense == Sense::Eq ? rational_abs(val) : (val < 0 ? Rational(-val) : Rational(0));
    if (viol == 0) continue;
    Rational norm = con.poly.one_norm();
    if (norm == 0) continue;  // f identically zero cannot be violated
    viol /= norm;
    if (viol > worst) worst = viol;
  }
  return worst;
}

}  // namespace twlp
