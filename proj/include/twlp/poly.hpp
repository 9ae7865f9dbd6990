#ifndef TWLP_POLY_HPP
#define TWLP_POLY_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "twlp/rational.hpp"

namespace twlp {

/// Raised when an operation is handed structurally inconsistent data
/// (missing variable entries, index out of range, dimension mismatch).
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an enumeration would exceed the configured size cap
/// (oversized bags or separators, brute-force limits).
struct CapExceeded : StructuralError {
  using StructuralError::StructuralError;
};

/// A monomial prod_j x_j^{e_j}, stored as variable index -> positive exponent.
/// The empty map is the constant monomial.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::map<int, int> exps);

  const std::map<int, int>& exponents() const { return exps_; }
  int degree() const;
  /// Total degree restricted to variables with index >= first_continuous.
  int degree_from(int first_continuous) const;
  bool is_constant() const { return exps_.empty(); }

  Monomial operator*(const Monomial& other) const;
  bool operator<(const Monomial& o) const { return exps_ < o.exps_; }
  bool operator==(const Monomial& o) const { return exps_ == o.exps_; }

 private:
  std::map<int, int> exps_;
};

/// Sparse multivariate polynomial with exact rational coefficients.
/// Zero coefficients are never stored.
class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial constant(const Rational& c);
  static Polynomial variable(int j);
  /// c * x_j
  static Polynomial term(const Rational& c, int j);

  void add_term(const Monomial& m, const Rational& coef);

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Sum of |coefficients|, exact.
  Rational one_norm() const;

  /// Exact evaluation; every variable in the support must have an entry in x.
  Rational evaluate(const std::map<int, Rational>& x) const;
  Rational evaluate(const std::vector<Rational>& x) const;

  /// Variable indices appearing in some term with nonzero coefficient.
  std::set<int> support() const;

  int max_index() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& k) const;
  Polynomial operator-() const { return *this * Rational(-1); }
  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

 private:
  std::map<Monomial, Rational> terms_;
};

enum class Sense { Ge, Eq };  // f >= 0 or f = 0

struct Constraint {
  Polynomial poly;
  Sense sense = Sense::Ge;
};

/// Mixed-binary polynomial optimization over the unit box: minimize c^T x
/// subject to polynomial constraints, with x_j binary for j < p and
/// x_j in [0,1] for j >= p.
class POProblem {
 public:
  POProblem(int n, int p, std::vector<Rational> c, std::vector<Constraint> constraints);

  int num_vars() const { return n_; }
  int num_binary() const { return p_; }
  const std::vector<Rational>& objective() const { return c_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  /// Max total degree over continuous variables across all monomials.
  int pi() const { return pi_; }

  bool is_binary(int j) const { return j < p_; }

  Rational objective_value(const std::vector<Rational>& x) const;
  Rational objective_one_norm() const;

  /// Max over constraints of the scaled violation: for f >= 0 this is
  /// max(0, -f(x)) / ||f||_1, for f = 0 it is |f(x)| / ||f||_1.
  /// A point is exactly feasible iff the result is 0.
  Rational scaled_violation(const std::vector<Rational>& x) const;

 private:
  int n_;
  int p_;
  std::vector<Rational> c_;
  std::vector<Constraint> constraints_;
  int pi_;
};

}  // namespace twlp

#endif
