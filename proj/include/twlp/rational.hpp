#ifndef TWLP_RATIONAL_HPP
#define TWLP_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace twlp {

using Rational = mpq_class;

/// Parses "num/den", plain integers, or decimal strings ("0.25") into an
/// exact rational.
Rational parse_rational(const std::string& text);

/// Renders as "num/den" ("num" when the denominator is 1).
std::string rational_to_string(const Rational& q);

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// num/den reduced to lowest terms (mpq_class(num, den) alone does not
/// canonicalize, which breaks exact equality).
inline Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// q^e by repeated multiplication, e >= 0.
Rational rational_pow(const Rational& q, unsigned e);

}  // namespace twlp

#endif
