#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace dqv {

// Exact rational coefficient type. mpq_class keeps values canonical
// (positive denominator, reduced) after canonicalize().
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Parses "p", "-p", or "p/q". Throws std::invalid_argument on malformed input.
Rational rational_from_string(const std::string& s);

// Serializes as "p" or "p/q" with q > 1.
std::string to_string(const Rational& r);

// Generalized binomial coefficient binom(a, k) for rational a, integer k >= 0.
Rational binomial(const Rational& a, int k);

Rational factorial(int n);

}  // namespace dqv
