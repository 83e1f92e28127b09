#include "dqv/rational.hpp"

namespace dqv {

Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  try {
    Rational r(s);
    r.canonicalize();
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator");
    return r;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational literal: " + s);
  }
}

std::string to_string(const Rational& r) { return r.get_str(); }

Rational binomial(const Rational& a, int k) {
  if (k < 0) throw std::invalid_argument("binomial: negative k");
  Rational acc = 1;
  for (int i = 0; i < k; ++i) {
    acc *= (a - i);
    acc /= (i + 1);
  }
  return acc;
}

Rational factorial(int n) {
  Rational acc = 1;
  for (int i = 2; i <= n; ++i) acc *= i;
  return acc;
}

}  // namespace dqv
