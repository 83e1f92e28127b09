#include "dqv/weyl.hpp"

#include <stdexcept>

namespace dqv {

FormalSeries delta(const FormalSeries& a) {
  FormalSeries r(a.model());
  int d = a.model()->dim;
  for (const auto& [m, c] : a.terms()) {
    for (int i = 0; i < d; ++i) {
      if (m.fiber[i] == 0) continue;
      // th^i * (rest of theta): zero if already present, else count
      // generators below i for the left-multiplication sign.
      if (m.theta & (1u << i)) continue;
      int below = __builtin_popcount(m.theta & ((1u << i) - 1));
      Monomial n = m;
      n.fiber[i] -= 1;
      n.theta |= 1u << i;
      Rational f = c * m.fiber[i];
      r.add_term(n, (below & 1) ? -f : f);
    }
  }
  return r;
}

FormalSeries delta_inv(const FormalSeries& a) {
  FormalSeries r(a.model());
  int d = a.model()->dim;
  for (const auto& [m, c] : a.terms()) {
    int p = m.fiber_degree();
    int q = m.form_degree();
    if (p + q == 0) continue;
    Rational scale = c / (p + q);
    for (int k = 0; k < d; ++k) {
      int sg = theta_left_derive_sign(m.theta, k);
      if (sg == 0) continue;
      Monomial n = m;
      n.theta &= ~(1u << k);
      n.fiber[k] += 1;
      r.add_term(n, sg > 0 ? scale : -scale);
    }
  }
  return r;
}

FormalSeries chi(const FormalSeries& a) { return a.chi(); }

FormalSeries hodge_residual(const FormalSeries& a) {
  return a - chi(a) - delta(delta_inv(a)) - delta_inv(delta(a));
}

FormalSeries theta_derive(int i, const FormalSeries& f) {
  if (i < 1 || i > f.model()->dim) throw std::out_of_range("theta_derive index");
  FormalSeries r(f.model());
  for (const auto& [m, c] : f.terms()) {
    int sg = theta_left_derive_sign(m.theta, i - 1);
    if (sg == 0) continue;
    Monomial n = m;
    n.theta &= ~(1u << (i - 1));
    r.add_term(n, sg > 0 ? c : Rational(-c));
  }
  return r;
}

FormalSeries fiber_derive(int i, const FormalSeries& f) {
  if (i < 1 || i > f.model()->dim) throw std::out_of_range("fiber_derive index");
  FormalSeries r(f.model());
  for (const auto& [m, c] : f.terms()) {
    if (m.fiber[i - 1] == 0) continue;
    Monomial n = m;
    n.fiber[i - 1] -= 1;
    r.add_term(n, c * m.fiber[i - 1]);
  }
  return r;
}

FormalSeries fiber_derive_multi(const std::vector<int>& alpha, const FormalSeries& f) {
  FormalSeries r = f;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (int k = 0; k < alpha[i]; ++k) r = fiber_derive(static_cast<int>(i) + 1, r);
  return r;
}

FormalSeries base_derive(int i, const FormalSeries& f) {
  if (i < 1 || i > f.model()->dim) throw std::out_of_range("base_derive index");
  FormalSeries r(f.model());
  bool torus = f.model()->kind == ModelKind::Torus;
  for (const auto& [m, c] : f.terms()) {
    if (m.base[i - 1] == 0) continue;
    Monomial n = m;
    if (!torus) n.base[i - 1] -= 1;
    r.add_term(n, c * m.base[i - 1]);
  }
  return r;
}

FormalSeries base_derive_multi(const std::vector<int>& alpha, const FormalSeries& f) {
  FormalSeries r = f;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (int k = 0; k < alpha[i]; ++k) r = base_derive(static_cast<int>(i) + 1, r);
  return r;
}

}  // namespace dqv
