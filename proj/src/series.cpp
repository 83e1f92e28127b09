#include "dqv/series.hpp"

#include <sstream>
#include <stdexcept>

namespace dqv {

namespace {

bool in_bounds(const Monomial& m, const ModelConfig& cfg) {
  if (m.fiber_degree() > cfg.fiber_max) return false;
  if (m.hbar > cfg.hbar_max) return false;
  if (m.tpow > cfg.t_max) return false;
  if (cfg.kind == ModelKind::Plane) {
    for (int v : m.base)
      if (v < 0) throw std::invalid_argument("plane monomial with negative base exponent");
    if (m.base_degree() > cfg.base_max) return false;
  }
  return true;
}

}  // namespace

FormalSeries::FormalSeries(ModelPtr model, const Rational& c) : model_(std::move(model)) {
  if (c != 0) terms_.emplace(unit_monomial(*model_), c);
}

FormalSeries FormalSeries::monomial(ModelPtr model, Monomial m, const Rational& c) {
  FormalSeries s(model);
  s.add_term(m, c);
  return s;
}

FormalSeries FormalSeries::coordinate(ModelPtr model, int i, int power) {
  if (i < 1 || i > model->dim) throw std::out_of_range("coordinate index");
  Monomial m = unit_monomial(*model);
  m.base[i - 1] = power;
  return monomial(model, m);
}

FormalSeries FormalSeries::fiber(ModelPtr model, int i, int power) {
  if (i < 1 || i > model->dim) throw std::out_of_range("fiber index");
  Monomial m = unit_monomial(*model);
  m.fiber[i - 1] = power;
  return monomial(model, m);
}

FormalSeries FormalSeries::theta(ModelPtr model, int i) {
  if (i < 1 || i > model->dim) throw std::out_of_range("theta index");
  Monomial m = unit_monomial(*model);
  m.theta = 1u << (i - 1);
  return monomial(model, m);
}

FormalSeries FormalSeries::hbar(ModelPtr model, int power) {
  Monomial m = unit_monomial(*model);
  m.hbar = power;
  return monomial(model, m);
}

FormalSeries FormalSeries::tvar(ModelPtr model, int power) {
  Monomial m = unit_monomial(*model);
  m.tpow = power;
  return monomial(model, m);
}

void FormalSeries::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  if (!in_bounds(m, *model_)) return;
  auto [it, fresh] = terms_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational FormalSeries::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void FormalSeries::check_same_model(const FormalSeries& o) const {
  if (!model_ || !o.model_ || !(*model_ == *o.model_))
    throw std::invalid_argument("model mismatch between series operands");
}

FormalSeries& FormalSeries::operator+=(const FormalSeries& o) {
  check_same_model(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

FormalSeries& FormalSeries::operator-=(const FormalSeries& o) {
  check_same_model(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

FormalSeries FormalSeries::operator-() const {
  FormalSeries r(model_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

FormalSeries& FormalSeries::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

FormalSeries operator*(const Rational& c, FormalSeries a) {
  a *= c;
  return a;
}

FormalSeries operator*(const FormalSeries& a, const FormalSeries& b) {
  a.check_same_model(b);
  FormalSeries r(a.model_);
  const ModelConfig& cfg = *a.model_;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      auto tp = theta_mul(ma.theta, mb.theta);
      if (tp.sign == 0) continue;
      Monomial m;
      m.base.resize(cfg.dim);
      m.fiber.resize(cfg.dim);
      for (int i = 0; i < cfg.dim; ++i) {
        m.base[i] = ma.base[i] + mb.base[i];
        m.fiber[i] = ma.fiber[i] + mb.fiber[i];
      }
      m.theta = tp.mask;
      m.hbar = ma.hbar + mb.hbar;
      m.tpow = ma.tpow + mb.tpow;
      Rational prod = ca * cb;
      r.add_term(m, tp.sign > 0 ? prod : Rational(-prod));
    }
  }
  return r;
}

bool operator==(const FormalSeries& a, const FormalSeries& b) {
  a.check_same_model(b);
  return a.terms_ == b.terms_;
}

FormalSeries FormalSeries::chi() const {
  FormalSeries r(model_);
  for (const auto& [m, c] : terms_)
    if (m.theta == 0 && m.fiber_degree() == 0) r.terms_.emplace(m, c);
  return r;
}

FormalSeries FormalSeries::principal_part() const {
  FormalSeries r(model_);
  for (const auto& [m, c] : terms_)
    if (m.hbar == 0) r.terms_.emplace(m, c);
  return r;
}

FormalSeries FormalSeries::form_component(int degree) const {
  FormalSeries r(model_);
  for (const auto& [m, c] : terms_)
    if (m.form_degree() == degree) r.terms_.emplace(m, c);
  return r;
}

FormalSeries FormalSeries::parity_component(int parity) const {
  FormalSeries r(model_);
  for (const auto& [m, c] : terms_)
    if ((m.form_degree() & 1) == parity) r.terms_.emplace(m, c);
  return r;
}

FormalSeries FormalSeries::hbar_coefficient(int k) const {
  FormalSeries r(model_);
  for (const auto& [m, c] : terms_)
    if (m.hbar == k) {
      Monomial n = m;
      n.hbar = 0;
      r.terms_.emplace(n, c);
    }
  return r;
}

FormalSeries FormalSeries::eval_t(const Rational& value) const {
  FormalSeries r(model_);
  for (const auto& [m, c] : terms_) {
    Rational f = c;
    for (int i = 0; i < m.tpow; ++i) f *= value;
    Monomial n = m;
    n.tpow = 0;
    r.add_term(n, f);
  }
  return r;
}

FormalSeries FormalSeries::t_derivative() const {
  FormalSeries r(model_);
  for (const auto& [m, c] : terms_)
    if (m.tpow > 0) {
      Monomial n = m;
      n.tpow -= 1;
      r.add_term(n, c * m.tpow);
    }
  return r;
}

int FormalSeries::max_form_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.form_degree());
  return d;
}

int FormalSeries::max_fiber_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.fiber_degree());
  return d;
}

bool FormalSeries::base_only() const {
  for (const auto& [m, c] : terms_)
    if (m.theta != 0 || m.fiber_degree() != 0 || m.tpow != 0) return false;
  return true;
}

int FormalSeries::min_filtration_weight() const {
  int w = 1 << 20;
  for (const auto& [m, c] : terms_) w = std::min(w, filtration_weight(m));
  return w;
}

std::string FormalSeries::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    std::string mono = monomial_to_string(m, *model_);
    if (a == 1 && mono != "1")
      os << mono;
    else if (mono == "1")
      os << to_string(a);
    else
      os << to_string(a) << "*" << mono;
  }
  return os.str();
}

}  // namespace dqv
