#include "dqv/matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace dqv {

MatrixSeries::MatrixSeries(ModelPtr model, int n) : model_(std::move(model)), n_(n) {
  if (n < 1) throw std::invalid_argument("matrix size < 1");
  e_.assign(static_cast<std::size_t>(n) * n, FormalSeries(model_));
}

MatrixSeries MatrixSeries::identity(ModelPtr model, int n) {
  MatrixSeries m(model, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = FormalSeries::one(model);
  return m;
}

MatrixSeries MatrixSeries::scalar(const FormalSeries& s, int n) {
  MatrixSeries m(s.model(), n);
  for (int i = 0; i < n; ++i) m.at(i, i) = s;
  return m;
}

bool MatrixSeries::is_zero() const {
  for (const auto& s : e_)
    if (!s.is_zero()) return false;
  return true;
}

MatrixSeries& MatrixSeries::operator+=(const MatrixSeries& o) {
  if (n_ != o.n_) throw std::invalid_argument("matrix size mismatch");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
  return *this;
}

MatrixSeries& MatrixSeries::operator-=(const MatrixSeries& o) {
  if (n_ != o.n_) throw std::invalid_argument("matrix size mismatch");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
  return *this;
}

MatrixSeries MatrixSeries::operator-() const {
  MatrixSeries r = *this;
  for (auto& s : r.e_) s = -s;
  return r;
}

MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("matrix size mismatch");
  MatrixSeries r(a.model_, a.n_);
  for (int i = 0; i < a.n_; ++i)
    for (int k = 0; k < a.n_; ++k) {
      if (a.at(i, k).is_zero()) continue;
      for (int j = 0; j < a.n_; ++j) {
        if (b.at(k, j).is_zero()) continue;
        r.at(i, j) += a.at(i, k) * b.at(k, j);
      }
    }
  return r;
}

MatrixSeries operator*(const Rational& c, MatrixSeries a) {
  for (auto& s : a.e_) s *= c;
  return a;
}

MatrixSeries operator*(const FormalSeries& s, MatrixSeries a) {
  for (auto& x : a.e_) x = s * x;
  return a;
}

bool operator==(const MatrixSeries& a, const MatrixSeries& b) {
  if (a.n_ != b.n_) return false;
  for (std::size_t i = 0; i < a.e_.size(); ++i)
    if (!(a.e_[i] == b.e_[i])) return false;
  return true;
}

MatrixSeries commutator(const MatrixSeries& a, const MatrixSeries& b) {
  return a * b - b * a;
}

FormalSeries MatrixSeries::trace() const {
  FormalSeries t(model_);
  for (int i = 0; i < n_; ++i) t += at(i, i);
  return t;
}

MatrixSeries MatrixSeries::map(const std::function<FormalSeries(const FormalSeries&)>& f) const {
  MatrixSeries r(model_, n_);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = f(e_[i]);
  return r;
}

MatrixSeries MatrixSeries::chi() const {
  return map([](const FormalSeries& s) { return s.chi(); });
}

MatrixSeries MatrixSeries::principal_part() const {
  return map([](const FormalSeries& s) { return s.principal_part(); });
}

MatrixSeries MatrixSeries::parity_component(int parity) const {
  return map([parity](const FormalSeries& s) { return s.parity_component(parity); });
}

MatrixSeries MatrixSeries::form_component(int degree) const {
  return map([degree](const FormalSeries& s) { return s.form_component(degree); });
}

MatrixSeries MatrixSeries::eval_t(const Rational& value) const {
  return map([&value](const FormalSeries& s) { return s.eval_t(value); });
}

MatrixSeries MatrixSeries::t_derivative() const {
  return map([](const FormalSeries& s) { return s.t_derivative(); });
}

int MatrixSeries::max_form_degree() const {
  int d = 0;
  for (const auto& s : e_) d = std::max(d, s.max_form_degree());
  return d;
}

bool MatrixSeries::base_only() const {
  for (const auto& s : e_)
    if (!s.base_only()) return false;
  return true;
}

std::string MatrixSeries::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < n_; ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < n_; ++j) os << (j ? ", " : "") << at(i, j).str();
  }
  os << "]";
  return os.str();
}

MatrixSeries graded_commutator(const MatrixSeries& a, const MatrixSeries& b) {
  MatrixSeries r = a * b;
  for (int pa = 0; pa <= 1; ++pa)
    for (int pb = 0; pb <= 1; ++pb) {
      MatrixSeries t = b.parity_component(pb) * a.parity_component(pa);
      if (pa & pb)
        r += t;
      else
        r -= t;
    }
  return r;
}

MatrixSeries mat_mul_with(const MatrixSeries& a, const MatrixSeries& b,
                          const std::function<FormalSeries(const FormalSeries&, const FormalSeries&)>& mul) {
  if (a.size() != b.size()) throw std::invalid_argument("matrix size mismatch");
  MatrixSeries r(a.model(), a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int k = 0; k < a.size(); ++k) {
      if (a.at(i, k).is_zero()) continue;
      for (int j = 0; j < a.size(); ++j) {
        if (b.at(k, j).is_zero()) continue;
        r.at(i, j) += mul(a.at(i, k), b.at(k, j));
      }
    }
  return r;
}

}  // namespace dqv
