#pragma once

#include <map>
#include <vector>

#include "dqv/series.hpp"

namespace dqv {

// Polyvector field encoded as a FormalSeries whose theta bits play the role
// of the odd generators xi_i = d/dx^i; base-only coefficients, hbar powers
// allowed, no fiber or t content.
class Polyvector {
 public:
  Polyvector() = default;
  explicit Polyvector(FormalSeries s);

  static Polyvector zero(ModelPtr model) { return Polyvector(FormalSeries(std::move(model))); }

  const FormalSeries& series() const { return val_; }
  const ModelPtr& model() const { return val_.model(); }
  bool is_zero() const { return val_.is_zero(); }

  friend bool operator==(const Polyvector& a, const Polyvector& b) { return a.val_ == b.val_; }

  Polyvector& operator+=(const Polyvector& o) {
    val_ += o.val_;
    return *this;
  }
  friend Polyvector operator*(const Rational& c, Polyvector a) {
    a.val_ *= c;
    return a;
  }

 private:
  FormalSeries val_;
};

// Schouten-Nijenhuis bracket; degree 0 in the shifted grading. [pi,pi] = 0
// characterizes the Jacobi identity of the induced bracket.
Polyvector schouten(const Polyvector& P, const Polyvector& Q);

bool is_poisson(const Polyvector& pi);

// Lichnerowicz differential [pi, .]; requires [pi,pi] = 0.
Polyvector lichnerowicz(const Polyvector& pi, const Polyvector& P);

// de Rham differential d = theta^i d/dx^i on base forms.
FormalSeries de_rham(const FormalSeries& w);

// Koszul differential L_pi = i_pi d - d i_pi, with i_pi of form degree -2.
// Requires [pi,pi] = 0.
FormalSeries koszul(const Polyvector& pi, const FormalSeries& w);

// Canonical reduction modulo L_pi(1-forms): zeroth Poisson homology at the
// configured cutoff. The row space is computed once per (pi, model) and can
// be shared.
class Hp0Reducer {
 public:
  explicit Hp0Reducer(const Polyvector& pi);

  // Canonical representative of f (base + hbar content only) modulo the
  // image of koszul(pi, .); idempotent, linear, kills the image.
  FormalSeries reduce(const FormalSeries& f) const;

  // Dimension of the reduced quotient at the cutoff (hbar stripped).
  int dim() const;

 private:
  ModelPtr model_;
  int h0_ = 0;  // overall hbar power of pi
  // Graded-lex-descending rows; pivot is the first entry of each row.
  std::vector<std::vector<std::pair<Monomial, Rational>>> rows_;
};

FormalSeries hp0_reduce(const FormalSeries& f, const Polyvector& pi);
int hp_dim(const Polyvector& pi);

}  // namespace dqv
