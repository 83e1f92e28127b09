#pragma once

#include <map>
#include <string>

#include "dqv/model.hpp"
#include "dqv/rational.hpp"

namespace dqv {

// Exact truncated series: finite map Monomial -> Rational with zero
// coefficients absent. Terms falling outside the model cutoffs are dropped
// on insertion; on the plane the drop set is an ideal, so truncation is a
// ring congruence. Torus base modes are never truncated (Laurent arithmetic
// stays exact); base_max only bounds scenario inputs and basis enumeration.
class FormalSeries {
 public:
  FormalSeries() = default;
  explicit FormalSeries(ModelPtr model) : model_(std::move(model)) {}
  FormalSeries(ModelPtr model, const Rational& c);

  static FormalSeries one(ModelPtr model) { return FormalSeries(model, 1); }
  static FormalSeries monomial(ModelPtr model, Monomial m, const Rational& c = 1);
  // Generators by index (1-based).
  static FormalSeries coordinate(ModelPtr model, int i, int power = 1);
  static FormalSeries fiber(ModelPtr model, int i, int power = 1);
  static FormalSeries theta(ModelPtr model, int i);
  static FormalSeries hbar(ModelPtr model, int power = 1);
  static FormalSeries tvar(ModelPtr model, int power = 1);

  const ModelPtr& model() const { return model_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Inserts c * m, dropping terms outside the cutoffs.
  void add_term(const Monomial& m, const Rational& c);

  Rational coeff(const Monomial& m) const;

  FormalSeries& operator+=(const FormalSeries& o);
  FormalSeries& operator-=(const FormalSeries& o);
  friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) { return a += b; }
  friend FormalSeries operator-(FormalSeries a, const FormalSeries& b) { return a -= b; }
  FormalSeries operator-() const;
  friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b);
  friend FormalSeries operator*(const Rational& c, FormalSeries a);
  FormalSeries& operator*=(const FormalSeries& o) { return *this = *this * o; }
  FormalSeries& operator*=(const Rational& c);

  friend bool operator==(const FormalSeries& a, const FormalSeries& b);

  // y = th = 0 restriction (keeps base, hbar, t).
  FormalSeries chi() const;
  // hbar = 0 restriction.
  FormalSeries principal_part() const;
  // Component of given theta form degree.
  FormalSeries form_component(int degree) const;
  // Even/odd theta parity split.
  FormalSeries parity_component(int parity) const;
  // Coefficient series of h^k (the h factor removed).
  FormalSeries hbar_coefficient(int k) const;
  // Substitutes t := value (a plain rational), dropping the t grading.
  FormalSeries eval_t(const Rational& value) const;
  // Formal d/dt.
  FormalSeries t_derivative() const;

  int max_form_degree() const;
  int max_fiber_degree() const;
  bool base_only() const;  // no fiber/theta/t content (hbar allowed)

  // Lowest filtration weight among terms; large value for zero.
  int min_filtration_weight() const;

  std::string str() const;

  void check_same_model(const FormalSeries& o) const;

 private:
  ModelPtr model_;
  std::map<Monomial, Rational> terms_;
};

}  // namespace dqv
