#pragma once

#include <functional>
#include <vector>

#include "dqv/series.hpp"

namespace dqv {

// N x N matrix with FormalSeries entries.
class MatrixSeries {
 public:
  MatrixSeries() = default;
  MatrixSeries(ModelPtr model, int n);
  static MatrixSeries identity(ModelPtr model, int n);
  static MatrixSeries scalar(const FormalSeries& s, int n);  // s * I

  int size() const { return n_; }
  const ModelPtr& model() const { return model_; }
  FormalSeries& at(int i, int j) { return e_[i * n_ + j]; }
  const FormalSeries& at(int i, int j) const { return e_[i * n_ + j]; }

  bool is_zero() const;

  MatrixSeries& operator+=(const MatrixSeries& o);
  MatrixSeries& operator-=(const MatrixSeries& o);
  friend MatrixSeries operator+(MatrixSeries a, const MatrixSeries& b) { return a += b; }
  friend MatrixSeries operator-(MatrixSeries a, const MatrixSeries& b) { return a -= b; }
  MatrixSeries operator-() const;
  friend MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b);
  friend MatrixSeries operator*(const Rational& c, MatrixSeries a);
  friend MatrixSeries operator*(const FormalSeries& s, MatrixSeries a);
  friend bool operator==(const MatrixSeries& a, const MatrixSeries& b);

  // Graded commutator with the ordinary product: ab - (-1)^{|a||b|} ba is
  // handled by callers; this is the plain ab - ba.
  friend MatrixSeries commutator(const MatrixSeries& a, const MatrixSeries& b);

  FormalSeries trace() const;
  MatrixSeries map(const std::function<FormalSeries(const FormalSeries&)>& f) const;
  MatrixSeries chi() const;
  MatrixSeries principal_part() const;
  MatrixSeries parity_component(int parity) const;
  MatrixSeries form_component(int degree) const;
  MatrixSeries eval_t(const Rational& value) const;
  MatrixSeries t_derivative() const;

  int max_form_degree() const;
  bool base_only() const;

  std::string str() const;

 private:
  ModelPtr model_;
  int n_ = 0;
  std::vector<FormalSeries> e_;
};

// Graded commutator a*b - (-1)^{|a||b|} b*a with respect to the form degree,
// extended bilinearly over the parity components of both arguments.
MatrixSeries graded_commutator(const MatrixSeries& a, const MatrixSeries& b);

// Product where scalar entries are multiplied by `mul` instead of the
// pointwise product (used for star / diamond matrix algebras).
MatrixSeries mat_mul_with(const MatrixSeries& a, const MatrixSeries& b,
                          const std::function<FormalSeries(const FormalSeries&, const FormalSeries&)>& mul);

}  // namespace dqv
