#pragma once

#include <functional>
#include <vector>

#include "dqv/hochschild.hpp"
#include "dqv/matrix.hpp"
#include "dqv/poisson.hpp"

namespace dqv {

// One bidifferential summand c * D^{da} (x) D^{db} of a correction term.
struct BiTerm {
  std::vector<int> da, db;
  Rational c;
};

// Star product a * b = ab + sum_k hbar^k B_k(a, b) with base-coefficient
// bidifferential corrections B_k, k = 1..hbar_max. Immutable once built.
class StarProduct {
 public:
  StarProduct() = default;
  StarProduct(ModelPtr model, std::vector<std::vector<BiTerm>> corrections);

  const ModelPtr& model() const { return model_; }
  int order() const { return static_cast<int>(raw_.size()); }
  const std::vector<BiTerm>& correction(int k) const { return raw_.at(k - 1); }

  // B_k as an arity-2 base-acting cochain.
  Cochain correction_cochain(int k) const;

 private:
  ModelPtr model_;
  std::vector<std::vector<BiTerm>> raw_;  // raw_[k-1] holds B_k
};

// Weyl-symmetric Moyal product of a constant Poisson bivector:
// B_k = (1 / (2^k k!)) (pi^{ij} d_i (x) d_j)^k.
StarProduct moyal_star(const Polyvector& pi1);

// Same series on the torus, with the Euler derivations u^i d/du^i in the
// role of d_i; on Fourier modes it multiplies by a truncated exponential.
StarProduct moyal_torus(const Polyvector& pi1);

FormalSeries star_mul(const FormalSeries& a, const FormalSeries& b, const StarProduct& s);
MatrixSeries mat_star_mul(const MatrixSeries& A, const MatrixSeries& B, const StarProduct& s);

// True iff every stored B_k differentiates at most k times in each slot.
bool naturality_check(const StarProduct& s);

// The fiberwise product: the same constant-coefficient series acting in the
// y-variables. diamond_mul is the plain product; fiber_product packages it
// as an arity-2 fiber cochain carrying the suspension sign of Cochain::mu.
FormalSeries diamond_mul(const FormalSeries& a, const FormalSeries& b, const StarProduct& s);
MatrixSeries mat_diamond_mul(const MatrixSeries& A, const MatrixSeries& B, const StarProduct& s);
Cochain fiber_product(const StarProduct& s, int nsize);

using MatMul = std::function<MatrixSeries(const MatrixSeries&, const MatrixSeries&)>;

// Inverse of A = I + Z, Z of filtration weight >= 1, by the geometric
// series sum (-Z)^k; terminates by filtration.
MatrixSeries mat_neumann_inverse(const MatrixSeries& A, const MatMul& mul);

// (I + Z)^{-1/2} = sum_k binom(-1/2, k) Z^k, Z of filtration weight >= 1.
MatrixSeries mat_binomial_invsqrt(const MatrixSeries& Z, const MatMul& mul);

// Lift of a pointwise idempotent q to a star idempotent:
// Q = 1/2 + (q - 1/2) * (1 + 4(q*q - q))^{-1/2}.
MatrixSeries idempotent_lift(const MatrixSeries& q, const StarProduct& s);

// Path of star idempotents joining two lifts with equal principal part,
// obtained by feeding P^0_t = (1-t)P + tQ through the lifting formula.
MatrixSeries idempotent_path(const MatrixSeries& P, const MatrixSeries& Q,
                             const StarProduct& s);

// d_t P_t - [P_t, P_t * d_tP_t - d_tP_t * P_t]; identically zero on
// idempotent paths.
MatrixSeries path_derivative_residual(const MatrixSeries& Pt, const StarProduct& s);

// hbar = 0 restriction.
MatrixSeries principal_symbol(const MatrixSeries& P);

// Lowest component of the Chern character: the matrix trace, regarded as a
// degree-0 chain representative.
FormalSeries ch00(const MatrixSeries& P);

}  // namespace dqv
