#pragma once

#include <optional>

#include "dqv/matrix.hpp"
#include "dqv/series.hpp"
#include "dqv/weyl.hpp"

namespace dqv {

// Torsion-free connection given by Christoffel symbols Γ^k_{ij}, base-only
// series, symmetric in i,j.  Nonzero Christoffels are supported on the plane
// model only.
struct ConnectionData {
  ModelPtr model;
  std::vector<FormalSeries> gamma;  // gamma[(k*d + i)*d + j]

  static ConnectionData flat(ModelPtr model);
  static ConnectionData make(ModelPtr model, std::vector<FormalSeries> gamma);

  const FormalSeries& at(int k, int i, int j) const;  // 1-based indices
  bool is_flat() const;
};

// Fiberwise vector field sum_l comp[l] d/dy^{l+1}; the components carry theta
// factors, so the field is graded and acts by the graded Leibniz rule
// automatically through the series product.
struct FiberField {
  ModelPtr model;
  std::vector<FormalSeries> comp;

  static FiberField zero(ModelPtr model);
  FormalSeries apply(const FormalSeries& a) const;
  MatrixSeries apply(const MatrixSeries& a) const;
  bool is_zero() const;
};

// Data of a Fedosov differential D = nabla - delta + A, optionally twisted by
// an endomorphism-valued 1-form gamma^E (D^E = D + [gamma^E, .]).
struct FedosovData {
  ConnectionData connection;
  FiberField A;
  std::optional<MatrixSeries> endo_gamma;

  const ModelPtr& model() const { return connection.model; }
};

// nabla = theta^i (d/dx^i - Gamma^k_{ij} y^j d/dy^k).
FormalSeries nabla(const FormalSeries& a, const ConnectionData& conn);
MatrixSeries nabla(const MatrixSeries& a, const ConnectionData& conn);

FormalSeries apply_D(const FormalSeries& a, const FedosovData& fd);
MatrixSeries apply_D(const MatrixSeries& a, const FedosovData& fd);

// Solves A = delta_inv(R + [nabla, A] + 1/2 [A, A]) by iteration in fiber
// degree, R the curvature of nabla as a fiberwise vector field; checks the
// D^2 = 0 postcondition on the generators y^l.
FedosovData build_A(const ConnectionData& conn);

// Unique D-flat prolongation of a base-only series: a = f + delta_inv((nabla + A) a).
FormalSeries flat_lift(const FormalSeries& f, const FedosovData& fd);
MatrixSeries flat_lift(const MatrixSeries& f, const FedosovData& fd);

// Solves gamma = Gamma_E + delta_inv(nabla gamma + A(gamma) + gamma * gamma)
// for a base-only endomorphism-valued 1-form Gamma_E; the result makes
// D^E = D + [gamma, .] square to zero.
MatrixSeries gamma_E(const MatrixSeries& Gamma_E, const FedosovData& fd);

// Given D^E-closed P of form degree >= 1, returns S with D^E S = P via
// S = -delta_inv(P) + delta_inv(nabla S + A(S) + [gamma^E, S]).
FormalSeries solve_DE(const FormalSeries& P, const FedosovData& fd);
MatrixSeries solve_DE(const MatrixSeries& P, const FedosovData& fd);

// Residual of D^2 = 0 on the fiber generator y^l (1-based); identically zero
// below the truncation boundary.
FormalSeries d_squared_residual(int l, const FedosovData& fd);

// True when every term has fiber degree >= floor: the part of a residual that
// truncation of the fiber expansion cannot account for is zero.
bool zero_below_fiber(const FormalSeries& s, int floor);
bool zero_below_fiber(const MatrixSeries& s, int floor);

}  // namespace dqv
