#include "dqv/fedosov.hpp"

#include <stdexcept>

namespace dqv {

namespace {

int idx(int d, int k, int i, int j) { return ((k - 1) * d + (i - 1)) * d + (j - 1); }

// The Christoffel part of nabla as a fiberwise vector field:
// comp[k] = -sum_{ij} theta^i Gamma^k_{ij} y^j.
FiberField christoffel_field(const ConnectionData& conn) {
  const int d = conn.model->dim;
  FiberField f = FiberField::zero(conn.model);
  for (int k = 1; k <= d; ++k)
    for (int i = 1; i <= d; ++i)
      for (int j = 1; j <= d; ++j) {
        const FormalSeries& g = conn.at(k, i, j);
        if (g.is_zero()) continue;
        f.comp[k - 1] -= FormalSeries::theta(conn.model, i) * g *
                         FormalSeries::fiber(conn.model, j);
      }
  return f;
}

int max_passes(const ModelConfig& cfg) { return cfg.fiber_max + 3; }

}  // namespace

ConnectionData ConnectionData::flat(ModelPtr model) {
  const int d = model->dim;
  return {model, std::vector<FormalSeries>(static_cast<std::size_t>(d) * d * d,
                                           FormalSeries(model))};
}

ConnectionData ConnectionData::make(ModelPtr model, std::vector<FormalSeries> gamma) {
  const int d = model->dim;
  if (gamma.size() != static_cast<std::size_t>(d) * d * d)
    throw std::invalid_argument("Christoffel array has wrong size");
  ConnectionData conn{model, std::move(gamma)};
  for (int k = 1; k <= d; ++k)
    for (int i = 1; i <= d; ++i)
      for (int j = 1; j <= d; ++j) {
        const FormalSeries& g = conn.at(k, i, j);
        if (!g.base_only() || !(g == g.principal_part()))
          throw std::invalid_argument("Christoffel symbols must be base-only without hbar");
        if (!(g == conn.at(k, j, i)))
          throw std::invalid_argument("Christoffel symbols must be symmetric (torsion free)");
      }
  if (model->kind == ModelKind::Torus && !conn.is_flat())
    throw std::invalid_argument("curved connections are supported on the plane model only");
  return conn;
}

const FormalSeries& ConnectionData::at(int k, int i, int j) const {
  return gamma[idx(model->dim, k, i, j)];
}

bool ConnectionData::is_flat() const {
  for (const auto& g : gamma)
    if (!g.is_zero()) return false;
  return true;
}

FiberField FiberField::zero(ModelPtr model) {
  const int d = model->dim;
  return {model, std::vector<FormalSeries>(d, FormalSeries(model))};
}

FormalSeries FiberField::apply(const FormalSeries& a) const {
  FormalSeries r(model);
  for (int l = 0; l < model->dim; ++l) {
    if (comp[l].is_zero()) continue;
    r += comp[l] * fiber_derive(l + 1, a);
  }
  return r;
}

MatrixSeries FiberField::apply(const MatrixSeries& a) const {
  return a.map([&](const FormalSeries& s) { return apply(s); });
}

bool FiberField::is_zero() const {
  for (const auto& c : comp)
    if (!c.is_zero()) return false;
  return true;
}

FormalSeries nabla(const FormalSeries& a, const ConnectionData& conn) {
  FormalSeries r(a.model());
  for (int i = 1; i <= conn.model->dim; ++i)
    r += FormalSeries::theta(conn.model, i) * base_derive(i, a);
  if (!conn.is_flat()) r += christoffel_field(conn).apply(a);
  return r;
}

MatrixSeries nabla(const MatrixSeries& a, const ConnectionData& conn) {
  return a.map([&](const FormalSeries& s) { return nabla(s, conn); });
}

FormalSeries apply_D(const FormalSeries& a, const FedosovData& fd) {
  FormalSeries r = nabla(a, fd.connection) - delta(a);
  if (!fd.A.is_zero()) r += fd.A.apply(a);
  return r;
}

MatrixSeries apply_D(const MatrixSeries& a, const FedosovData& fd) {
  MatrixSeries r = a.map([&](const FormalSeries& s) { return apply_D(s, fd); });
  if (fd.endo_gamma) r += graded_commutator(*fd.endo_gamma, a);
  return r;
}

FormalSeries d_squared_residual(int l, const FedosovData& fd) {
  FormalSeries y = FormalSeries::fiber(fd.model(), l);
  return apply_D(apply_D(y, fd), fd);
}

bool zero_below_fiber(const FormalSeries& s, int floor) {
  for (const auto& [m, c] : s.terms())
    if (m.fiber_degree() < floor) return false;
  return true;
}

bool zero_below_fiber(const MatrixSeries& s, int floor) {
  for (int i = 0; i < s.size(); ++i)
    for (int j = 0; j < s.size(); ++j)
      if (!zero_below_fiber(s.at(i, j), floor)) return false;
  return true;
}

FedosovData build_A(const ConnectionData& conn) {
  const ModelPtr& model = conn.model;
  const int d = model->dim;
  FedosovData fd{conn, FiberField::zero(model), std::nullopt};
  if (!conn.is_flat()) {
    FiberField grad = christoffel_field(conn);
    // Curvature of nabla as a fiberwise vector field: R^l = nabla(nabla(y^l)).
    std::vector<FormalSeries> nabla_y(d, FormalSeries(model));
    std::vector<FormalSeries> R(d, FormalSeries(model));
    for (int l = 0; l < d; ++l) {
      nabla_y[l] = grad.comp[l];
      R[l] = nabla(nabla_y[l], conn);
    }
    FiberField& A = fd.A;
    for (int pass = 0; pass < max_passes(*model); ++pass) {
      FiberField next = FiberField::zero(model);
      bool changed = false;
      for (int l = 0; l < d; ++l) {
        // delta A^l = R^l + [nabla, A]^l + 1/2 [A, A]^l, solved through
        // delta_inv; the bracket terms expand on the generator y^l as
        // nabla(A^l) + A(nabla y^l) and A(A^l).
        FormalSeries rhs =
            R[l] + nabla(A.comp[l], conn) + A.apply(nabla_y[l]) + A.apply(A.comp[l]);
        next.comp[l] = delta_inv(rhs);
        if (!(next.comp[l] == A.comp[l])) changed = true;
      }
      A = next;
      if (!changed) break;
    }
  }
  for (int l = 1; l <= d; ++l)
    if (!zero_below_fiber(d_squared_residual(l, fd), model->fiber_max))
      throw std::logic_error("Fedosov recursion failed: D^2 != 0 below truncation");
  return fd;
}

FormalSeries flat_lift(const FormalSeries& f, const FedosovData& fd) {
  if (!f.base_only()) throw std::invalid_argument("flat_lift input must be base-only");
  FormalSeries a = f;
  for (int pass = 0; pass < max_passes(*fd.model()); ++pass) {
    FormalSeries next = f + delta_inv(nabla(a, fd.connection) + fd.A.apply(a));
    if (next == a) break;
    a = next;
  }
  return a;
}

MatrixSeries flat_lift(const MatrixSeries& f, const FedosovData& fd) {
  return f.map([&](const FormalSeries& s) { return flat_lift(s, fd); });
}

MatrixSeries gamma_E(const MatrixSeries& Gamma_E, const FedosovData& fd) {
  for (int i = 0; i < Gamma_E.size(); ++i)
    for (int j = 0; j < Gamma_E.size(); ++j)
      for (const auto& [m, c] : Gamma_E.at(i, j).terms())
        if (m.fiber_degree() != 0 || m.form_degree() != 1 || m.tpow != 0)
          throw std::invalid_argument("Gamma^E must be a base-only 1-form");
  MatrixSeries g = Gamma_E;
  auto dinv = [](const FormalSeries& s) { return delta_inv(s); };
  for (int pass = 0; pass < max_passes(*fd.model()); ++pass) {
    MatrixSeries next =
        Gamma_E + (nabla(g, fd.connection) + fd.A.apply(g) + g * g).map(dinv);
    if (next == g) break;
    g = next;
  }
  // Curvature of the twisted differential: D gamma + gamma*gamma must vanish
  // so that (D^E)^2 = 0.
  MatrixSeries K = g.map([&](const FormalSeries& s) { return apply_D(s, fd); }) + g * g;
  if (!zero_below_fiber(K, fd.model()->fiber_max))
    throw std::logic_error("gamma^E recursion failed: (D^E)^2 != 0 below truncation");
  return g;
}

MatrixSeries solve_DE(const MatrixSeries& P, const FedosovData& fd) {
  for (int i = 0; i < P.size(); ++i)
    for (int j = 0; j < P.size(); ++j)
      for (const auto& [m, c] : P.at(i, j).terms())
        if (m.form_degree() == 0)
          throw std::invalid_argument("solve_DE input must have form degree >= 1");
  if (!zero_below_fiber(apply_D(P, fd), fd.model()->fiber_max))
    throw std::invalid_argument("solve_DE input is not D^E-closed");
  auto dinv = [](const FormalSeries& s) { return delta_inv(s); };
  MatrixSeries mdP = P.map(dinv);
  MatrixSeries S(P.model(), P.size());
  for (int pass = 0; pass < max_passes(*fd.model()); ++pass) {
    MatrixSeries corr = nabla(S, fd.connection) + fd.A.apply(S);
    if (fd.endo_gamma) corr += graded_commutator(*fd.endo_gamma, S);
    MatrixSeries next = -mdP + corr.map(dinv);
    if (next == S) break;
    S = next;
  }
  return S;
}

FormalSeries solve_DE(const FormalSeries& P, const FedosovData& fd) {
  MatrixSeries m(P.model(), 1);
  m.at(0, 0) = P;
  return solve_DE(m, fd).at(0, 0);
}

}  // namespace dqv
