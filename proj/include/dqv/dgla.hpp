#pragma once

#include <functional>
#include <stdexcept>

#include "dqv/hochschild.hpp"
#include "dqv/matrix.hpp"
#include "dqv/poisson.hpp"

namespace dqv {

// A differential graded Lie algebra presented through its operations on one
// element type. Elements are handled opaquely; degree bookkeeping stays with
// the caller, the handle only needs the operator data.
template <class T>
struct Dgla {
  std::function<T(const T&)> diff;               // d, squares to zero
  std::function<T(const T&, const T&)> bracket;  // graded bracket
  std::function<bool(const T&)> is_zero;
  // Bound on how many nested brackets with an hbar-weighted element can
  // survive the truncation; used to cut the gauge series.
  int nilpotency_bound = 0;
};

// d(alpha) + 1/2 [alpha, alpha]; zero iff alpha is Maurer-Cartan.
template <class T>
T mc_residual(const T& alpha, const Dgla<T>& L) {
  T r = L.diff(alpha);
  r += rat(1, 2) * L.bracket(alpha, alpha);
  return r;
}

// The twisted differential d^alpha = d + [alpha, .].
template <class T>
T twist_differential(const T& alpha, const T& x, const Dgla<T>& L) {
  T r = L.diff(x);
  r += L.bracket(alpha, x);
  return r;
}

// Gauge action of exp(xi) on a Maurer-Cartan element:
//   exp(xi)[alpha] = alpha + f([., xi]) (d xi + [alpha, xi]),
// with f(x) = (e^x - 1)/x truncated by nilpotency of [., xi].
template <class T>
T gauge_act(const T& xi, const T& alpha, const Dgla<T>& L) {
  T u = L.diff(xi);
  u += L.bracket(alpha, xi);
  T r = alpha;
  for (int k = 0;; ++k) {
    if (L.is_zero(u)) break;
    if (k > L.nilpotency_bound)
      throw std::invalid_argument("gauge_act: xi is not nilpotent at the truncation");
    r += rat(1) / factorial(k + 1) * u;
    u = L.bracket(u, xi);
  }
  return r;
}

// A dg module over the algebra of element type T with chains of type C.
template <class T, class C>
struct DglaModule {
  std::function<C(const C&)> diff;
  std::function<C(const T&, const C&)> action;
};

// Semidirect-product twist: the module differential of the pair (L, M)
// twisted by a Maurer-Cartan alpha is d_M + action(alpha).
template <class T, class C>
std::function<C(const C&)> semidirect_twist(const T& alpha, const DglaModule<T, C>& M) {
  return [alpha, M](const C& c) {
    C r = M.diff(c);
    r += M.action(alpha, c);
    return r;
  };
}

// Registered algebras. Registration runs sample-based health checks
// (antisymmetry, d^2 = 0, Leibniz) and throws on failure.

// Polyvector fields with the Schouten bracket and zero differential.
Dgla<Polyvector> polyvector_dgla(const ModelPtr& model);

// Fixed-arity slices of the cochain algebra under the Gerstenhaber bracket,
// differential [prod, .] for the given associative product cochain.
Dgla<Cochain> cochain_dgla(const Cochain& prod);

// Matrix forms under the graded commutator with a supplied differential.
Dgla<MatrixSeries> matrix_dgla(const ModelPtr& model,
                               std::function<MatrixSeries(const MatrixSeries&)> diff);

// Hochschild chains as a module over the cochain algebra: diff is the
// boundary of `prod`, the action is the normalized R operator (R scaled so
// that twisting by a product correction P reproduces the boundary of
// prod + P).
DglaModule<Cochain, Chain> chain_module(const Cochain& prod);

}  // namespace dqv
