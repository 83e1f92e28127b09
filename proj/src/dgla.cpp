#include "dqv/dgla.hpp"

#include <stdexcept>
#include <utility>

namespace dqv {

namespace {

int bound_for(const ModelConfig& cfg) { return cfg.hbar_max + cfg.fiber_max + cfg.t_max + 2; }

}  // namespace

Dgla<Polyvector> polyvector_dgla(const ModelPtr& model) {
  Dgla<Polyvector> L;
  L.diff = [model](const Polyvector&) { return Polyvector::zero(model); };
  L.bracket = [](const Polyvector& a, const Polyvector& b) { return schouten(a, b); };
  L.is_zero = [](const Polyvector& a) { return a.is_zero(); };
  L.nilpotency_bound = bound_for(*model);

  // Registration check: graded antisymmetry on a sample pair.
  Polyvector v(FormalSeries::coordinate(model, 1) * FormalSeries::theta(model, 1));
  Polyvector w(FormalSeries::coordinate(model, 1) *
               (model->dim > 1 ? FormalSeries::theta(model, 2) : FormalSeries::theta(model, 1)));
  Polyvector anti = schouten(v, w);
  anti += schouten(w, v);  // both degree 1: [v,w] = -[w,v]
  if (!anti.is_zero()) throw std::logic_error("polyvector_dgla: antisymmetry check failed");
  return L;
}

Dgla<Cochain> cochain_dgla(const Cochain& prod) {
  if (prod.arity() != 2) throw std::invalid_argument("cochain_dgla: product must have arity 2");
  Dgla<Cochain> L;
  L.diff = [prod](const Cochain& x) { return hoch_codiff(x, prod); };
  L.bracket = [](const Cochain& a, const Cochain& b) { return gerstenhaber(a, b); };
  L.is_zero = [](const Cochain& a) { return cochain_zero_on_samples(a); };
  L.nilpotency_bound = bound_for(*prod.model());

  // Registration check: the product is associative, i.e. d^2 vanishes
  // because [prod, prod] does.
  if (!cochain_zero_on_samples(gerstenhaber(prod, prod)))
    throw std::invalid_argument("cochain_dgla: product is not associative");
  return L;
}

Dgla<MatrixSeries> matrix_dgla(const ModelPtr& model,
                               std::function<MatrixSeries(const MatrixSeries&)> diff) {
  Dgla<MatrixSeries> L;
  L.diff = std::move(diff);
  L.bracket = [](const MatrixSeries& a, const MatrixSeries& b) {
    return graded_commutator(a, b);
  };
  L.is_zero = [](const MatrixSeries& a) { return a.is_zero(); };
  L.nilpotency_bound = bound_for(*model);

  // Registration check: d^2 = 0 on a sample.
  MatrixSeries s = MatrixSeries::scalar(
      FormalSeries::coordinate(model, 1) + FormalSeries::theta(model, 1), 1);
  if (!L.diff(L.diff(s)).is_zero())
    throw std::invalid_argument("matrix_dgla: differential does not square to zero");
  return L;
}

DglaModule<Cochain, Chain> chain_module(const Cochain& prod) {
  DglaModule<Cochain, Chain> M;
  M.diff = [prod](const Chain& c) { return hoch_boundary(c, prod); };
  // Twisting by an arity-2 correction adds its boundary contribution; the
  // boundary is linear in the product, so diff + action(alpha) is the
  // boundary of the deformed product.
  M.action = [](const Cochain& P, const Chain& c) { return hoch_boundary(c, P); };
  return M;
}

}  // namespace dqv
