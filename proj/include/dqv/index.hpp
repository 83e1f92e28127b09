#pragma once

#include <map>
#include <string>

#include "dqv/fedosov.hpp"
#include "dqv/hochschild.hpp"
#include "dqv/poisson.hpp"
#include "dqv/starprod.hpp"

namespace dqv {

// Flat local model for an index run: constant Poisson bivector, the star
// product it generates, a pointwise idempotent q, and the flat Fedosov data.
struct IndexInstance {
  ModelPtr model;
  Polyvector pi1;
  StarProduct star;
  MatrixSeries q;
  FedosovData fedosov;
};

IndexInstance make_index_instance(const Polyvector& pi1, const MatrixSeries& q);

// Gamma^q = q(dq) - (dq)q; the induced connection d + [Gamma^q, .] preserves
// the image of q: dq + [Gamma^q, q] = 0.
MatrixSeries gamma_q(const MatrixSeries& q);

// Graded commutator in the fiberwise diamond algebra.
MatrixSeries diamond_commutator(const MatrixSeries& a, const MatrixSeries& b,
                                const StarProduct& s);

// Fixpoint of B = Gamma^q + delta_inv(nabla B + A(B) + 1/2 [B,B]); a
// Maurer-Cartan element of the Fedosov complex twisted into the diamond
// algebra.
MatrixSeries bq_iterate(const IndexInstance& inst);

// D B + 1/2 [B,B]; zero for the iterate.
MatrixSeries bq_mc_residual(const MatrixSeries& Bq, const IndexInstance& inst);

// D q + [B^q, q]; zero for the iterate.
MatrixSeries lemma_residual(const MatrixSeries& q, const MatrixSeries& Bq,
                            const IndexInstance& inst);

// Fixpoint of U = I + delta_inv(nabla U + A(U) - U diamond B^q); satisfies
// D U = U diamond B^q and U = I mod filtration degree 1.
MatrixSeries u_iterate(const IndexInstance& inst, const MatrixSeries& Bq);

// D U - U diamond B^q.
MatrixSeries u_residual(const MatrixSeries& U, const MatrixSeries& Bq,
                        const IndexInstance& inst);

// Q = U diamond q diamond U^{-1} (D-flat diamond idempotent) and its
// symbol part Q0 = Q at y = 0, a star idempotent lifting q.
struct QPair {
  MatrixSeries Q;
  MatrixSeries Q0;
};
QPair build_Q(const IndexInstance& inst, const MatrixSeries& U);

// The chain sum_k (-1)^k (q (x) B^{2k} + q (x) B^{2k+1}), cut by form
// degree; equals exp(R_{B^q}) applied to q in the pruned chain complex.
Chain q_tilde(const MatrixSeries& q, const MatrixSeries& Bq);

// psi = sum_k (-1)^k (U (x) B^{2k} (x) qU^{-1} + U (x) B^{2k+1} (x) qU^{-1}).
Chain psi_homotopy(const MatrixSeries& q, const MatrixSeries& Bq, const MatrixSeries& U,
                   const IndexInstance& inst);

// D extended to chains entrywise with Koszul signs.
Chain chain_D(const Chain& c, const IndexInstance& inst);

// (Q - Qtilde) - (D psi + b_diamond psi) in the ambient (pulled-out-form)
// picture; identically zero.
Chain homotopy_residual(const MatrixSeries& Q, const Chain& Qtilde, const Chain& psi,
                        const IndexInstance& inst);

// Desk-level trace density: HP_0 reduction with respect to hbar * pi1. The
// trace property is verified per model by trd_is_trace.
FormalSeries trd(const FormalSeries& a, const Polyvector& pi1);
bool trd_is_trace(const StarProduct& s, const Polyvector& pi1, int mode_bound);

// trd(ch00(P)) for a star idempotent P.
FormalSeries quantum_index(const MatrixSeries& P, const Polyvector& pi1,
                           const StarProduct& s);

// The geometric route: gamma_q -> B^q -> U -> Q0, then trd(ch00(Q0)).
FormalSeries classical_index(const IndexInstance& inst);

// Full desk instance of the index theorem: both routes, lift independence,
// and the residual ledger.
struct IndexResult {
  MatrixSeries P;
  MatrixSeries Bq, U, Q, Q0;
  Chain Qtilde, psi;
  std::map<std::string, bool> residual_zero;
  FormalSeries quantum, classical;
  bool equal = false;
};
IndexResult index_compare(const IndexInstance& inst);

}  // namespace dqv
