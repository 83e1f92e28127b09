#pragma once

#include <vector>

#include "dqv/matrix.hpp"
#include "dqv/series.hpp"

namespace dqv {

// Which derivation family the multi-indices of a cochain act through:
// fiber cochains differentiate in y, base cochains in x (or the Euler
// derivations on the torus).
enum class DerivKind { Fiber, Base };

// One decomposable polydifferential term of arity m:
//   (a_1, ..., a_m) |-> factors[0] * s_1 D^{alpha_1}(a_1) * factors[1] * ...
//                        ... * s_m D^{alpha_m}(a_m) * factors[m]
// where s_j = (-1)^{eps[j] * |a_j|} compensates fixed odd factors that an
// argument has (conceptually) crossed during the construction of the term.
struct CochainTerm {
  std::vector<MatrixSeries> factors;    // size arity + 1
  std::vector<std::vector<int>> alpha;  // size arity, each a multi-index of size d
  std::vector<int> eps;                 // size arity, parities 0/1
};

// Finite sum of polydifferential terms of one arity. Matrix-valued when
// nsize > 1; scalar cochains are the nsize == 1 case.
class Cochain {
 public:
  Cochain() = default;
  Cochain(ModelPtr model, int nsize, int arity, DerivKind deriv = DerivKind::Fiber);

  // Arity-0 element.
  static Cochain element(const MatrixSeries& v, DerivKind deriv = DerivKind::Fiber);
  // The bare product cochain mu(a, b) = a * b.
  static Cochain mu(ModelPtr model, int nsize, DerivKind deriv = DerivKind::Fiber);

  const ModelPtr& model() const { return model_; }
  int nsize() const { return n_; }
  int arity() const { return arity_; }
  DerivKind deriv() const { return deriv_; }
  const std::vector<CochainTerm>& terms() const { return terms_; }
  bool structurally_zero() const { return terms_.empty(); }

  void add_term(CochainTerm t);

  Cochain& operator+=(const Cochain& o);
  Cochain& operator-=(const Cochain& o);
  friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
  friend Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }
  Cochain operator-() const;
  friend Cochain operator*(const Rational& c, Cochain a);

  MatrixSeries evaluate(const std::vector<MatrixSeries>& args) const;

  // Splits every factor into theta-homogeneous pieces so each term has a
  // well-defined internal form degree; drops structural zeros.
  Cochain homogenized() const;

  // Every alpha_j != 0 (the operator kills fiber-constant arguments).
  bool is_normalized() const;

 private:
  ModelPtr model_;
  int n_ = 1;
  int arity_ = 0;
  DerivKind deriv_ = DerivKind::Fiber;
  std::vector<CochainTerm> terms_;
};

// Hochschild chain: sum of elementary tensors a_0 (x) ... (x) a_n of
// MatrixSeries, degrees may be mixed across terms. The tensor is over the
// ground ring of rationals in hbar and t, which the canonical form pulls out
// front.
struct ChainTerm {
  Rational coeff = 1;
  std::vector<MatrixSeries> entries;  // size degree + 1
};

class Chain {
 public:
  Chain() = default;
  Chain(ModelPtr model, int nsize) : model_(std::move(model)), n_(nsize) {}

  static Chain from_entries(std::vector<MatrixSeries> entries);

  const ModelPtr& model() const { return model_; }
  int nsize() const { return n_; }
  const std::vector<ChainTerm>& terms() const { return terms_; }

  void add_term(ChainTerm t);

  Chain& operator+=(const Chain& o);
  Chain& operator-=(const Chain& o);
  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
  Chain operator-() const;
  friend Chain operator*(const Rational& c, Chain a);

  // Exact zero test through expansion over the monomial-times-matrix-unit
  // basis of every tensor factor.
  bool is_zero() const;
  friend bool operator==(const Chain& a, const Chain& b) { return (a - b).is_zero(); }

  // Splits entries into theta-homogeneous pieces (needed for Koszul signs).
  Chain homogenized() const;

  std::string str() const;

 private:
  ModelPtr model_;
  int n_ = 1;
  std::vector<ChainTerm> terms_;
};

// Gerstenhaber bracket [P,Q]_G; arities m_P + m_Q - 1.
Cochain gerstenhaber(const Cochain& P, const Cochain& Q);

// Hochschild codifferential relative to an arity-2 product: [prod, P]_G.
Cochain hoch_codiff(const Cochain& P, const Cochain& prod);

// Hochschild boundary of a chain relative to an arity-2 product.
Chain hoch_boundary(const Chain& c, const Cochain& prod);

// Lie-module action of cochains on chains.
Chain act_R(const Cochain& P, const Chain& c);

// exp(R_P); terminates whenever every term of P raises the theta degree.
Chain exp_R(const Cochain& P, const Chain& c);

// Trace map to scalar chains and its dual cotrace.
Chain trace_chain(const Chain& c);
Cochain cotrace(const Cochain& P, int nsize);

// Twisted variants for a matrix-valued 1-form gamma. Each bracket with gamma
// lowers the arity by one, so the twisted cotrace is inhomogeneous: it is
// returned as one cochain per arity, highest (= arity of P) first.
Chain trace_tw(const Chain& c, const MatrixSeries& gamma);
std::vector<Cochain> cotrace_tw(const Cochain& P, const MatrixSeries& gamma, int nsize);

// Subtracts the fiber-constant (base + hbar + t) part of every entry a_i,
// i >= 1.
Chain normalize_chain(const Chain& c);

// Drops the part of a chain in which two entries use a common theta
// generator. In the complex with form coefficients pulled out front those
// components are zero; the dropped set is stable under every operator here,
// so pruning is a chain-complex quotient.
Chain prune_theta(const Chain& c);

// Canonical representative in the pulled-out-form picture: every entry's
// theta content is moved in front of entry 0 with the Koszul sign of the
// reordering. Colliding components are dropped as in prune_theta.
Chain ambient_chain(const Chain& c);

// Evaluation-based zero test for cochains: exact evaluation on a
// deterministic spanning sample of argument tuples.
bool cochain_zero_on_samples(const Cochain& P, int samples = 24, unsigned seed = 1);

}  // namespace dqv
