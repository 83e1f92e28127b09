#include "dqv/index.hpp"

#include <stdexcept>

#include "dqv/weyl.hpp"

namespace dqv {

namespace index_signs {
// Koszul shifts for the entry degrees seen by the chain-level D: the degree
// of a_l is form_degree + (l == 0 ? d0 : d1). With every entry suspended the
// chain-level D anticommutes with the boundary, and the homotopy identity
// closes with the D summand oriented opposite to b.
constexpr int d0 = 1, d1 = 1;
constexpr int d_sign = -1;
}  // namespace index_signs

namespace {

void require_pointwise_idempotent(const MatrixSeries& q, const char* who) {
  if (!(q.principal_part() == q) || !(q.chi() == q) || !(q * q == q))
    throw std::invalid_argument(std::string(who) +
                                ": q must be an hbar-free pointwise idempotent");
}

MatrixSeries de_rham_mat(const MatrixSeries& a) {
  return a.map([](const FormalSeries& s) { return de_rham(s); });
}

MatrixSeries delta_inv_mat(const MatrixSeries& a) {
  return a.map([](const FormalSeries& s) { return delta_inv(s); });
}

void require_flat(const IndexInstance& inst, const char* who) {
  if (!inst.fedosov.connection.is_flat() || !inst.fedosov.A.is_zero())
    throw std::invalid_argument(std::string(who) + ": flat instance required");
}

}  // namespace

IndexInstance make_index_instance(const Polyvector& pi1, const MatrixSeries& q) {
  require_pointwise_idempotent(q, "make_index_instance");
  IndexInstance inst;
  inst.model = pi1.model();
  inst.pi1 = pi1;
  inst.star = (inst.model->kind == ModelKind::Plane) ? moyal_star(pi1) : moyal_torus(pi1);
  inst.q = q;
  inst.fedosov = build_A(ConnectionData::flat(inst.model));
  return inst;
}

MatrixSeries gamma_q(const MatrixSeries& q) {
  require_pointwise_idempotent(q, "gamma_q");
  MatrixSeries dq = de_rham_mat(q);
  return q * dq - dq * q;
}

MatrixSeries diamond_commutator(const MatrixSeries& a, const MatrixSeries& b,
                                const StarProduct& s) {
  MatrixSeries r(a.model(), a.size());
  for (int p = 0; p <= 1; ++p)
    for (int q = 0; q <= 1; ++q) {
      MatrixSeries ap = a.parity_component(p);
      MatrixSeries bq = b.parity_component(q);
      if (ap.is_zero() || bq.is_zero()) continue;
      r += mat_diamond_mul(ap, bq, s);
      MatrixSeries back = mat_diamond_mul(bq, ap, s);
      if ((p * q) % 2)
        r += back;
      else
        r -= back;
    }
  return r;
}

MatrixSeries bq_iterate(const IndexInstance& inst) {
  require_flat(inst, "bq_iterate");
  MatrixSeries G = gamma_q(inst.q);
  MatrixSeries B = G;
  for (int it = 0; it <= inst.model->fiber_max + 2; ++it) {
    MatrixSeries rhs = nabla(B, inst.fedosov.connection) + inst.fedosov.A.apply(B);
    rhs += rat(1, 2) * diamond_commutator(B, B, inst.star);
    MatrixSeries next = G + delta_inv_mat(rhs);
    if (next == B) return B;
    B = next;
  }
  throw std::logic_error("bq_iterate did not reach a fixpoint");
}

MatrixSeries bq_mc_residual(const MatrixSeries& Bq, const IndexInstance& inst) {
  return apply_D(Bq, inst.fedosov) + rat(1, 2) * diamond_commutator(Bq, Bq, inst.star);
}

MatrixSeries lemma_residual(const MatrixSeries& q, const MatrixSeries& Bq,
                            const IndexInstance& inst) {
  return apply_D(q, inst.fedosov) + diamond_commutator(Bq, q, inst.star);
}

MatrixSeries u_iterate(const IndexInstance& inst, const MatrixSeries& Bq) {
  require_flat(inst, "u_iterate");
  MatrixSeries I = MatrixSeries::identity(inst.model, inst.q.size());
  MatrixSeries U = I;
  for (int it = 0; it <= inst.model->fiber_max + 2; ++it) {
    MatrixSeries rhs = nabla(U, inst.fedosov.connection) + inst.fedosov.A.apply(U);
    rhs -= mat_diamond_mul(U, Bq, inst.star);
    MatrixSeries next = I + delta_inv_mat(rhs);
    if (next == U) return U;
    U = next;
  }
  throw std::logic_error("u_iterate did not reach a fixpoint");
}

MatrixSeries u_residual(const MatrixSeries& U, const MatrixSeries& Bq,
                        const IndexInstance& inst) {
  return apply_D(U, inst.fedosov) - mat_diamond_mul(U, Bq, inst.star);
}

QPair build_Q(const IndexInstance& inst, const MatrixSeries& U) {
  MatMul dia = [&inst](const MatrixSeries& a, const MatrixSeries& b) {
    return mat_diamond_mul(a, b, inst.star);
  };
  MatrixSeries Uinv = mat_neumann_inverse(U, dia);
  MatrixSeries Q = dia(dia(U, inst.q), Uinv);
  return {Q, Q.chi()};
}

Chain q_tilde(const MatrixSeries& q, const MatrixSeries& Bq) {
  Chain out(q.model(), q.size());
  for (int j = 0; j <= q.model()->dim; ++j) {
    ChainTerm t;
    t.coeff = (j / 2) % 2 ? rat(-1) : rat(1);
    t.entries.push_back(q);
    for (int l = 0; l < j; ++l) t.entries.push_back(Bq);
    out.add_term(std::move(t));
  }
  return prune_theta(out);
}

Chain psi_homotopy(const MatrixSeries& q, const MatrixSeries& Bq, const MatrixSeries& U,
                   const IndexInstance& inst) {
  MatMul dia = [&inst](const MatrixSeries& a, const MatrixSeries& b) {
    return mat_diamond_mul(a, b, inst.star);
  };
  MatrixSeries tail = dia(q, mat_neumann_inverse(U, dia));
  Chain out(q.model(), q.size());
  for (int j = 0; j <= q.model()->dim; ++j) {
    ChainTerm t;
    t.coeff = (j / 2) % 2 ? rat(-1) : rat(1);
    t.entries.push_back(U);
    for (int l = 0; l < j; ++l) t.entries.push_back(Bq);
    t.entries.push_back(tail);
    out.add_term(std::move(t));
  }
  return prune_theta(out);
}

Chain chain_D(const Chain& c, const IndexInstance& inst) {
  Chain out(c.model(), c.nsize());
  const Chain ch = c.homogenized();
  for (const auto& t : ch.terms()) {
    int acc = 0;
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      ChainTerm nt = t;
      nt.entries[i] = apply_D(nt.entries[i], inst.fedosov);
      if (acc % 2) nt.coeff = -nt.coeff;
      out.add_term(std::move(nt));
      acc += t.entries[i].max_form_degree() +
             (i == 0 ? index_signs::d0 : index_signs::d1);
    }
  }
  return prune_theta(out);
}

Chain homotopy_residual(const MatrixSeries& Q, const Chain& Qtilde, const Chain& psi,
                        const IndexInstance& inst) {
  Cochain dia = fiber_product(inst.star, Q.size());
  Chain lhs = Chain::from_entries({Q});
  lhs -= Qtilde;
  Chain rhs = prune_theta(hoch_boundary(psi, dia));
  Chain d_part = chain_D(psi, inst);
  if (index_signs::d_sign == 1)
    rhs += d_part;
  else
    rhs -= d_part;
  return ambient_chain(lhs - rhs);
}

FormalSeries trd(const FormalSeries& a, const Polyvector& pi1) {
  Polyvector pih(FormalSeries::hbar(pi1.model()) * pi1.series());
  return hp0_reduce(a, pih);
}

bool trd_is_trace(const StarProduct& s, const Polyvector& pi1, int mode_bound) {
  const ModelPtr& model = pi1.model();
  Polyvector pih(FormalSeries::hbar(model) * pi1.series());
  Hp0Reducer red(pih);
  std::vector<FormalSeries> basis;
  const int d = model->dim;
  std::vector<int> exps(d, model->kind == ModelKind::Plane ? 0 : -mode_bound);
  for (;;) {
    Monomial m = unit_monomial(*model);
    m.base = exps;
    if (model->kind == ModelKind::Torus || m.base_degree() <= mode_bound)
      basis.push_back(FormalSeries::monomial(model, m));
    int k = 0;
    for (; k < d; ++k) {
      if (exps[k] < mode_bound) {
        ++exps[k];
        break;
      }
      exps[k] = model->kind == ModelKind::Plane ? 0 : -mode_bound;
    }
    if (k == d) break;
  }
  for (const FormalSeries& a : basis)
    for (const FormalSeries& b : basis) {
      FormalSeries comm = star_mul(a, b, s) - star_mul(b, a, s);
      if (!red.reduce(comm).is_zero()) return false;
    }
  return true;
}

FormalSeries quantum_index(const MatrixSeries& P, const Polyvector& pi1,
                           const StarProduct& s) {
  if (!(mat_star_mul(P, P, s) == P))
    throw std::invalid_argument("quantum_index: P is not a star idempotent");
  return trd(ch00(P), pi1);
}

FormalSeries classical_index(const IndexInstance& inst) {
  MatrixSeries Bq = bq_iterate(inst);
  MatrixSeries U = u_iterate(inst, Bq);
  QPair qp = build_Q(inst, U);
  return trd(ch00(qp.Q0), inst.pi1);
}

namespace {

bool ledger_zero(const MatrixSeries& r, int floor) { return zero_below_fiber(r, floor); }

}  // namespace

IndexResult index_compare(const IndexInstance& inst) {
  require_flat(inst, "index_compare");
  IndexResult res;
  const int floor = inst.model->fiber_max;

  res.P = idempotent_lift(inst.q, inst.star);
  res.Bq = bq_iterate(inst);
  res.U = u_iterate(inst, res.Bq);
  QPair qp = build_Q(inst, res.U);
  res.Q = qp.Q;
  res.Q0 = qp.Q0;
  res.Qtilde = q_tilde(inst.q, res.Bq);
  res.psi = psi_homotopy(inst.q, res.Bq, res.U, inst);

  res.residual_zero["bq_mc"] = ledger_zero(bq_mc_residual(res.Bq, inst), floor);
  res.residual_zero["lemma"] = ledger_zero(lemma_residual(inst.q, res.Bq, inst), floor);
  res.residual_zero["u_flat"] = ledger_zero(u_residual(res.U, res.Bq, inst), floor);
  res.residual_zero["DQ"] = ledger_zero(apply_D(res.Q, inst.fedosov), floor);
  res.residual_zero["QQ"] =
      ledger_zero(mat_diamond_mul(res.Q, res.Q, inst.star) - res.Q, floor);
  res.residual_zero["Q0_star_idem"] =
      (mat_star_mul(res.Q0, res.Q0, inst.star) == res.Q0);
  res.residual_zero["flat_lift"] =
      ledger_zero(flat_lift(res.Q0, inst.fedosov) - res.Q, floor);
  res.residual_zero["homotopy"] =
      homotopy_residual(res.Q, res.Qtilde, res.psi, inst).is_zero();
  res.residual_zero["qtilde_exp"] =
      (res.Qtilde - exp_R(Cochain::element(res.Bq), Chain::from_entries({inst.q})))
          .is_zero();
  res.residual_zero["trace_property"] = trd_is_trace(inst.star, inst.pi1, 2);

  // Independent second lift: conjugate P by a star-invertible G = I + hbar N.
  MatrixSeries I = MatrixSeries::identity(inst.model, inst.q.size());
  MatrixSeries N = inst.q * (FormalSeries::coordinate(inst.model, 1) * (I - inst.q));
  MatMul star = [&inst](const MatrixSeries& a, const MatrixSeries& b) {
    return mat_star_mul(a, b, inst.star);
  };
  MatrixSeries G = I + FormalSeries::hbar(inst.model) * N;
  MatrixSeries P2 = star(star(G, res.P), mat_neumann_inverse(G, star));
  res.residual_zero["second_lift_idem"] = (star(P2, P2) == P2);

  MatrixSeries path = idempotent_path(res.P, P2, inst.star);
  res.residual_zero["path"] = path_derivative_residual(path, inst.star).is_zero();

  res.quantum = quantum_index(res.P, inst.pi1, inst.star);
  res.classical = classical_index(inst);
  FormalSeries quantum2 = trd(ch00(P2), inst.pi1);
  res.equal = (res.quantum == res.classical) && (res.quantum == quantum2);
  return res;
}

}  // namespace dqv
