#include "dqv/starprod.hpp"

#include <map>
#include <stdexcept>
#include <utility>

#include "dqv/weyl.hpp"

namespace dqv {

StarProduct::StarProduct(ModelPtr model, std::vector<std::vector<BiTerm>> corrections)
    : model_(std::move(model)), raw_(std::move(corrections)) {}

Cochain StarProduct::correction_cochain(int k) const {
  Cochain c(model_, 1, 2, DerivKind::Base);
  for (const BiTerm& t : raw_.at(k - 1)) {
    CochainTerm ct;
    ct.factors.assign(3, MatrixSeries::identity(model_, 1));
    ct.factors[0] = MatrixSeries::scalar(FormalSeries(model_, t.c), 1);
    ct.alpha = {t.da, t.db};
    ct.eps = {0, 0};
    c.add_term(std::move(ct));
  }
  return c;
}

namespace {

// Constant antisymmetric matrix pi^{ij} from a bivector with constant
// base-only coefficients.
std::vector<std::vector<Rational>> constant_bivector(const Polyvector& pi1) {
  const ModelConfig& cfg = *pi1.model();
  std::vector<std::vector<Rational>> p(cfg.dim, std::vector<Rational>(cfg.dim, 0));
  for (const auto& [m, c] : pi1.series().terms()) {
    if (m.form_degree() != 2 || !Monomial{m.base, m.fiber, 0, m.hbar, m.tpow}.is_constant())
      throw std::invalid_argument("moyal: pi1 must be constant antisymmetric");
    int i = __builtin_ctz(m.theta);
    int j = 31 - __builtin_clz(m.theta);
    p[i][j] = c;
    p[j][i] = -c;
  }
  return p;
}

std::vector<std::vector<BiTerm>> moyal_corrections(const Polyvector& pi1) {
  const ModelPtr& model = pi1.model();
  auto p = constant_bivector(pi1);
  const int d = model->dim;

  using Key = std::pair<std::vector<int>, std::vector<int>>;
  std::map<Key, Rational> cur;
  cur[{std::vector<int>(d, 0), std::vector<int>(d, 0)}] = 1;

  std::vector<std::vector<BiTerm>> raw;
  for (int k = 1; k <= model->hbar_max; ++k) {
    std::map<Key, Rational> next;
    for (const auto& [key, c] : cur)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          if (p[i][j] == 0) continue;
          Key nk = key;
          ++nk.first[i];
          ++nk.second[j];
          next[nk] += c * p[i][j];
        }
    cur = std::move(next);
    std::vector<BiTerm> level;
    Rational norm = rat(1) / (factorial(k) * rat(1 << k));
    for (const auto& [key, c] : cur)
      if (c != 0) level.push_back({key.first, key.second, Rational(norm * c)});
    raw.push_back(std::move(level));
  }
  return raw;
}

void check_star_input(const FormalSeries& a) {
  for (const auto& [m, c] : a.terms())
    if (m.fiber_degree() != 0 || m.theta != 0)
      throw std::invalid_argument("star_mul: inputs must be free of fiber variables");
}

}  // namespace

StarProduct moyal_star(const Polyvector& pi1) {
  if (pi1.model()->kind != ModelKind::Plane)
    throw std::invalid_argument("moyal_star: plane model required");
  return StarProduct(pi1.model(), moyal_corrections(pi1));
}

StarProduct moyal_torus(const Polyvector& pi1) {
  if (pi1.model()->kind != ModelKind::Torus)
    throw std::invalid_argument("moyal_torus: torus model required");
  return StarProduct(pi1.model(), moyal_corrections(pi1));
}

FormalSeries star_mul(const FormalSeries& a, const FormalSeries& b, const StarProduct& s) {
  check_star_input(a);
  check_star_input(b);
  FormalSeries r = a * b;
  FormalSeries h = FormalSeries::one(s.model());
  for (int k = 1; k <= s.order(); ++k) {
    h *= FormalSeries::hbar(s.model());
    if (h.is_zero()) break;
    for (const BiTerm& t : s.correction(k))
      r += t.c * (h * (base_derive_multi(t.da, a) * base_derive_multi(t.db, b)));
  }
  return r;
}

MatrixSeries mat_star_mul(const MatrixSeries& A, const MatrixSeries& B,
                          const StarProduct& s) {
  return mat_mul_with(A, B, [&s](const FormalSeries& a, const FormalSeries& b) {
    return star_mul(a, b, s);
  });
}

bool naturality_check(const StarProduct& s) {
  for (int k = 1; k <= s.order(); ++k)
    for (const BiTerm& t : s.correction(k)) {
      int da = 0, db = 0;
      for (int v : t.da) da += v;
      for (int v : t.db) db += v;
      if (da > k || db > k) return false;
    }
  return true;
}

FormalSeries diamond_mul(const FormalSeries& a, const FormalSeries& b,
                         const StarProduct& s) {
  FormalSeries r = a * b;
  FormalSeries h = FormalSeries::one(s.model());
  for (int k = 1; k <= s.order(); ++k) {
    h *= FormalSeries::hbar(s.model());
    if (h.is_zero()) break;
    for (const BiTerm& t : s.correction(k))
      r += t.c * (h * (fiber_derive_multi(t.da, a) * fiber_derive_multi(t.db, b)));
  }
  return r;
}

MatrixSeries mat_diamond_mul(const MatrixSeries& A, const MatrixSeries& B,
                             const StarProduct& s) {
  return mat_mul_with(A, B, [&s](const FormalSeries& a, const FormalSeries& b) {
    return diamond_mul(a, b, s);
  });
}

Cochain fiber_product(const StarProduct& s, int nsize) {
  Cochain c = Cochain::mu(s.model(), nsize, DerivKind::Fiber);
  FormalSeries h = FormalSeries::one(s.model());
  for (int k = 1; k <= s.order(); ++k) {
    h *= FormalSeries::hbar(s.model());
    if (h.is_zero()) break;
    for (const BiTerm& t : s.correction(k)) {
      CochainTerm ct;
      ct.factors.assign(3, MatrixSeries::identity(s.model(), nsize));
      ct.factors[0] = MatrixSeries::scalar(t.c * h, nsize);
      ct.alpha = {t.da, t.db};
      ct.eps = {1, 0};
      c.add_term(std::move(ct));
    }
  }
  return c;
}

namespace {

void check_weight_positive(const MatrixSeries& Z, const char* who) {
  for (int i = 0; i < Z.size(); ++i)
    for (int j = 0; j < Z.size(); ++j)
      if (!Z.at(i, j).is_zero() && Z.at(i, j).min_filtration_weight() < 1)
        throw std::invalid_argument(std::string(who) +
                                    ": argument must have filtration weight >= 1");
}

int weight_cap(const ModelConfig& cfg) { return 2 * cfg.hbar_max + cfg.fiber_max + 1; }

}  // namespace

MatrixSeries mat_neumann_inverse(const MatrixSeries& A, const MatMul& mul) {
  MatrixSeries I = MatrixSeries::identity(A.model(), A.size());
  MatrixSeries Z = A - I;
  check_weight_positive(Z, "mat_neumann_inverse");
  MatrixSeries r = I, pw = I;
  for (int k = 1; k <= weight_cap(*A.model()); ++k) {
    pw = -mul(pw, Z);
    if (pw.is_zero()) break;
    r += pw;
  }
  return r;
}

MatrixSeries mat_binomial_invsqrt(const MatrixSeries& Z, const MatMul& mul) {
  check_weight_positive(Z, "mat_binomial_invsqrt");
  MatrixSeries I = MatrixSeries::identity(Z.model(), Z.size());
  MatrixSeries r = I, pw = I;
  for (int k = 1; k <= weight_cap(*Z.model()); ++k) {
    pw = mul(pw, Z);
    if (pw.is_zero()) break;
    r += binomial(rat(-1, 2), k) * pw;
  }
  return r;
}

namespace {

MatrixSeries lift_formula(const MatrixSeries& q, const StarProduct& s) {
  MatMul star = [&s](const MatrixSeries& a, const MatrixSeries& b) {
    return mat_star_mul(a, b, s);
  };
  MatrixSeries Z = rat(4) * (star(q, q) - q);
  MatrixSeries half =
      MatrixSeries::scalar(FormalSeries(q.model(), rat(1, 2)), q.size());
  return half + star(q - half, mat_binomial_invsqrt(Z, star));
}

}  // namespace

MatrixSeries idempotent_lift(const MatrixSeries& q, const StarProduct& s) {
  if (!(principal_symbol(q) == q) || !(q * q == q))
    throw std::invalid_argument("idempotent_lift: q must be a pointwise idempotent");
  return lift_formula(q, s);
}

MatrixSeries idempotent_path(const MatrixSeries& P, const MatrixSeries& Q,
                             const StarProduct& s) {
  if (!(principal_symbol(P) == principal_symbol(Q)))
    throw std::invalid_argument("idempotent_path: principal parts differ");
  FormalSeries t = FormalSeries::tvar(P.model());
  FormalSeries one = FormalSeries::one(P.model());
  MatrixSeries P0t = (one - t) * P + t * Q;
  return lift_formula(P0t, s);
}

MatrixSeries path_derivative_residual(const MatrixSeries& Pt, const StarProduct& s) {
  MatrixSeries dP = Pt.t_derivative();
  MatrixSeries M = mat_star_mul(Pt, dP, s) - mat_star_mul(dP, Pt, s);
  return dP - (mat_star_mul(Pt, M, s) - mat_star_mul(M, Pt, s));
}

MatrixSeries principal_symbol(const MatrixSeries& P) { return P.principal_part(); }

FormalSeries ch00(const MatrixSeries& P) { return P.trace(); }

}  // namespace dqv
