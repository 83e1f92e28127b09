#include "dqv/poisson.hpp"

#include <algorithm>
#include <stdexcept>

#include "dqv/weyl.hpp"

namespace dqv {

namespace {

int abs_base_degree(const Monomial& m) {
  int d = 0;
  for (int v : m.base) d += v < 0 ? -v : v;
  return d;
}

// Graded-lex order used for pivoting: higher total degree first, then
// lexicographically larger exponent vector.
bool grlex_greater(const Monomial& a, const Monomial& b) {
  int da = abs_base_degree(a), db = abs_base_degree(b);
  if (da != db) return da > db;
  return a.base > b.base;
}

FormalSeries check_polyvector_input(FormalSeries s) {
  for (const auto& [m, c] : s.terms())
    if (m.fiber_degree() != 0 || m.tpow != 0)
      throw std::invalid_argument("polyvector coefficients must be base+hbar only");
  return s;
}

// P bullet Q = sum_i (right derivative d/dxi_i of P) * d/dx^i(Q). The right
// xi-derivative is the left one times (-1)^{p-1} on degree-p input; the
// graded Jacobi identity holds only with this convention.
FormalSeries bullet(const FormalSeries& P, const FormalSeries& Q) {
  FormalSeries r(P.model());
  for (int i = 1; i <= P.model()->dim; ++i) {
    FormalSeries dl = theta_derive(i, P);
    FormalSeries dP(P.model());
    for (const auto& [m, c] : dl.terms())
      dP.add_term(m, (m.form_degree() % 2) ? Rational(-c) : c);
    if (dP.is_zero()) continue;
    r += dP * base_derive(i, Q);
  }
  return r;
}

}  // namespace

Polyvector::Polyvector(FormalSeries s) : val_(check_polyvector_input(std::move(s))) {}

Polyvector schouten(const Polyvector& P, const Polyvector& Q) {
  P.series().check_same_model(Q.series());
  FormalSeries r(P.model());
  for (int p = 0; p <= P.model()->dim; ++p)
    for (int q = 0; q <= Q.model()->dim; ++q) {
      FormalSeries Pp = P.series().form_component(p);
      FormalSeries Qq = Q.series().form_component(q);
      if (Pp.is_zero() || Qq.is_zero()) continue;
      FormalSeries fwd = bullet(Pp, Qq);
      FormalSeries bwd = bullet(Qq, Pp);
      // [P,Q] = P.Q - (-1)^{(p-1)(q-1)} Q.P on homogeneous components.
      if (((p - 1) * (q - 1)) % 2 != 0)
        r += fwd + bwd;
      else
        r += fwd - bwd;
    }
  return Polyvector(r);
}

bool is_poisson(const Polyvector& pi) { return schouten(pi, pi).is_zero(); }

namespace {

void require_poisson(const Polyvector& pi) {
  if (!is_poisson(pi)) throw std::invalid_argument("pi is not a Poisson bivector");
}

}  // namespace

Polyvector lichnerowicz(const Polyvector& pi, const Polyvector& P) {
  require_poisson(pi);
  return schouten(pi, P);
}

FormalSeries de_rham(const FormalSeries& w) {
  FormalSeries r(w.model());
  for (int i = 1; i <= w.model()->dim; ++i)
    r += FormalSeries::theta(w.model(), i) * base_derive(i, w);
  return r;
}

namespace {

// Contraction i_pi = sum_{i<j} pi^{ij} d/dth^j d/dth^i (innermost first).
FormalSeries contract(const Polyvector& pi, const FormalSeries& w) {
  FormalSeries r(w.model());
  for (const auto& [m, c] : pi.series().terms()) {
    if (m.form_degree() != 2) continue;
    int i = __builtin_ctz(m.theta) + 1;
    int j = 31 - __builtin_clz(m.theta) + 1;
    Monomial coeff_m = m;
    coeff_m.theta = 0;
    FormalSeries coeff = FormalSeries::monomial(w.model(), coeff_m, c);
    r += coeff * theta_derive(j, theta_derive(i, w));
  }
  return r;
}

}  // namespace

FormalSeries koszul(const Polyvector& pi, const FormalSeries& w) {
  require_poisson(pi);
  return contract(pi, de_rham(w)) - de_rham(contract(pi, w));
}

namespace {

// Sparse monomial vector in graded-lex-descending order, pivot first.
using SparseRow = std::vector<std::pair<Monomial, Rational>>;

SparseRow to_row(const FormalSeries& s) {
  SparseRow r(s.terms().begin(), s.terms().end());
  std::sort(r.begin(), r.end(),
            [](const auto& a, const auto& b) { return grlex_greater(a.first, b.first); });
  return r;
}

SparseRow axpy(const SparseRow& a, const Rational& c, const SparseRow& b) {
  // a + c*b, keeping the descending order.
  SparseRow r;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && grlex_greater(a[i].first, b[j].first))) {
      r.push_back(a[i++]);
    } else if (i == a.size() || grlex_greater(b[j].first, a[i].first)) {
      r.emplace_back(b[j].first, Rational(c * b[j].second));
      ++j;
    } else {
      Rational v = a[i].second + c * b[j].second;
      if (v != 0) r.emplace_back(a[i].first, v);
      ++i;
      ++j;
    }
  }
  return r;
}

}  // namespace

Hp0Reducer::Hp0Reducer(const Polyvector& pi) : model_(pi.model()) {
  require_poisson(pi);

  // pi must carry one overall hbar power so the hbar orders of the quotient
  // decouple.
  FormalSeries pi1(model_);
  bool first = true;
  for (const auto& [m, c] : pi.series().terms()) {
    if (first) {
      h0_ = m.hbar;
      first = false;
    } else if (m.hbar != h0_) {
      throw std::invalid_argument("hp0: pi must be hbar-homogeneous");
    }
    Monomial n = m;
    n.hbar = 0;
    pi1.add_term(n, c);
  }

  const ModelConfig& cfg = *model_;
  const int d = cfg.dim;

  // Work model with enlarged base cutoff so images of the enlarged 1-form
  // basis are never truncated.
  int spread = 0;
  for (const auto& [m, c] : pi1.terms()) spread = std::max(spread, abs_base_degree(m));
  ModelConfig wcfg = cfg;
  wcfg.base_max = cfg.base_max + 1 + spread;
  ModelPtr work = make_model(wcfg);

  FormalSeries pi_work(work);
  for (const auto& [m, c] : pi1.terms()) pi_work.add_term(m, c);
  Polyvector pw(pi_work);

  // Enumerate the base monomials of the enlarged input cutoff.
  std::vector<Monomial> input_monomials;
  std::vector<int> exps(d, cfg.kind == ModelKind::Plane ? 0 : -(cfg.base_max + spread));
  const int input_bound = cfg.base_max + (cfg.kind == ModelKind::Plane ? 1 : spread);
  for (;;) {
    Monomial m = unit_monomial(cfg);
    m.base = exps;
    if (cfg.kind == ModelKind::Torus || m.base_degree() <= input_bound)
      input_monomials.push_back(m);
    int k = 0;
    for (; k < d; ++k) {
      if (exps[k] < input_bound) {
        ++exps[k];
        break;
      }
      exps[k] = cfg.kind == ModelKind::Plane ? 0 : -(cfg.base_max + spread);
    }
    if (k == d) break;
  }

  // Row space of L_pi on the 1-form basis, reduced to echelon form.
  for (const Monomial& mono : input_monomials) {
    for (int i = 1; i <= d; ++i) {
      FormalSeries alpha =
          FormalSeries::monomial(work, mono) * FormalSeries::theta(work, i);
      SparseRow row = to_row(contract(pw, de_rham(alpha)) - de_rham(contract(pw, alpha)));
      // Eliminate existing pivots.
      for (std::size_t k = 0; k < rows_.size() && !row.empty();) {
        const auto& piv = rows_[k].front();
        auto it = std::find_if(row.begin(), row.end(),
                               [&](const auto& e) { return e.first == piv.first; });
        if (it == row.end()) {
          ++k;
          continue;
        }
        row = axpy(row, Rational(-it->second / piv.second), rows_[k]);
        k = 0;  // tails may have introduced earlier pivots
      }
      if (!row.empty()) rows_.push_back(std::move(row));
    }
  }
  std::sort(rows_.begin(), rows_.end(), [](const SparseRow& a, const SparseRow& b) {
    return grlex_greater(a.front().first, b.front().first);
  });
}

FormalSeries Hp0Reducer::reduce(const FormalSeries& f) const {
  for (const auto& [m, c] : f.terms())
    if (m.fiber_degree() != 0 || m.form_degree() != 0 || m.tpow != 0)
      throw std::invalid_argument("hp0_reduce input must be base+hbar only");
  FormalSeries out(f.model());
  for (int k = 0; k <= model_->hbar_max; ++k) {
    FormalSeries fk = f.hbar_coefficient(k);
    if (fk.is_zero()) continue;
    if (k < h0_) {
      // Below the overall hbar power of pi the image is empty.
      for (const auto& [m, c] : fk.terms()) {
        Monomial n = m;
        n.hbar = k;
        out.add_term(n, c);
      }
      continue;
    }
    SparseRow v = to_row(fk);
    bool progress = true;
    while (progress && !v.empty()) {
      progress = false;
      for (const auto& row : rows_) {
        auto it = std::find_if(v.begin(), v.end(),
                               [&](const auto& e) { return e.first == row.front().first; });
        if (it == v.end()) continue;
        v = axpy(v, Rational(-it->second / row.front().second), row);
        progress = true;
        break;
      }
    }
    for (const auto& [m, c] : v) {
      Monomial n = m;
      n.hbar = k;
      out.add_term(n, c);
    }
  }
  return out;
}

int Hp0Reducer::dim() const {
  const ModelConfig& cfg = *model_;
  const int d = cfg.dim;
  // Count the function basis at the output cutoff, minus pivots inside it.
  long basis = 0;
  std::vector<int> exps(d, cfg.kind == ModelKind::Plane ? 0 : -cfg.base_max);
  for (;;) {
    Monomial m = unit_monomial(cfg);
    m.base = exps;
    if (cfg.kind == ModelKind::Torus || m.base_degree() <= cfg.base_max) ++basis;
    int k = 0;
    for (; k < d; ++k) {
      if (exps[k] < cfg.base_max) {
        ++exps[k];
        break;
      }
      exps[k] = cfg.kind == ModelKind::Plane ? 0 : -cfg.base_max;
    }
    if (k == d) break;
  }
  long rank = 0;
  for (const auto& row : rows_) {
    const Monomial& p = row.front().first;
    bool inside = true;
    if (cfg.kind == ModelKind::Plane) {
      inside = p.base_degree() <= cfg.base_max;
    } else {
      for (int v : p.base)
        if (v < -cfg.base_max || v > cfg.base_max) inside = false;
    }
    if (inside) ++rank;
  }
  return static_cast<int>(basis - rank);
}

FormalSeries hp0_reduce(const FormalSeries& f, const Polyvector& pi) {
  return Hp0Reducer(pi).reduce(f);
}

int hp_dim(const Polyvector& pi) { return Hp0Reducer(pi).dim(); }

}  // namespace dqv
