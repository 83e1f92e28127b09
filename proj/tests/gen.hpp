#pragma once

// Seeded random generators for series, matrices and friends used by the
// property tests and the acceptance suite.

#include <random>

#include "dqv/matrix.hpp"
#include "dqv/series.hpp"

namespace dqv::testgen {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Rational random_rational(Rng& rng) {
  int num = uniform(rng, -9, 9);
  int den = uniform(rng, 1, 5);
  return rat(num, den);
}

inline Rational random_nonzero_rational(Rng& rng) {
  Rational r = random_rational(rng);
  return r == 0 ? rat(1) : r;
}

struct MonomialOptions {
  int max_base = 2;
  int max_fiber = 2;
  bool allow_theta = true;
  int max_hbar = 1;
  int max_t = 0;
};

inline Monomial random_monomial(Rng& rng, const ModelConfig& cfg, const MonomialOptions& opt = {}) {
  Monomial m = unit_monomial(cfg);
  for (int i = 0; i < cfg.dim; ++i) {
    int lo = cfg.kind == ModelKind::Torus ? -opt.max_base : 0;
    m.base[i] = uniform(rng, lo, opt.max_base);
    m.fiber[i] = uniform(rng, 0, opt.max_fiber);
  }
  if (opt.allow_theta) m.theta = static_cast<std::uint32_t>(uniform(rng, 0, (1 << cfg.dim) - 1));
  m.hbar = uniform(rng, 0, opt.max_hbar);
  m.tpow = opt.max_t > 0 ? uniform(rng, 0, opt.max_t) : 0;
  return m;
}

inline FormalSeries random_series(Rng& rng, const ModelPtr& model, int nterms,
                                  const MonomialOptions& opt = {}) {
  FormalSeries s(model);
  for (int i = 0; i < nterms; ++i)
    s.add_term(random_monomial(rng, *model, opt), random_rational(rng));
  return s;
}

inline MatrixSeries random_matrix(Rng& rng, const ModelPtr& model, int n, int nterms,
                                  const MonomialOptions& opt = {}) {
  MatrixSeries m(model, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = random_series(rng, model, nterms, opt);
  return m;
}

}  // namespace dqv::testgen
