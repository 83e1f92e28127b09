#include "doctest.h"

#include <map>
#include <vector>

#include "dqv/poisson.hpp"
#include "dqv/weyl.hpp"
#include "gen.hpp"

using namespace dqv;

namespace {

ModelPtr plane(int d = 2, int X = 8, int H = 2) {
  return make_model({ModelKind::Plane, d, X, 0, H, 0, 1});
}

ModelPtr torus(int d = 2, int K = 3, int H = 2) {
  return make_model({ModelKind::Torus, d, K, 0, H, 0, 1});
}

Polyvector const_pi(const ModelPtr& m) {
  return Polyvector(FormalSeries::theta(m, 1) * FormalSeries::theta(m, 2));
}

// Bracket {f,g} = pi(df, dg) computed directly from the components of pi,
// independent of schouten().
FormalSeries induced_bracket(const Polyvector& pi, const FormalSeries& f,
                             const FormalSeries& g) {
  FormalSeries r(f.model());
  for (const auto& [m, c] : pi.series().terms()) {
    if (m.form_degree() != 2) continue;
    int i = __builtin_ctz(m.theta) + 1;
    int j = 31 - __builtin_clz(m.theta) + 1;
    Monomial cm = m;
    cm.theta = 0;
    FormalSeries coeff = FormalSeries::monomial(f.model(), cm, c);
    r += coeff * (base_derive(i, f) * base_derive(j, g) -
                  base_derive(j, f) * base_derive(i, g));
  }
  return r;
}

FormalSeries random_function(testgen::Rng& rng, const ModelPtr& m, int max_base = 1) {
  testgen::MonomialOptions opt;
  opt.max_base = max_base;
  opt.max_fiber = 0;
  opt.allow_theta = false;
  opt.max_hbar = 0;
  return testgen::random_series(rng, m, 3, opt);
}

Polyvector random_polyvector(testgen::Rng& rng, const ModelPtr& m, int degree) {
  FormalSeries s(m);
  for (int t = 0; t < 3; ++t) {
    Monomial mo = testgen::random_monomial(rng, *m, {1, 0, false, 0, 0});
    // pick `degree` distinct xi generators
    mo.theta = 0;
    while (__builtin_popcount(mo.theta) < degree)
      mo.theta |= 1u << testgen::uniform(rng, 0, m->dim - 1);
    s.add_term(mo, testgen::random_rational(rng));
  }
  return Polyvector(s);
}

}  // namespace

TEST_CASE("schouten basics") {
  auto m = plane();
  auto d1 = Polyvector(FormalSeries::theta(m, 1));
  auto x1 = Polyvector(FormalSeries::coordinate(m, 1));
  CHECK(schouten(d1, x1).series() == FormalSeries::one(m));

  CHECK(schouten(const_pi(m), const_pi(m)).is_zero());
  auto pi2 = Polyvector(FormalSeries::coordinate(m, 1) * FormalSeries::theta(m, 1) *
                        FormalSeries::theta(m, 2));
  CHECK(schouten(pi2, pi2).is_zero());  // any bivector in d=2 is Poisson
}

TEST_CASE("[pi,pi]=0 iff induced bracket satisfies Jacobi") {
  auto m = plane(3, 12);
  testgen::Rng rng(83);
  int seen_poisson = 0, seen_not = 0;
  for (int trial = 0; trial < 12; ++trial) {
    // even trials: single-wedge bivectors f(x) xi1^xi2, always Poisson;
    // odd trials: generic 3-term bivectors, generically not Poisson
    Polyvector pi = random_polyvector(rng, m, 2);
    if (trial % 2 == 0)
      pi = Polyvector(random_function(rng, m) * FormalSeries::theta(m, 1) *
                      FormalSeries::theta(m, 2));
    bool jac = true;
    for (int it = 0; it < 50 && jac; ++it) {
      auto f = random_function(rng, m);
      auto g = random_function(rng, m);
      auto h = random_function(rng, m);
      auto J = induced_bracket(pi, induced_bracket(pi, f, g), h) +
               induced_bracket(pi, induced_bracket(pi, g, h), f) +
               induced_bracket(pi, induced_bracket(pi, h, f), g);
      jac = J.is_zero();
    }
    if (is_poisson(pi)) {
      ++seen_poisson;
      CHECK(jac);
    } else {
      ++seen_not;
      CHECK_FALSE(jac);
    }
  }
  // the sample must exercise both branches
  CHECK(seen_poisson > 0);
  CHECK(seen_not > 0);
}

TEST_CASE("graded Jacobi identity for schouten") {
  auto m = plane(3, 6);
  testgen::Rng rng(89);
  for (int it = 0; it < 30; ++it) {
    int p = testgen::uniform(rng, 0, 2);
    int q = testgen::uniform(rng, 0, 2);
    int r = testgen::uniform(rng, 0, 2);
    auto a = random_polyvector(rng, m, p);
    auto b = random_polyvector(rng, m, q);
    auto c = random_polyvector(rng, m, r);
    // [[a,b],c] = [a,[b,c]] - (-1)^{(p-1)(q-1)} [b,[a,c]]
    auto lhs = schouten(schouten(a, b), c);
    auto rhs1 = schouten(a, schouten(b, c));
    auto rhs2 = schouten(b, schouten(a, c));
    FormalSeries rhs = rhs1.series();
    if (((p - 1) * (q - 1)) % 2 != 0)
      rhs += rhs2.series();
    else
      rhs -= rhs2.series();
    CHECK(lhs.series() == rhs);
  }
}

TEST_CASE("lichnerowicz") {
  auto m = plane();
  auto pi = const_pi(m);
  testgen::Rng rng(97);
  for (int it = 0; it < 20; ++it) {
    auto f = random_function(rng, m, 2);
    // Hamiltonian vector field of f for pi = d1 ^ d2
    auto expect = base_derive(2, f) * FormalSeries::theta(m, 1) -
                  base_derive(1, f) * FormalSeries::theta(m, 2);
    CHECK(lichnerowicz(pi, Polyvector(f)).series() == expect);
  }
  CHECK(lichnerowicz(pi, pi).is_zero());
  for (int it = 0; it < 20; ++it) {
    auto P = random_polyvector(rng, m, testgen::uniform(rng, 0, 2));
    CHECK(lichnerowicz(pi, lichnerowicz(pi, P)).is_zero());
  }
}

TEST_CASE("de_rham") {
  auto m = plane();
  auto x1 = FormalSeries::coordinate(m, 1);
  auto th1 = FormalSeries::theta(m, 1);
  auto th2 = FormalSeries::theta(m, 2);
  CHECK(de_rham(x1) == th1);
  CHECK(de_rham(x1 * th2) == th1 * th2);
  CHECK(de_rham(th1 * th2).is_zero());
  testgen::Rng rng(101);
  testgen::MonomialOptions opt;
  opt.max_fiber = 0;
  for (int it = 0; it < 40; ++it)
    CHECK(de_rham(de_rham(testgen::random_series(rng, m, 4, opt))).is_zero());
}

TEST_CASE("koszul differential") {
  auto m = plane();
  auto pi = const_pi(m);
  CHECK(koszul(pi, FormalSeries::coordinate(m, 1) * FormalSeries::coordinate(m, 2))
            .is_zero());
  CHECK(koszul(pi, FormalSeries::coordinate(m, 1) * FormalSeries::theta(m, 2)) ==
        FormalSeries::one(m));

  testgen::Rng rng(103);
  testgen::MonomialOptions opt;
  opt.max_fiber = 0;
  for (auto mm : {plane(), torus()}) {
    auto p = const_pi(mm);
    for (int it = 0; it < 40; ++it) {
      auto w = testgen::random_series(rng, mm, 4, opt);
      CHECK(koszul(p, koszul(p, w)).is_zero());
    }
  }

  // On a 1-form a th1 + b th2 in d=2 with constant pi, L_pi = d1 b - d2 a.
  for (int it = 0; it < 20; ++it) {
    auto a = random_function(rng, m, 2);
    auto b = random_function(rng, m, 2);
    auto w = a * FormalSeries::theta(m, 1) + b * FormalSeries::theta(m, 2);
    CHECK(koszul(pi, w) == base_derive(1, b) - base_derive(2, a));
  }
}

TEST_CASE("hp0 on the plane") {
  auto m = plane(2, 4);
  auto pi = const_pi(m);
  Hp0Reducer red(pi);
  CHECK(red.reduce(FormalSeries::coordinate(m, 1) * FormalSeries::coordinate(m, 2))
            .is_zero());
  CHECK(red.reduce(FormalSeries(m)).is_zero());
  CHECK(red.dim() == 0);  // every monomial is a d1-image

  auto zero = Polyvector::zero(m);
  CHECK(hp_dim(zero) == 15);  // all monomials of degree <= 4 in two variables
}

TEST_CASE("hp0 on the torus") {
  auto m = torus();
  auto pi = const_pi(m);
  Hp0Reducer red(pi);
  auto u = FormalSeries::coordinate(m, 1);
  auto v_inv = FormalSeries::coordinate(m, 2, -1);
  CHECK(red.reduce(u * v_inv).is_zero());
  CHECK(red.reduce(FormalSeries::one(m)) == FormalSeries::one(m));
  CHECK(red.dim() == 1);
}

TEST_CASE("hp0 is a projector killing the image") {
  testgen::Rng rng(107);
  for (auto m : {plane(2, 6), torus()}) {
    auto pi = const_pi(m);
    Hp0Reducer red(pi);
    testgen::MonomialOptions opt;
    opt.max_fiber = 0;
    opt.max_hbar = 0;
    for (int it = 0; it < 100; ++it) {
      FormalSeries alpha(m);
      for (int t = 0; t < 3; ++t) {
        Monomial mo = testgen::random_monomial(rng, *m, opt);
        mo.theta = 1u << testgen::uniform(rng, 0, 1);
        alpha.add_term(mo, testgen::random_rational(rng));
      }
      CHECK(red.reduce(koszul(pi, alpha)).is_zero());

      auto f = random_function(rng, m, 2);
      CHECK(red.reduce(f + koszul(pi, alpha)) == red.reduce(f));
      CHECK(red.reduce(red.reduce(f)) == red.reduce(f));
    }
  }
}

TEST_CASE("hp0 with an hbar-weighted pi") {
  auto m = plane(2, 4);
  auto pi = Polyvector(FormalSeries::hbar(m) * FormalSeries::theta(m, 1) *
                       FormalSeries::theta(m, 2));
  Hp0Reducer red(pi);
  auto f = FormalSeries::coordinate(m, 1) * FormalSeries::coordinate(m, 2);
  // order 0 sits below the hbar weight of pi and survives; order 1 reduces
  CHECK(red.reduce(f + FormalSeries::hbar(m) * f) == f);
}

TEST_CASE("hp_dim agrees with a dense rank oracle") {
  // Independent check: dense Gaussian elimination over the explicit
  // d1 b - d2 a formula for constant pi in d = 2.
  for (auto m : {plane(2, 4), torus(2, 2)}) {
    bool is_torus = m->kind == ModelKind::Torus;
    int B = m->base_max;
    std::vector<std::pair<int, int>> funcs;
    int lo = is_torus ? -B : 0;
    for (int a = lo; a <= B; ++a)
      for (int b = lo; b <= B; ++b)
        if (is_torus || a + b <= B) funcs.emplace_back(a, b);
    auto index_of = [&](int a, int b) -> int {
      for (std::size_t k = 0; k < funcs.size(); ++k)
        if (funcs[k] == std::make_pair(a, b)) return static_cast<int>(k);
      return -1;
    };
    // rows: images of monomial 1-forms x^a y^b th^i over the enlarged cutoff
    std::vector<std::vector<Rational>> rows;
    int ihi = is_torus ? B : B + 1;
    for (int a = lo; a <= ihi; ++a)
      for (int b = lo; b <= ihi; ++b)
        for (int i = 0; i < 2; ++i) {
          if (!is_torus && a + b > B + 1) continue;
          std::vector<Rational> row(funcs.size(), Rational(0));
          // plane: d1(x^a y^b th2 coeff) etc.; torus: Euler derivations
          int ta = a, tb = b;
          Rational c;
          if (i == 1) {  // coefficient b of th2: +d1
            c = is_torus ? Rational(a) : Rational(a);
            if (!is_torus) ta = a - 1;
          } else {  // coefficient a of th1: -d2
            c = is_torus ? Rational(-b) : Rational(-b);
            if (!is_torus) tb = b - 1;
          }
          if (c == 0) continue;
          int k = index_of(ta, tb);
          if (k < 0) continue;
          row[k] = c;
          rows.push_back(std::move(row));
        }
    // dense rank
    int rank = 0;
    std::size_t col = 0;
    for (; col < funcs.size() && rank < static_cast<int>(rows.size()); ++col) {
      int piv = -1;
      for (int r = rank; r < static_cast<int>(rows.size()); ++r)
        if (rows[r][col] != 0) {
          piv = r;
          break;
        }
      if (piv < 0) continue;
      std::swap(rows[rank], rows[piv]);
      for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
        if (r == rank || rows[r][col] == 0) continue;
        Rational f = rows[r][col] / rows[rank][col];
        for (std::size_t cc = col; cc < funcs.size(); ++cc)
          rows[r][cc] -= f * rows[rank][cc];
      }
      ++rank;
    }
    int expected = static_cast<int>(funcs.size()) - rank;
    CHECK(hp_dim(const_pi(m)) == expected);
  }
}
