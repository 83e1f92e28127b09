#include "doctest.h"

#include <vector>

#include "dqv/hochschild.hpp"
#include "gen.hpp"

using namespace dqv;

namespace {

ModelPtr plane(int d = 2, int X = 8, int Y = 8, int N = 2) {
  return make_model({ModelKind::Plane, d, X, Y, 0, 0, N});
}

MatrixSeries scalar_mat(const FormalSeries& s) {
  MatrixSeries m(s.model(), 1);
  m.at(0, 0) = s;
  return m;
}

// Dense random matrix whose entries all have the prescribed exact theta
// degree, so the matrix has a well-defined form degree (needed wherever a
// graded-commutator sign depends on it).
MatrixSeries dmat(testgen::Rng& rng, const ModelPtr& model, int n, int th) {
  MatrixSeries a(model, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Monomial m = unit_monomial(*model);
      if (th == 1) m.theta = testgen::uniform(rng, 0, 1) ? 1u : 2u;
      if (th == 2) m.theta = 3u;
      m.fiber[testgen::uniform(rng, 0, 1)] = testgen::uniform(rng, 0, 2);
      m.base[testgen::uniform(rng, 0, 1)] = testgen::uniform(rng, 0, 1);
      a.at(i, j) += FormalSeries::monomial(model, m, testgen::random_nonzero_rational(rng));
    }
  return a;
}

Chain dchain(testgen::Rng& rng, const ModelPtr& model, int deg, int maxth = 2) {
  std::vector<MatrixSeries> e;
  for (int i = 0; i <= deg; ++i)
    e.push_back(dmat(rng, model, 2, testgen::uniform(rng, 0, maxth)));
  return Chain::from_entries(e);
}

// One-term cochain with prescribed factor theta degrees and argument
// parities; the derivative multi-indices are random nonzero fiber indices.
Cochain pcochain(testgen::Rng& rng, const ModelPtr& model, const std::vector<int>& fdeg,
                 const std::vector<int>& eps) {
  int ar = static_cast<int>(eps.size());
  Cochain c(model, 2, ar, DerivKind::Fiber);
  CochainTerm t;
  for (int f = 0; f <= ar; ++f) t.factors.push_back(dmat(rng, model, 2, fdeg[f]));
  for (int j = 0; j < ar; ++j) {
    std::vector<int> al(model->dim, 0);
    al[testgen::uniform(rng, 0, model->dim - 1)] = 1;
    t.alpha.push_back(al);
    t.eps.push_back(eps[j]);
  }
  c.add_term(t);
  return c;
}

Cochain dcochain(testgen::Rng& rng, const ModelPtr& model, int ar) {
  std::vector<int> fd(ar + 1), ep(ar);
  for (auto& x : fd) x = testgen::uniform(rng, 0, 2);
  for (auto& x : ep) x = testgen::uniform(rng, 0, 1);
  return pcochain(rng, model, fd, ep);
}

// Suspended degree of a one-term cochain.
int codeg(const Cochain& P) {
  int g = 0;
  for (const auto& f : P.terms()[0].factors) g += f.max_form_degree();
  return g + P.arity() - 1;
}

}  // namespace

TEST_CASE("cochain evaluation") {
  auto m = plane();
  auto y1 = scalar_mat(FormalSeries::fiber(m, 1));
  auto y2 = scalar_mat(FormalSeries::fiber(m, 2));
  Cochain mu = Cochain::mu(m, 1);
  CHECK(mu.evaluate({y1, y2}) == y1 * y2);

  // normalized cochains kill fiber-constant arguments
  Cochain P(m, 1, 1, DerivKind::Fiber);
  CochainTerm t;
  t.factors = {scalar_mat(FormalSeries::one(m)), scalar_mat(FormalSeries::one(m))};
  t.alpha = {{1, 0}};
  t.eps = {0};
  P.add_term(t);
  CHECK(P.is_normalized());
  auto f = scalar_mat(FormalSeries::coordinate(m, 1) + FormalSeries(m, rat(3)));
  CHECK(P.evaluate({f}).is_zero());

  // the constant bivector as a bidifferential cochain: pi(y1, y2) = 1
  Cochain pi(m, 1, 2, DerivKind::Fiber);
  CochainTerm t1;
  t1.factors.assign(3, scalar_mat(FormalSeries::one(m)));
  t1.alpha = {{1, 0}, {0, 1}};
  t1.eps = {0, 0};
  pi.add_term(t1);
  CochainTerm t2 = t1;
  t2.alpha = {{0, 1}, {1, 0}};
  t2.factors[0] = scalar_mat(-FormalSeries::one(m));
  pi.add_term(t2);
  CHECK(pi.evaluate({y1, y2}) == scalar_mat(FormalSeries::one(m)));
  CHECK(pi.evaluate({y2, y1}) == scalar_mat(-FormalSeries::one(m)));
}

TEST_CASE("gerstenhaber bracket") {
  auto m = plane();
  testgen::Rng rng(101);
  Cochain mu = Cochain::mu(m, 2);

  // associativity of the product is [mu, mu] = 0
  CHECK(cochain_zero_on_samples(gerstenhaber(mu, mu)));

  // arity-0 one-form elements bracket to the algebra commutator; theta-free
  // elements are odd in the shifted grading and anticommute instead
  MatrixSeries v = dmat(rng, m, 2, 1), w = dmat(rng, m, 2, 1);
  Cochain c = gerstenhaber(Cochain::element(v), Cochain::element(w));
  CHECK((c.evaluate({}) - (v * w - w * v)).is_zero());
  MatrixSeries v0 = dmat(rng, m, 2, 0), w0 = dmat(rng, m, 2, 0);
  Cochain c0 = gerstenhaber(Cochain::element(v0), Cochain::element(w0));
  CHECK((c0.evaluate({}) - (v0 * w0 + w0 * v0)).is_zero());

  // graded antisymmetry on random pairs
  for (int trial = 0; trial < 3; ++trial) {
    Cochain P = dcochain(rng, m, 2), Q = dcochain(rng, m, 1);
    Cochain sym = gerstenhaber(P, Q);
    Cochain back = gerstenhaber(Q, P);
    if ((codeg(P) * codeg(Q)) % 2)
      sym -= back;
    else
      sym += back;
    CHECK(cochain_zero_on_samples(sym));
  }
}

TEST_CASE("hochschild codifferential") {
  auto m = plane();
  testgen::Rng rng(202);
  Cochain mu = Cochain::mu(m, 2);

  CHECK(cochain_zero_on_samples(hoch_codiff(mu, mu)));

  // the codifferential of an element is the commutator 1-cochain
  MatrixSeries v = dmat(rng, m, 2, 0), a = dmat(rng, m, 2, 0);
  Cochain dv = hoch_codiff(Cochain::element(v), mu);
  CHECK((dv.evaluate({a}) - (v * a - a * v)).is_zero());

  for (int ar = 1; ar <= 2; ++ar) {
    Cochain P = dcochain(rng, m, ar);
    CHECK(cochain_zero_on_samples(hoch_codiff(hoch_codiff(P, mu), mu)));
  }
}

TEST_CASE("hochschild boundary") {
  auto m = plane();
  testgen::Rng rng(303);
  Cochain mu = Cochain::mu(m, 2);

  // degree-1 boundary is the commutator (even entries)
  MatrixSeries a0 = dmat(rng, m, 2, 0), a1 = dmat(rng, m, 2, 0);
  Chain c1 = Chain::from_entries({a0, a1});
  Chain expect = Chain::from_entries({a0 * a1});
  expect -= Chain::from_entries({a1 * a0});
  CHECK((hoch_boundary(c1, mu) - expect).is_zero());

  // 0-chains are cycles
  CHECK(hoch_boundary(Chain::from_entries({a0}), mu).is_zero());

  // b^2 = 0 on dense graded chains
  for (int deg = 2; deg <= 3; ++deg) {
    Chain c = dchain(rng, m, deg);
    CHECK(hoch_boundary(hoch_boundary(c, mu), mu).is_zero());
  }
}

TEST_CASE("R action golden contract") {
  auto m = plane();
  testgen::Rng rng(404);
  Cochain mu = Cochain::mu(m, 2);

  SUBCASE("R_mu is the boundary, global sign +1") {
    for (int trial = 0; trial < 6; ++trial) {
      Chain c = dchain(rng, m, 1 + trial % 3);
      CHECK((act_R(mu, c) - hoch_boundary(c, mu)).is_zero());
    }
  }

  SUBCASE("element action expands with alternating signs") {
    // R_B(q (x) B^k) = (-1)^k (k+1) q (x) B^{k+1} for an odd 1-form B
    FormalSeries Bs = FormalSeries::fiber(m, 1) * FormalSeries::theta(m, 1) +
                      FormalSeries::coordinate(m, 2) * FormalSeries::theta(m, 2);
    MatrixSeries B = MatrixSeries::scalar(Bs, 2);
    MatrixSeries q = dmat(rng, m, 2, 0);
    Cochain Bel = Cochain::element(B);
    for (int k = 0; k <= 2; ++k) {
      std::vector<MatrixSeries> e{q};
      for (int j = 0; j < k; ++j) e.push_back(B);
      Chain c = Chain::from_entries(e);
      e.push_back(B);
      Rational coef = rat((k % 2) ? -(k + 1) : (k + 1));
      CHECK((act_R(Bel, c) - coef * Chain::from_entries(e)).is_zero());
    }
  }

  SUBCASE("Lie module identity") {
    // pairs include cochains whose odd factors sit on opposite sides of the
    // argument slots -- the configurations that pin the composition signs
    struct Pair {
      Cochain P, Q;
      Chain c;
    };
    std::vector<Pair> pairs;
    pairs.push_back({pcochain(rng, m, {0, 1}, {1}), pcochain(rng, m, {1, 0}, {1}),
                     dchain(rng, m, 3)});
    pairs.push_back({pcochain(rng, m, {0, 1}, {0}), pcochain(rng, m, {1, 0}, {0}),
                     dchain(rng, m, 2)});
    pairs.push_back({pcochain(rng, m, {0, 1, 0}, {1, 0}), pcochain(rng, m, {1, 0}, {1}),
                     dchain(rng, m, 3)});
    for (int s = 0; s < 4; ++s)
      pairs.push_back({dcochain(rng, m, testgen::uniform(rng, 0, 2)),
                       dcochain(rng, m, testgen::uniform(rng, 1, 2)),
                       dchain(rng, m, testgen::uniform(rng, 2, 3))});
    for (const auto& p : pairs) {
      Chain lhs = act_R(gerstenhaber(p.P, p.Q), p.c);
      Chain rhs = act_R(p.P, act_R(p.Q, p.c));
      Chain rev = act_R(p.Q, act_R(p.P, p.c));
      if ((codeg(p.P) * codeg(p.Q)) % 2)
        rhs += rev;
      else
        rhs -= rev;
      CHECK((lhs - rhs).is_zero());
    }
  }

  SUBCASE("boundary commutes into the codifferential") {
    for (int trial = 0; trial < 4; ++trial) {
      Cochain P = dcochain(rng, m, testgen::uniform(rng, 0, 2));
      Chain c = dchain(rng, m, 3);
      Chain lhs = act_R(mu, act_R(P, c));
      Chain rb = act_R(P, act_R(mu, c));
      if (codeg(P) % 2)
        lhs += rb;
      else
        lhs -= rb;
      CHECK((lhs - act_R(hoch_codiff(P, mu), c)).is_zero());
    }
  }

  SUBCASE("graded Jacobi") {
    for (int s = 0; s < 2; ++s) {
      Cochain A = dcochain(rng, m, 2), B = dcochain(rng, m, 1),
              C = dcochain(rng, m, s ? 2 : 1);
      Cochain lhs = gerstenhaber(gerstenhaber(A, B), C);
      Cochain r1 = gerstenhaber(A, gerstenhaber(B, C));
      Cochain r2 = gerstenhaber(B, gerstenhaber(A, C));
      Cochain rhs = r1;
      if ((codeg(A) * codeg(B)) % 2)
        rhs += r2;
      else
        rhs -= r2;
      CHECK(cochain_zero_on_samples(lhs - rhs, 8));
    }
  }
}

TEST_CASE("trace and cotrace") {
  auto m = plane();
  testgen::Rng rng(505);
  auto a = testgen::random_series(rng, m, 3, {2, 2, false, 0, 0});
  auto b = testgen::random_series(rng, m, 3, {2, 2, false, 0, 0});

  auto unit = [&](int i, int j, const FormalSeries& s) {
    MatrixSeries e(m, 2);
    e.at(i, j) = s;
    return e;
  };

  // elementary matrices route the tensor indices
  Chain c = Chain::from_entries({unit(0, 1, a), unit(1, 0, b)});
  Chain want = Chain::from_entries({scalar_mat(a), scalar_mat(b)});
  CHECK((trace_chain(c) - want).is_zero());
  CHECK(trace_chain(Chain::from_entries({unit(0, 0, a), unit(1, 1, b)})).is_zero());

  // 0-chains reduce to the matrix trace
  MatrixSeries M = dmat(rng, m, 2, 0);
  CHECK((trace_chain(Chain::from_entries({M})) -
         Chain::from_entries({scalar_mat(M.at(0, 0) + M.at(1, 1))}))
            .is_zero());

  // cotrace of the scalar product is the matrix product cochain
  Cochain cot = cotrace(Cochain::mu(m, 1), 2);
  MatrixSeries A = dmat(rng, m, 2, 0), B = dmat(rng, m, 2, 0);
  CHECK((cot.evaluate({A, B}) - A * B).is_zero());

  // chain map property on dense graded samples
  Cochain mu2 = Cochain::mu(m, 2);
  Cochain mu1 = Cochain::mu(m, 1);
  for (int deg = 1; deg <= 3; ++deg) {
    Chain d = dchain(rng, m, deg);
    CHECK((trace_chain(hoch_boundary(d, mu2)) - hoch_boundary(trace_chain(d), mu1))
              .is_zero());
  }
}

TEST_CASE("twisted trace and cotrace") {
  auto m = plane();
  testgen::Rng rng(606);
  Cochain mu2 = Cochain::mu(m, 2);
  Cochain mu1 = Cochain::mu(m, 1);

  // gamma = 0 reduces both twists to the plain maps
  MatrixSeries zero(m, 2);
  Chain c = dchain(rng, m, 2);
  CHECK((trace_tw(c, zero) - trace_chain(c)).is_zero());
  auto tw0 = cotrace_tw(mu1, zero, 2);
  REQUIRE(tw0.size() == 1);
  CHECK(cochain_zero_on_samples(tw0[0] - cotrace(mu1, 2)));

  // at d = 2 a theta-raising insertion nilpotizes in exactly three steps
  MatrixSeries gamma = FormalSeries::theta(m, 1) * dmat(rng, m, 2, 0) +
                       FormalSeries::theta(m, 2) * dmat(rng, m, 2, 0);
  Cochain g = Cochain::element(gamma);
  Chain c1 = prune_theta(dchain(rng, m, 2, 0));
  Chain once = prune_theta(act_R(g, c1));
  Chain twice = prune_theta(act_R(g, once));
  CHECK(!once.is_zero());
  CHECK(!twice.is_zero());
  CHECK(prune_theta(act_R(g, twice)).is_zero());

  // tr_tw intertwines the twisted boundary sum_k (-1)^k/k! R_{ad_g^k mu}
  // with the plain scalar boundary
  std::vector<Cochain> tw{mu2};
  Cochain cur = mu2;
  Rational f = 1;
  for (int k = 1; k <= 3; ++k) {
    cur = gerstenhaber(g, cur);
    f = -f / k;
    if (!cur.structurally_zero()) tw.push_back(f * cur);
  }
  auto b_tw = [&](const Chain& x) {
    Chain r(m, 2);
    for (const auto& P : tw) r += act_R(P, x);
    return prune_theta(r);
  };
  for (int deg = 1; deg <= 3; ++deg) {
    std::vector<MatrixSeries> e;
    for (int i = 0; i <= deg; ++i) e.push_back(dmat(rng, m, 2, i == 0 ? 0 : 1));
    Chain d = prune_theta(Chain::from_entries(e));
    Chain lhs = prune_theta(hoch_boundary(trace_tw(d, gamma), mu1));
    Chain rhs = prune_theta(trace_tw(b_tw(d), gamma));
    CHECK((lhs - rhs).is_zero());
  }
}

TEST_CASE("chain normalization") {
  auto m = plane();
  MatrixSeries one = MatrixSeries::identity(m, 1);
  MatrixSeries a0 = scalar_mat(FormalSeries::fiber(m, 1) * FormalSeries::fiber(m, 2));
  MatrixSeries mixed = scalar_mat(FormalSeries::fiber(m, 1) + FormalSeries(m, rat(5)));

  CHECK(normalize_chain(Chain::from_entries({a0, one})).is_zero());
  Chain want = Chain::from_entries({a0, scalar_mat(FormalSeries::fiber(m, 1))});
  CHECK((normalize_chain(Chain::from_entries({a0, mixed})) - want).is_zero());
  CHECK((normalize_chain(want) - want).is_zero());
}
