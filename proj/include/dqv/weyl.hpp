#pragma once

#include "dqv/series.hpp"

namespace dqv {

// delta = sum_i th^i d/dy^i, a left derivation with delta^2 = 0.
FormalSeries delta(const FormalSeries& a);

// Combinatorial closed form of the contracting homotopy: on a monomial of
// fiber degree p and form degree q, apply y^k d/d(th^k) and divide by p+q;
// zero when p+q = 0.
FormalSeries delta_inv(const FormalSeries& a);

// y = th = 0 restriction.
FormalSeries chi(const FormalSeries& a);

// a - chi(a) - delta(delta_inv(a)) - delta_inv(delta(a)); identically zero.
FormalSeries hodge_residual(const FormalSeries& a);

// Left derivative d/d(th^i) (1-based index). Odd derivation.
FormalSeries theta_derive(int i, const FormalSeries& f);

// d/dy^i (1-based index). Even derivation.
FormalSeries fiber_derive(int i, const FormalSeries& f);
FormalSeries fiber_derive_multi(const std::vector<int>& alpha, const FormalSeries& f);

// Plane: d/dx^i. Torus: Euler derivation u^i d/du^i. 1-based index.
FormalSeries base_derive(int i, const FormalSeries& f);
FormalSeries base_derive_multi(const std::vector<int>& alpha, const FormalSeries& f);

}  // namespace dqv
