#pragma once

#include "hah/hopf.hpp"

namespace hah::fixtures {

/// F_p[x] ⊗ Λ(y), |x| = 2n, |y| = 2n - 1, ∂x = y; both generators primitive.
HahPresentation polynomial_exterior(int p, int n, int cap);
/// Λ(x) ⊗ F_p[y], |x| = 3, |y| = 2, ∂x = y.
HahPresentation exterior_polynomial(int p, int cap);

/// Λ(z), ∂ = 0; |z| odd.
HahPresentation b1(int p, int z_degree, int cap);
/// F_p[z]/(z^p), ∂ = 0; |z| even.
HahPresentation b2(int p, int z_degree, int cap);
/// Λ(x) ⊗ F_p[y]/(y^p), ∂x = y; |x| odd.
HahPresentation b3(int p, int x_degree, int cap);
/// F_p[x]/(x^p) ⊗ Λ(y), ∂x = y; |x| even.
HahPresentation b4(int p, int x_degree, int cap);

/// T(u, v) over Z_(p), |u| = 2, |v| = 3, ∂v = p u, primitive generators.
HahPresentation torsion_pair(int p, int cap);

/// Free associative u(2), v(3), w(4) over Z_(p): ∂v = p u, ∂w = 0,
/// Δ̄w = c u⊗u, other generators primitive; q = 2, ρ = p.
HahPresentation three_generator(int p, long c, int cap);

}  // namespace hah::fixtures
