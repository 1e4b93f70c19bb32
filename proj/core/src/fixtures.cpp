#include "hah/fixtures.hpp"

namespace hah::fixtures {

namespace {

HahPresentation two_generator(Ring ring, GeneratorSpec low, GeneratorSpec high, bool boundary, int cap) {
  auto alg = AlgebraPresentation::make(ring, Flavor::GradedCommutative, {low, high}, cap);
  std::vector<Element> d{Element::zero(alg, 1, low.degree - 1),
                         boundary ? Element::generator(alg, 0) : Element::zero(alg, 1, high.degree - 1)};
  return HahPresentation::primitively_generated(alg, Derivation(alg, std::move(d)));
}

HahPresentation one_generator(Ring ring, GeneratorSpec g, int cap) {
  auto alg = AlgebraPresentation::make(ring, Flavor::GradedCommutative, {g}, cap);
  return HahPresentation::primitively_generated(alg, Derivation::zero(alg));
}

}  // namespace

HahPresentation polynomial_exterior(int p, int n, int cap) {
  return two_generator(Ring::mod_p(p), {"y", 2 * n - 1, 0}, {"x", 2 * n, 0}, true, cap);
}

HahPresentation exterior_polynomial(int p, int cap) {
  return two_generator(Ring::mod_p(p), {"y", 2, 0}, {"x", 3, 0}, true, cap);
}

HahPresentation b1(int p, int z_degree, int cap) { return one_generator(Ring::mod_p(p), {"z", z_degree, 0}, cap); }

HahPresentation b2(int p, int z_degree, int cap) { return one_generator(Ring::mod_p(p), {"z", z_degree, p}, cap); }

HahPresentation b3(int p, int x_degree, int cap) {
  return two_generator(Ring::mod_p(p), {"y", x_degree - 1, p}, {"x", x_degree, 0}, true, cap);
}

HahPresentation b4(int p, int x_degree, int cap) {
  return two_generator(Ring::mod_p(p), {"y", x_degree - 1, 0}, {"x", x_degree, p}, true, cap);
}

HahPresentation torsion_pair(int p, int cap) {
  const Ring ring = Ring::localized(p);
  auto alg = AlgebraPresentation::make(ring, Flavor::FreeAssociative, {{"u", 2, 0}, {"v", 3, 0}}, cap);
  std::vector<Element> d{Element::zero(alg, 1, 1), Scalar(ring, static_cast<long>(p)) * Element::generator(alg, 0)};
  return HahPresentation::primitively_generated(alg, Derivation(alg, std::move(d)), 2, p);
}

HahPresentation three_generator(int p, long c, int cap) {
  const Ring ring = Ring::localized(p);
  auto alg =
      AlgebraPresentation::make(ring, Flavor::FreeAssociative, {{"u", 2, 0}, {"v", 3, 0}, {"w", 4, 0}}, cap);
  std::vector<Element> d{Element::zero(alg, 1, 1), Scalar(ring, static_cast<long>(p)) * Element::generator(alg, 0),
                         Element::zero(alg, 1, 3)};
  std::vector<Element> diag{Element::zero(alg, 2, 2), Element::zero(alg, 2, 3),
                            Element::tensor_monomial(alg, {{0}, {0}}, Scalar(ring, c))};
  return HahPresentation(alg, Derivation(alg, std::move(d)), std::move(diag), {}, {}, 2, p);
}

}  // namespace hah::fixtures
