#include "hah/corpus.hpp"

#include <algorithm>

#include "hah/errors.hpp"

namespace hah::corpus {

Element random_element(const AlgebraPtr& algebra, int arity, bool reduced, int n, std::mt19937_64& rng,
                       double density) {
  Element e(algebra, arity, n);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<long> coef(-3, 3);
  for (const auto& key : algebra->tensor_basis(arity, reduced, n))
    if (coin(rng) < density) e.add_term(key, Scalar(algebra->ring(), coef(rng)));
  return e;
}

Matrix primitive_cycles(const HahPresentation& h, int n) {
  const auto& alg = h.algebra();
  const std::size_t dim = alg->basis(n).size();
  if (n <= 0) return Matrix(h.ring(), dim, 0);
  Matrix dbar = linear_map_matrix(alg, 1, true, n, 2, true, n, [&h](const Element& e) { return h.reduced_diagonal(e); });
  Matrix d = h.complex().boundary(n);
  return kernel_basis(dbar.vstack(d));
}

HahPresentation random_primitive_presentation(Ring ring, const PresentationShape& shape, std::mt19937_64& rng) {
  if (shape.flavor == Flavor::GradedCommutative && !ring.is_field())
    fail(ErrorCode::InvalidArgument, "commutative corpus members are built over F_p");
  std::uniform_int_distribution<int> degree(shape.q, shape.max_degree);
  std::vector<int> degrees;
  for (int i = 0; i < shape.generators; ++i) degrees.push_back(degree(rng));
  std::sort(degrees.begin(), degrees.end());
  std::vector<GeneratorSpec> gens;
  const char* names = "abcdefghjkmnrst";
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    GeneratorSpec g{std::string(1, names[i % 15]) + (i >= 15 ? std::to_string(i / 15) : ""), degrees[i], 0};
    if (shape.flavor == Flavor::GradedCommutative && g.degree % 2 == 0 && ring.kind() == RingKind::ModP)
      g.truncation = ring.prime();
    gens.push_back(g);
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<long> coef(-2, 2);
  auto empty = AlgebraPresentation::make(ring, shape.flavor, {}, shape.cap);
  HahPresentation h = HahPresentation::primitively_generated(empty, Derivation::zero(empty), shape.q,
                                                             ring.prime());
  for (const auto& g : gens) {
    const int n = g.degree - 1;
    Matrix z = primitive_cycles(h, n);
    Vector v = zero_vector(ring, h.algebra()->basis(n).size());
    for (std::size_t j = 0; j < z.cols(); ++j) v = add(v, scale(Scalar(ring, coef(rng)), z.column(j)));
    if (ring.kind() == RingKind::Localized && coin(rng) < shape.torsion_chance)
      v = scale(Scalar(ring, static_cast<long>(ring.prime())), v);
    Element b = from_vector(h.algebra(), 1, false, n, v);
    h = h.with_generator(g, b, Element::zero(h.algebra(), 2, g.degree));
  }
  return h;
}

}  // namespace hah::corpus
