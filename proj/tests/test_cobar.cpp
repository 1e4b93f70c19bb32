#include "doctest.h"
#include "hah/cobar.hpp"
#include "hah/corpus.hpp"
#include "hah/errors.hpp"
#include "hah/fixtures.hpp"
#include "support.hpp"

using namespace hah;

namespace {

Element gen(const AlgebraPtr& a, const std::string& name) { return Element::generator(a, *a->generator_index(name)); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ValidationError;
}

Vector random_combination(const Matrix& columns, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> coef(-3, 3);
  Vector v = zero_vector(columns.ring(), columns.rows());
  for (std::size_t j = 0; j < columns.cols(); ++j) v = add(v, scale(Scalar(columns.ring(), coef(rng)), columns.column(j)));
  return v;
}

Element random_cycle(const HahPresentation& h, int arity, int n, std::mt19937_64& rng) {
  const bool reduced = arity == 2;
  Matrix z = kernel_basis(h.differential().matrix(arity, reduced, n));
  return from_vector(h.algebra(), arity, reduced, n, random_combination(z, rng));
}

// Φ ∈ Δ̄(ker ∂_n) + ∂(I⊗I)_{n+1}, decided by F_p ranks of [[∂_n, 0], [Δ̄, ∂]].
bool trivializable_by_rank(const HahPresentation& h, const Element& phi) {
  const int n = phi.degree();
  const auto& alg = h.algebra();
  const Ring R = h.ring();
  Matrix dn = h.differential().matrix(1, true, n);
  Matrix dbar = linear_map_matrix(alg, 1, true, n, 2, true, n, [&h](const Element& e) { return h.reduced_diagonal(e); });
  Matrix d2 = h.differential().matrix(2, true, n + 1);
  Matrix sys = dn.hstack(Matrix(R, dn.rows(), d2.cols())).vstack(dbar.hstack(d2));
  Vector rhs = zero_vector(R, dn.rows());
  Vector p = to_vector(phi, true);
  rhs.insert(rhs.end(), p.begin(), p.end());
  Matrix aug = sys.hstack(Matrix::from_columns(R, rhs.size(), {rhs}));
  const long prime = R.prime();
  return oracle::rank_mod_p(support::to_int(sys), prime) == oracle::rank_mod_p(support::to_int(aug), prime);
}

}  // namespace

TEST_SUITE("cobar_truncation") {
  TEST_CASE("T(u): the square of a primitive has Δ̄(u·u) = 2 u⊗u in the cobar differential") {
    Ring R = Ring::localized(3);
    auto alg = AlgebraPresentation::make(R, Flavor::FreeAssociative, {{"u", 2, 0}}, 6);
    auto h = HahPresentation::primitively_generated(alg, Derivation::zero(alg));
    auto c = build_truncated_cobar(h);
    CHECK(c.top() == 4);
    // C_3 = I_4 ⊕ (I⊗I)_5 = <s⁻¹uu>, C_2 = I_3 ⊕ (I⊗I)_4 = <σ u⊗u>.
    const Matrix& d3 = c.complex().boundary(3);
    REQUIRE(d3.rows() == 1);
    REQUIRE(d3.cols() == 1);
    CHECK(d3.at(0, 0) == Scalar(R, 2L));
    // On the generator itself only the ∂ part survives.
    const Matrix& d1 = c.complex().boundary(1);
    CHECK(d1.is_zero());
  }

  TEST_CASE("d² = 0 on the truncated cobar complex of corpus presentations") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      std::mt19937_64 rng(seed);
      corpus::PresentationShape shape;
      shape.cap = 10;
      const Ring R = seed % 2 ? Ring::localized(3) : Ring::localized(5);
      auto h = corpus::random_primitive_presentation(R, shape, rng);
      auto c = build_truncated_cobar(h);
      for (int k = 1; k < c.top(); ++k) CHECK(c.complex().squares_to_zero_at(k));
    }
    corpus::PresentationShape comm;
    comm.flavor = Flavor::GradedCommutative;
    comm.cap = 10;
    std::mt19937_64 rng(77);
    auto h = corpus::random_primitive_presentation(Ring::mod_p(3), comm, rng);
    auto c = build_truncated_cobar(h);
    for (int k = 1; k < c.top(); ++k) CHECK(c.complex().squares_to_zero_at(k));
    // Non-primitive generator diagonals, still a strict coderivation.
    auto t = build_truncated_cobar(fixtures::three_generator(3, 2, 9));
    for (int k = 1; k < t.top(); ++k) CHECK(t.complex().squares_to_zero_at(k));
  }

  TEST_CASE("nonzero homotopy witnesses are rejected") {
    auto h = fixtures::three_generator(3, 1, 8);
    const auto& alg = h.algebra();
    Element g = tensor(gen(alg, "u"), gen(alg, "v"));
    auto h2 = HahPresentation(alg, h.differential(), h.generator_diagonals(), {},
                              {std::nullopt, std::nullopt, std::optional<Element>(g)}, 2, 3);
    CHECK(code_of([&] { build_truncated_cobar(h2); }) == ErrorCode::NotStrict);
  }

  TEST_CASE("a diagonal that is not a coderivation is rejected") {
    Ring R = Ring::localized(3);
    auto alg = AlgebraPresentation::make(R, Flavor::FreeAssociative, {{"u", 2, 0}, {"v", 3, 0}, {"w", 6, 0}}, 8);
    // ∂w = u·v is not primitive while Δ̄w = 0.
    Derivation d(alg, {Element::zero(alg, 1, 1), Element::zero(alg, 1, 2), multiply(gen(alg, "u"), gen(alg, "v"))});
    auto h = HahPresentation::primitively_generated(alg, d);
    CHECK(code_of([&] { build_truncated_cobar(h); }) == ErrorCode::NotACoderivation);
  }

  TEST_CASE("obstruction of zero, of Δ̄a₀ and of a boundary vanishes") {
    auto h = fixtures::torsion_pair(3, 8);
    auto c = build_truncated_cobar(h);
    const auto& alg = h.algebra();
    CHECK(obstruction(c, Element::zero(alg, 2, 5)).is_zero());
    Element u = gen(alg, "u");
    Element uu = multiply(u, u);
    CHECK(obstruction(c, h.reduced_diagonal(uu)).is_zero());
    Element vv = tensor(gen(alg, "v"), gen(alg, "v"));
    CHECK(obstruction(c, h.differential().apply(vv)).is_zero());
    auto out = oracle_trivialize(c, Element::zero(alg, 2, 5));
    REQUIRE(out.trivialization);
    CHECK(out.trivialization->a.is_zero());
    CHECK(out.trivialization->psi.is_zero());
    auto bd = oracle_trivialize(c, h.differential().apply(vv));
    REQUIRE(bd.trivialization);
  }

  TEST_CASE("u⊗v − v⊗u in T(u, v) with ∂v = 3u is obstructed with order 3") {
    auto h = fixtures::torsion_pair(3, 8);
    auto c = build_truncated_cobar(h);
    const auto& alg = h.algebra();
    Element u = gen(alg, "u"), v = gen(alg, "v");
    Element phi = tensor(u, v) - tensor(v, u);
    auto ob = obstruction(c, phi);
    CHECK_FALSE(ob.is_zero());
    REQUIRE(ob.cls.order_exponent());
    CHECK(*ob.cls.order_exponent() == 1);
    CHECK(ob.describe() == "nonzero class in H_3(C) of order p^1");
    auto out = oracle_trivialize(c, phi);
    CHECK(out.obstructed());
    // 3Φ = ∂(v⊗v).
    auto triple = oracle_trivialize(c, Scalar(h.ring(), 3L) * phi);
    REQUIRE(triple.trivialization);
    // Over Q the class dies.
    auto hq = h.with_ring(Ring::rational());
    auto cq = build_truncated_cobar(hq);
    CHECK(obstruction(cq, phi.rebased(hq.algebra())).is_zero());
  }

  TEST_CASE("obstruction needs a cycle and room above the degree") {
    auto h = fixtures::torsion_pair(3, 8);
    auto c = build_truncated_cobar(h);
    const auto& alg = h.algebra();
    Element vv = tensor(gen(alg, "v"), gen(alg, "v"));
    CHECK(code_of([&] { obstruction(c, vv); }) == ErrorCode::NotACycle);
    Element big = tensor(gen(alg, "u"), multiply(gen(alg, "u"), gen(alg, "u")));
    Element top = multiply(big, tensor(gen(alg, "u"), Element::unit(alg)));
    CHECK(code_of([&] { obstruction(c, top); }) == ErrorCode::DegreeOutOfCap);
  }

  TEST_CASE("seeded Φ = Δ̄a₀ + ∂Ψ₀ is trivialized with an exact identity") {
    int solved = 0;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      std::mt19937_64 rng(seed);
      corpus::PresentationShape shape;
      shape.cap = 10;
      const Ring R = Ring::localized(seed % 2 ? 3 : 5);
      auto h = corpus::random_primitive_presentation(R, shape, rng);
      auto c = build_truncated_cobar(h);
      for (int n = 4; n <= 9; ++n) {
        Element a0 = random_cycle(h, 1, n, rng);
        Element psi0 = corpus::random_element(h.algebra(), 2, true, n + 1, rng);
        Element phi = h.reduced_diagonal(a0) + h.differential().apply(psi0);
        if (phi.is_zero()) continue;
        auto out = oracle_trivialize(c, phi);
        REQUIRE(out.trivialization);
        const auto& t = *out.trivialization;
        CHECK(h.differential().apply(t.a).is_zero());
        CHECK((h.reduced_diagonal(t.a) - phi - h.differential().apply(t.psi)).is_zero());
        ++solved;
      }
    }
    CHECK(solved >= 20);
  }

  TEST_CASE("over F_p the obstruction verdict matches an independent rank test") {
    int zero = 0, nonzero = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      std::mt19937_64 rng(seed);
      corpus::PresentationShape shape;
      shape.cap = 9;
      auto h = corpus::random_primitive_presentation(Ring::mod_p(seed % 2 ? 3 : 5), shape, rng);
      auto c = build_truncated_cobar(h);
      for (int n = 3; n <= 8; ++n) {
        Element phi = random_cycle(h, 2, n, rng);
        if (phi.is_zero()) continue;
        const bool expected = trivializable_by_rank(h, phi);
        auto out = oracle_trivialize(c, phi);
        CHECK(out.obstructed() == !expected);
        CHECK(obstruction(c, phi).is_zero() == expected);
        (expected ? zero : nonzero)++;
      }
    }
    CHECK(zero > 0);
    CHECK(nonzero > 0);
  }
}
