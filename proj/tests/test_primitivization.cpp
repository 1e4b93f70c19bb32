#include "doctest.h"
#include "hah/errors.hpp"
#include "hah/fixtures.hpp"
#include "hah/primitivization.hpp"

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

// T(u, v) over Z_(p), ∂v = k·u.
HahPresentation pair_with(int p, long k, int cap) {
  const Ring R = Ring::localized(p);
  auto alg = AlgebraPresentation::make(R, Flavor::FreeAssociative, {{"u", 2, 0}, {"v", 3, 0}}, cap);
  Derivation d(alg, {Element::zero(alg, 1, 1), Scalar(R, k) * Element::generator(alg, 0)});
  return HahPresentation::primitively_generated(alg, d, 2, p);
}

bool invariant_holds(const ExtensionProblem& pr, const InductionState& s) {
  const auto& h = pr.base;
  const auto& d = h.differential();
  const Scalar pr_r = Scalar::prime_power(h.ring(), s.r);
  return d.apply(s.a).is_zero() && d.apply(s.phi).is_zero() &&
         h.reduced_diagonal(s.a) == pr.phi - pr_r * s.phi + d.apply(s.omega);
}

}  // namespace

TEST_SUITE("primitivization") {
  TEST_CASE("boundary adjustment: primitive input is left alone") {
    auto h = pair_with(3, 3, 8);
    Element u = gen(h.algebra(), "u");
    auto adj = make_boundary_primitive(h, Scalar(h.ring(), 3L) * u);
    CHECK(adj.z == Scalar(h.ring(), 3L) * u);
    CHECK(adj.c.is_zero());
  }

  TEST_CASE("boundary adjustment splits a boundary into primitive plus ∂c") {
    // ∂v = u makes u·u = ∂(v·u) a boundary with Δ̄(u·u) = 2 u⊗u.
    auto h = pair_with(3, 1, 8);
    Element u = gen(h.algebra(), "u");
    Element uu = multiply(u, u);
    auto adj = make_boundary_primitive(h, uu);
    CHECK(h.reduced_diagonal(adj.z).is_zero());
    CHECK(adj.z + h.differential().apply(adj.c) == uu);
  }

  TEST_CASE("boundary adjustment rejects a non-primitive class and large degrees") {
    auto h = pair_with(3, 0, 8);
    Element u = gen(h.algebra(), "u");
    CHECK(code_of([&] { make_boundary_primitive(h, multiply(u, u)); }) == ErrorCode::HypothesisViolation);
    CHECK(code_of([&] { make_boundary_primitive(h, multiply(u, multiply(u, u))); }) == ErrorCode::OutOfRange);
    auto h3 = pair_with(3, 3, 8);
    CHECK(code_of([&] { make_boundary_primitive(h3, gen(h3.algebra(), "v")); }) == ErrorCode::NotACycle);
  }

  TEST_CASE("key lemma with b = 0 returns zero corrections") {
    auto h = pair_with(3, 9, 8);
    const auto& alg = h.algebra();
    Element u = gen(alg, "u");
    Element a = multiply(u, u);
    auto out = key_lemma_correct(h, a, Element::zero(alg, 1, 3), Element::zero(alg, 2, 4), 1);
    CHECK(out.x.is_zero());
    CHECK(out.y.is_zero());
    CHECK(out.psi.is_zero());
    CHECK(out.states.size() == 1);
  }

  TEST_CASE("key lemma on a class of order 9 at r = 1 terminates within the bound") {
    auto h = pair_with(3, 9, 8);
    const auto& alg = h.algebra();
    const Ring R = h.ring();
    Element u = gen(alg, "u"), v = gen(alg, "v");
    // ∂v = 9u = 3·(3u); H_2 = Z/9 so m = 2 and the bound is m − r + 2 = 3.
    auto out = key_lemma_correct(h, v, Scalar(R, 3L) * u, Element::zero(alg, 2, 3), 1);
    CHECK(out.bound == 3);
    // 3u ≡ 0 mod p dies first, then u survives to page 2 and is hit by v.
    REQUIRE(out.states.size() == 3);
    CHECK(out.states[1].branch == "dead");
    CHECK(out.states[1].b == u);
    CHECK(out.states[2].branch == "survives");
    CHECK(out.states[2].b.is_zero());
    CHECK(h.differential().apply(v - out.x - Scalar(R, 3L) * out.y).is_zero());
    CHECK(h.reduced_diagonal(out.x) == Scalar(R, 3L) * out.psi);
    CHECK(code_of([&] { key_lemma_correct(h, v, u, Element::zero(alg, 2, 3), 1); }) == ErrorCode::HypothesisFails);
  }

  TEST_CASE("key lemma on seeded corpus inputs") {
    int runs = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      std::mt19937_64 rng(seed);
      ExtensionProblem pr = random_extension_problem(seed % 2 ? 3 : 5, 10, rng);
      auto iso = trivialize_extension(pr, PrimitivizationConfig::for_presentation(pr.base));
      for (const auto& run : iso.key_lemma_runs) {
        CHECK(static_cast<int>(run.states.size()) <= run.bound);
        ++runs;
      }
    }
    CHECK(runs > 0);
  }

  TEST_CASE("induction invariant holds on pages 1, 2 and 3") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      std::mt19937_64 rng(100 + seed);
      ExtensionProblem pr = random_extension_problem(seed % 2 ? 3 : 5, 10, rng);
      const auto& alg = pr.base.algebra();
      InductionState s{0, Element::zero(alg, 1, pr.degree()), pr.phi, Element::zero(alg, 2, pr.degree() + 1)};
      for (int r = 1; r <= 3; ++r) {
        s = induction_step(pr, s);
        CHECK(s.r == r);
        CHECK(invariant_holds(pr, s));
      }
    }
  }

  TEST_CASE("Φ = 0 needs no correction") {
    auto h = fixtures::torsion_pair(3, 8);
    ExtensionProblem pr =
        ExtensionProblem::make(h, {"x", 5, 0}, Element::zero(h.algebra(), 1, 4), Element::zero(h.algebra(), 2, 5));
    auto iso = trivialize_extension(pr, PrimitivizationConfig::for_presentation(h));
    CHECK(iso.a.is_zero());
    CHECK(iso.psi.is_zero());
  }

  TEST_CASE("3(u⊗v − v⊗u) is trivialized while u⊗v − v⊗u is not a Hah extension") {
    auto h = fixtures::torsion_pair(3, 8);
    const auto& alg = h.algebra();
    const Ring R = h.ring();
    Element u = gen(alg, "u"), v = gen(alg, "v");
    Element phi = tensor(u, v) - tensor(v, u);
    ExtensionProblem pr = ExtensionProblem::make(h, {"x", 5, 0}, Element::zero(alg, 1, 4), Scalar(R, 3L) * phi);
    auto iso = trivialize_extension(pr, PrimitivizationConfig::for_presentation(h));
    auto [da, res] = extension_residuals(pr, iso.a, iso.psi);
    CHECK(da.is_zero());
    CHECK(res.is_zero());
    CHECK(code_of([&] { ExtensionProblem::make(h, {"x", 5, 0}, Element::zero(alg, 1, 4), phi); }) ==
          ErrorCode::Obstructed);
  }

  TEST_CASE("seeded extension problems agree with the cobar oracle") {
    for (int p : {3, 5}) {
      for (int cap : {10, 12}) {
        ExtensionCorpusStats stats;
        int solved = 0, obstructed = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
          std::mt19937_64 rng(seed * 1000 + static_cast<std::uint64_t>(p * cap));
          ExtensionProblem pr = random_extension_problem(p, cap, rng, &stats);
          auto cobar = build_truncated_cobar(pr.base, pr.degree() + 1);
          const bool oracle_free = !oracle_trivialize(cobar, pr.phi).obstructed();
          try {
            auto iso = trivialize_extension(pr, PrimitivizationConfig::for_presentation(pr.base));
            auto [da, res] = extension_residuals(pr, iso.a, iso.psi);
            CHECK(da.is_zero());
            CHECK(res.is_zero());
            CHECK(oracle_free);
            CHECK(iso.stop_page == iso.torsion_exponent + 1);
            ++solved;
          } catch (const Error& e) {
            REQUIRE(e.code() == ErrorCode::Obstructed);
            CHECK_FALSE(oracle_free);
            ++obstructed;
          }
        }
        CHECK(stats.accepted == 20);
        CHECK(solved + obstructed == 20);
        CHECK(solved == 20);
        MESSAGE("p=" << p << " cap=" << cap << " solved=" << solved << " rejected=" << stats.rejected);
      }
    }
  }

  TEST_CASE("primitivize on u, v, w over Z_(5) with Δ̄w = 3 u⊗u") {
    auto h = fixtures::three_generator(5, 3, 14);
    auto res = primitivize(h, PrimitivizationConfig::for_presentation(h));
    CHECK(res.output.is_primitively_generated());
    CHECK(primitivization_failures(h, res).empty());
    // Θ(w) − w is a cycle with Δ̄ = 3 u⊗u up to a boundary: here (3/2)u².
    auto again = primitivize(res.output, PrimitivizationConfig::for_presentation(res.output));
    for (std::size_t i = 0; i < again.theta.size(); ++i) {
      CHECK(again.theta[i] == Element::generator(h.algebra(), static_cast<int>(i)));
      CHECK(again.homotopy[i].is_zero());
    }
  }

  TEST_CASE("primitivize the extensions of seeded problems") {
    int done = 0;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      std::mt19937_64 rng(seed + 500);
      const int p = seed % 2 ? 3 : 5;
      ExtensionProblem pr = random_extension_problem(p, 10, rng);
      HahPresentation h = pr.extension();
      PrimitivizationConfig cfg = PrimitivizationConfig::for_presentation(h);
      try {
        auto res = primitivize(h, cfg);
        CHECK(primitivization_failures(h, res).empty());
        CHECK(res.output.is_primitively_generated());
        ++done;
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Obstructed);
      }
    }
    CHECK(done >= 6);
  }

  TEST_CASE("primitivize rejects generators outside [q, qρ − 1]") {
    const Ring R = Ring::localized(3);
    auto alg = AlgebraPresentation::make(R, Flavor::FreeAssociative, {{"u", 2, 0}, {"w", 6, 0}}, 8);
    Derivation d = Derivation::zero(alg);
    std::vector<Element> diag{Element::zero(alg, 2, 2),
                              Element::tensor_monomial(alg, {{0}, {0, 0}}, Scalar::one(R)) +
                                  Element::tensor_monomial(alg, {{0, 0}, {0}}, Scalar::one(R))};
    HahPresentation h(alg, d, diag, {}, {}, 2, 3);
    CHECK(code_of([&] { primitivize(h, PrimitivizationConfig::for_presentation(h)); }) ==
          ErrorCode::HypothesisViolation);
  }

  TEST_CASE("verify_presentation passes valid inputs and flags broken ones") {
    CHECK(verify_presentation(fixtures::three_generator(5, 3, 10)).ok());
    CHECK(verify_presentation(fixtures::b4(3, 2, 10)).ok());

    // ∂v = u, ∂w = v: ∂²w ≠ 0.
    const Ring R = Ring::localized(3);
    auto alg = AlgebraPresentation::make(R, Flavor::FreeAssociative, {{"u", 2, 0}, {"v", 3, 0}, {"w", 4, 0}}, 8);
    Derivation d(alg, {Element::zero(alg, 1, 1), gen(alg, "u"), gen(alg, "v")});
    auto broken = HahPresentation::primitively_generated(alg, d);
    auto rep = verify_presentation(broken);
    CHECK_FALSE(rep.ok());
    CHECK(rep.checks.front().name == "differential squares to zero");
    CHECK_FALSE(rep.checks.front().passed);
    CHECK(rep.checks.front().detail.find("w") != std::string::npos);

    // A nonzero cocommutativity witness for a cocommutative Φ.
    auto h = fixtures::three_generator(5, 3, 10);
    const auto& a3 = h.algebra();
    Element wrong = tensor(gen(a3, "u"), gen(a3, "v"));
    HahPresentation bad(a3, h.differential(), h.generator_diagonals(), {},
                        {std::nullopt, std::nullopt, std::optional<Element>(wrong)}, 2, 5);
    auto rep2 = verify_presentation(bad);
    CHECK_FALSE(rep2.ok());
    bool flagged = false;
    for (const auto& c : rep2.checks)
      if (c.name == "cocommutativity homotopy" && !c.passed) flagged = true;
    CHECK(flagged);
  }
}
