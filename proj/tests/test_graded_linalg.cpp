#include "doctest.h"
#include "hah/chain_complex.hpp"
#include "hah/errors.hpp"
#include "support.hpp"

using namespace hah;

namespace {

bool is_diagonal_chain(const SmithForm& s, int p) {
  const Matrix& d = s.D;
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (i != j && !d.at(i, j).is_zero()) return false;
      if (i == j && i < s.rank && !(d.at(i, i) == Scalar::prime_power(d.ring(), s.exponents[i]))) return false;
      if (i == j && i >= s.rank && !d.at(i, i).is_zero()) return false;
    }
  for (std::size_t i = 1; i < s.exponents.size(); ++i)
    if (s.exponents[i] < s.exponents[i - 1]) return false;
  (void)p;
  return true;
}

}  // namespace

TEST_SUITE("graded_linalg") {
  TEST_CASE("smith form of the identity is the identity") {
    Ring r = Ring::localized(3);
    auto s = local_smith_form(Matrix::identity(r, 2));
    CHECK(s.D == Matrix::identity(r, 2));
    CHECK(s.rank == 2);
  }

  TEST_CASE("diag(1, 9) over Z_(3) has exponents 0 and 2") {
    Ring r = Ring::localized(3);
    Matrix m(r, 2, 2);
    m.at(0, 0) = Scalar(r, 1L);
    m.at(1, 1) = Scalar(r, 9L);
    auto s = local_smith_form(m);
    CHECK(s.D == m);
    CHECK(s.exponents == std::vector<int>{0, 2});
  }

  TEST_CASE("seeded random matrices: U M V = D with invertible U, V") {
    std::mt19937_64 rng(20240611);
    for (int p : {3, 5}) {
      Ring r = Ring::localized(p);
      for (int trial = 0; trial < 25; ++trial) {
        std::size_t rows = 2 + trial % 4, cols = 3 + trial % 3;
        Matrix m = support::random_matrix(r, rows, cols, rng, -9, 9);
        if (trial % 3 == 0)
          for (std::size_t j = 0; j < cols; ++j) m.at(0, j) = m.at(0, j) * Scalar(r, static_cast<long>(p));
        auto s = local_smith_form(m);
        CHECK(s.U * m * s.V == s.D);
        CHECK(s.U * s.U_inv == Matrix::identity(r, rows));
        CHECK(s.V * s.V_inv == Matrix::identity(r, cols));
        CHECK(is_diagonal_chain(s, p));
        CHECK(s.exponents == oracle::elementary_divisor_valuations(support::to_rat(m), p));
      }
    }
  }

  TEST_CASE("smith form over F_p is 0/1 and matches the F_p rank oracle") {
    std::mt19937_64 rng(77);
    Ring r = Ring::mod_p(5);
    for (int trial = 0; trial < 20; ++trial) {
      Matrix m = support::random_matrix(r, 4, 6, rng, 0, 2);
      auto s = local_smith_form(m);
      CHECK(s.U * m * s.V == s.D);
      CHECK(s.rank == oracle::rank_mod_p(support::to_int(m), 5));
      for (int e : s.exponents) CHECK(e == 0);
    }
  }

  TEST_CASE("solve: zero system, valuation obstruction, random consistent systems") {
    Ring r = Ring::localized(3);
    auto u0 = solve(Matrix(r, 2, 3), zero_vector(r, 2));
    REQUIRE(u0);
    CHECK(is_zero(*u0));

    Matrix three(r, 1, 1);
    three.at(0, 0) = Scalar(r, 3L);
    CHECK_FALSE(solve(three, support::vec(r, {1})).has_value());

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      Matrix m = support::random_matrix(r, 5, 4, rng);
      Matrix x = support::random_matrix(r, 4, 1, rng);
      Vector v = m.apply(x.column(0));
      auto u = solve(m, v);
      REQUIRE(u);
      CHECK(m.apply(*u) == v);
      CHECK(solve(m, v) == u);
    }
  }

  TEST_CASE("homology of a zero differential is free") {
    Ring r = Ring::localized(3);
    auto c = ChainComplex::from_matrices(r, {0, 3, 0}, {Matrix(r, 0, 0), Matrix(r, 0, 3), Matrix(r, 3, 0)});
    auto h = homology_at(c, 1);
    CHECK(h.free_rank == 3);
    CHECK(h.torsion_count() == 0);
  }

  TEST_CASE("multiplication by p^r has cokernel of order p^r") {
    for (int e : {1, 2, 3}) {
      Ring r = Ring::localized(3);
      Matrix d(r, 1, 1);
      d.at(0, 0) = Scalar::prime_power(r, e);
      auto c = ChainComplex::from_matrices(r, {1, 1}, {Matrix(r, 0, 1), d});
      // Degree 0 homology needs d_1, which the cap allows.
      auto h = homology_at(c, 0);
      CHECK(h.free_rank == 0);
      CHECK(h.torsion_exponents == std::vector<int>{e});
      REQUIRE(h.torsion_partners.size() == 1);
      Vector du = d.apply(h.torsion_partners[0]);
      CHECK(du == scale(Scalar::prime_power(r, e), h.torsion_representatives[0]));
    }
  }

  TEST_CASE("homology above the cap is refused") {
    Ring r = Ring::localized(3);
    auto c = ChainComplex::from_matrices(r, {1, 1}, {Matrix(r, 0, 1), Matrix(r, 1, 1)});
    CHECK_THROWS_AS(homology_at(c, 1), Error);
  }

  TEST_CASE("d^2 != 0 is rejected") {
    Ring r = Ring::localized(3);
    Matrix d1(r, 1, 1), d2(r, 1, 1);
    d1.at(0, 0) = Scalar(r, 1L);
    d2.at(0, 0) = Scalar(r, 1L);
    auto c = ChainComplex::from_matrices(r, {1, 1, 1}, {Matrix(r, 0, 1), d1, d2});
    try {
      homology_at(c, 1);
      FAIL("expected InvalidComplex");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidComplex);
    }
  }

  TEST_CASE("synthetic complexes agree with construction and the minors oracle") {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> kind(-1, 3);
    for (int p : {3, 5}) {
      Ring r = Ring::localized(p);
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<support::Piece> pieces;
        for (int k = 0; k < 7; ++k) pieces.push_back({1 + (k % 2), kind(rng)});
        pieces.push_back({2, -1});
        auto syn = support::synthetic_complex(r, 4, pieces, rng);
        std::size_t total = 0;
        for (int n = 0; n <= 4; ++n) total += syn.complex.dimension(n);
        CHECK(total <= 40);
        for (int n = 1; n <= 2; ++n) {
          auto h = homology_at(syn.complex, n);
          CHECK(h.free_rank == syn.betti[n]);
          CHECK(h.torsion_exponents == syn.torsion[n]);
          // Minors oracle on d_{n+1}; free rank from ranks.
          auto ev = oracle::elementary_divisor_valuations(support::to_rat(syn.complex.boundary(n + 1)), p);
          std::vector<int> tors;
          for (int v : ev)
            if (v > 0) tors.push_back(v);
          CHECK(h.torsion_exponents == tors);
          std::size_t rank_n = oracle::elementary_divisor_valuations(support::to_rat(syn.complex.boundary(n)), p).size();
          CHECK(h.free_rank == syn.complex.dimension(n) - rank_n - ev.size());
          for (const auto& z : h.free_representatives) CHECK(is_zero(syn.complex.boundary(n).apply(z)));
          for (const auto& z : h.torsion_representatives) CHECK(is_zero(syn.complex.boundary(n).apply(z)));
          // Universal coefficients against an F_p rank oracle.
          auto mod = oracle::homology_dim_mod_p(syn.complex.dimension(n), support::to_int(syn.complex.boundary(n)),
                                                support::to_int(syn.complex.boundary(n + 1)), p);
          auto below = homology_at(syn.complex, n - 1);
          CHECK(mod == h.free_rank + h.torsion_count() + below.torsion_count());
        }
      }
    }
  }

  TEST_CASE("class_of recognises boundaries and torsion orders") {
    std::mt19937_64 rng(99);
    Ring r = Ring::localized(3);
    auto syn = support::synthetic_complex(r, 3, {{1, 2}, {1, 1}, {1, -1}, {1, 0}}, rng);
    auto h = homology_at(syn.complex, 1);
    REQUIRE(h.torsion_exponents == std::vector<int>{1, 2});
    auto cls = h.class_of(h.torsion_representatives[1]);
    CHECK(cls.order_exponent() == 2);
    Vector b = syn.complex.boundary(2).apply(support::random_matrix(r, syn.complex.dimension(2), 1, rng).column(0));
    CHECK(h.class_of(b).is_zero());
    CHECK_FALSE(h.class_of(h.free_representatives[0]).order_exponent().has_value());
  }
}
