#pragma once

#include <algorithm>
#include <random>

#include "hah/matrix.hpp"
#include "oracles.hpp"

namespace support {

inline hah::Matrix random_matrix(hah::Ring ring, std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                 long lo = -4, long hi = 4) {
  std::uniform_int_distribution<long> dist(lo, hi);
  hah::Matrix m(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = hah::Scalar(ring, dist(rng));
  return m;
}

inline oracle::IntMatrix to_int(const hah::Matrix& m) {
  oracle::IntMatrix out(m.rows(), std::vector<long>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto& v = m.at(i, j).value();
      long p = m.ring().prime();
      mpz_class num = v.get_num(), den = v.get_den();
      mpz_class inv;
      mpz_class pp = p;
      mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t());
      mpz_class r = num * inv;
      mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), pp.get_mpz_t());
      out[i][j] = r.get_si();
    }
  return out;
}

inline oracle::RatMatrix to_rat(const hah::Matrix& m) {
  oracle::RatMatrix out(m.rows(), std::vector<mpq_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m.at(i, j).value();
  return out;
}

inline hah::Vector vec(hah::Ring ring, std::initializer_list<long> xs) {
  hah::Vector v;
  for (long x : xs) v.emplace_back(ring, x);
  return v;
}

}  // namespace support

#include <map>

#include "hah/chain_complex.hpp"

namespace support {

/// Complex in degrees 0..top built from free summands and p^s-multiplication
/// pairs, then scrambled by random elementary basis changes. The expected
/// homology is known from the construction.
struct Synthetic {
  hah::ChainComplex complex;
  std::map<int, std::size_t> betti;
  std::map<int, std::vector<int>> torsion;  // exponents, sorted
};

struct Piece {
  int degree;    // free: degree of the generator; pair: degree of the target
  int exponent;  // -1 for free; s >= 0 for R_{deg+1} --p^s--> R_{deg}
};

inline Synthetic synthetic_complex(hah::Ring ring, int top, const std::vector<Piece>& pieces, std::mt19937_64& rng,
                                   int scramble = 12) {
  const int p = ring.prime();
  std::vector<std::size_t> dims(static_cast<std::size_t>(top + 1), 0);
  struct Slot {
    int degree;
    std::size_t index;
  };
  std::vector<std::pair<Slot, Slot>> arrows;  // (source in deg+1, target in deg)
  std::vector<long> weights;
  Synthetic out{hah::ChainComplex::from_matrices(ring, {0}, {hah::Matrix(ring, 0, 0)}), {}, {}};
  for (int n = 0; n <= top; ++n) out.betti[n] = 0;
  for (const auto& pc : pieces) {
    if (pc.exponent < 0) {
      dims[static_cast<std::size_t>(pc.degree)]++;
      out.betti[pc.degree]++;
    } else {
      Slot tgt{pc.degree, dims[static_cast<std::size_t>(pc.degree)]++};
      Slot src{pc.degree + 1, dims[static_cast<std::size_t>(pc.degree + 1)]++};
      arrows.push_back({src, tgt});
      long w = 1;
      for (int i = 0; i < pc.exponent; ++i) w *= p;
      weights.push_back(w);
      if (pc.exponent > 0) out.torsion[pc.degree].push_back(pc.exponent);
    }
  }
  for (auto& [k, v] : out.torsion) std::sort(v.begin(), v.end());
  std::vector<hah::Matrix> d;
  d.emplace_back(ring, 0, dims[0]);
  for (int n = 1; n <= top; ++n)
    d.emplace_back(ring, dims[static_cast<std::size_t>(n - 1)], dims[static_cast<std::size_t>(n)]);
  for (std::size_t a = 0; a < arrows.size(); ++a) {
    const auto& [src, tgt] = arrows[a];
    d[static_cast<std::size_t>(src.degree)].at(tgt.index, src.index) = hah::Scalar(ring, weights[a]);
  }
  // Basis change g on C_n: d_n <- d_n g^{-1}, d_{n+1} <- g d_{n+1}.
  std::uniform_int_distribution<long> coef(-3, 3);
  for (int n = 0; n <= top; ++n) {
    const std::size_t dim = dims[static_cast<std::size_t>(n)];
    if (dim < 2) continue;
    std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
    for (int s = 0; s < scramble; ++s) {
      std::size_t i = pick(rng), j = pick(rng);
      if (i == j) continue;
      hah::Scalar c(ring, coef(rng));
      // g = I + c E_ij: rows of d_{n+1}: row_i += c row_j; columns of d_n: col_j -= c col_i.
      if (n + 1 <= top) d[static_cast<std::size_t>(n + 1)].add_row_multiple(i, j, c);
      if (n >= 1) d[static_cast<std::size_t>(n)].add_col_multiple(j, i, -c);
    }
  }
  out.complex = hah::ChainComplex::from_matrices(ring, dims, std::move(d), "synthetic");
  return out;
}

}  // namespace support
