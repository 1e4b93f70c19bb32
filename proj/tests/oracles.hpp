#pragma once
// Independent reference computations used by the tests. None of these call
// into the library's elimination code.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace oracle {

using IntMatrix = std::vector<std::vector<long>>;
using RatMatrix = std::vector<std::vector<mpq_class>>;

/// Rank over F_p by plain Gaussian elimination on residues.
std::size_t rank_mod_p(IntMatrix m, long p);

/// Determinant by Gaussian elimination over Q.
mpq_class determinant(RatMatrix m);

/// p-adic valuations of the elementary divisors, from gcds of k x k minors.
std::vector<int> elementary_divisor_valuations(const RatMatrix& m, int p);

/// Coefficients of prod_g (1 + t^d + ... ) up to t^N.
/// limit 0 means 1/(1 - t^d); otherwise (1 - t^{d*limit})/(1 - t^d).
std::vector<long> hilbert_series_commutative(const std::vector<int>& degrees, const std::vector<int>& limits, int N);
/// 1 / (1 - sum_g t^{d_g}).
std::vector<long> hilbert_series_free(const std::vector<int>& degrees, int N);

/// Dimension of H_n over F_p from ranks: dim C_n - rank d_n - rank d_{n+1}.
std::size_t homology_dim_mod_p(std::size_t dim_n, const IntMatrix& dn, const IntMatrix& dn1, long p);

}  // namespace oracle
