#include "oracles.hpp"

#include <algorithm>
#include <climits>
#include <functional>

namespace oracle {

namespace {

long mod(long a, long p) {
  a %= p;
  return a < 0 ? a + p : a;
}

long inverse_mod(long a, long p) {
  long r = 1, base = mod(a, p), e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return r;
}

int valuation(const mpz_class& n, int p) {
  if (n == 0) return INT_MAX;
  mpz_class x = abs(n);
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

int valuation(const mpq_class& q, int p) {
  if (q == 0) return INT_MAX;
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

void combinations(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::size_t rank_mod_p(IntMatrix m, long p) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  for (auto& r : m)
    for (auto& x : r) x = mod(x, p);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    long inv = inverse_mod(m[rank][c], p);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      long f = m[r][c] * inv % p;
      for (std::size_t k = c; k < cols; ++k) m[r][k] = mod(m[r][k] - f * m[rank][k], p);
    }
    ++rank;
  }
  return rank;
}

mpq_class determinant(RatMatrix m) {
  const std::size_t n = m.size();
  mpq_class det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      mpq_class f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

std::vector<int> elementary_divisor_valuations(const RatMatrix& m, int p) {
  std::vector<int> out;
  if (m.empty() || m[0].empty()) return out;
  const std::size_t rows = m.size(), cols = m[0].size();
  int previous = 0;
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    int best = INT_MAX;
    combinations(rows, k, [&](const std::vector<std::size_t>& ri) {
      combinations(cols, k, [&](const std::vector<std::size_t>& ci) {
        RatMatrix sub(k, std::vector<mpq_class>(k));
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) sub[a][b] = m[ri[a]][ci[b]];
        best = std::min(best, valuation(determinant(sub), p));
      });
    });
    if (best == INT_MAX) break;
    out.push_back(best - previous);
    previous = best;
  }
  return out;
}

std::vector<long> hilbert_series_commutative(const std::vector<int>& degrees, const std::vector<int>& limits, int N) {
  std::vector<long> series(static_cast<std::size_t>(N + 1), 0);
  series[0] = 1;
  for (std::size_t g = 0; g < degrees.size(); ++g) {
    std::vector<long> next(series.size(), 0);
    for (int n = 0; n <= N; ++n) {
      if (series[static_cast<std::size_t>(n)] == 0) continue;
      for (int e = 0; n + e * degrees[g] <= N && (limits[g] == 0 || e < limits[g]); ++e)
        next[static_cast<std::size_t>(n + e * degrees[g])] += series[static_cast<std::size_t>(n)];
    }
    series = next;
  }
  return series;
}

std::vector<long> hilbert_series_free(const std::vector<int>& degrees, int N) {
  std::vector<long> a(static_cast<std::size_t>(N + 1), 0);
  a[0] = 1;
  for (int n = 1; n <= N; ++n)
    for (int d : degrees)
      if (d <= n) a[static_cast<std::size_t>(n)] += a[static_cast<std::size_t>(n - d)];
  return a;
}

std::size_t homology_dim_mod_p(std::size_t dim_n, const IntMatrix& dn, const IntMatrix& dn1, long p) {
  return dim_n - rank_mod_p(dn, p) - rank_mod_p(dn1, p);
}

}  // namespace oracle
