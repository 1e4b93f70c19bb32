#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hah/chain_complex.hpp"

namespace hah {

enum class HandleKind { Free, TorsionBottom, TorsionTop, Generic };

/// [a]_r: an integral chain that is a cycle mod p and survives to page r.
struct ClassHandle {
  Vector representative;
  int degree = 0;
  int page = 1;
  HandleKind kind = HandleKind::Generic;
  /// s for a Z/p^s summand; 0 for free classes.
  int exponent = 0;
};

/// Summand Z/p^s of H_n: t in degree n, u in degree n+1 with ∂u = p^s t.
struct TorsionPair {
  Vector bottom;
  Vector top;
  int exponent = 0;
};

struct TorsionLadder {
  struct Degree {
    std::vector<Vector> free;
    std::vector<TorsionPair> pairs;
  };
  std::map<int, Degree> degrees;
  int max_exponent() const;
};

struct BocksteinPage {
  struct Degree {
    std::vector<ClassHandle> basis;
    /// β^r : E^r_n -> E^r_{n-1}, rows indexed by the degree n-1 basis.
    Matrix beta;
  };
  int r = 1;
  std::map<int, Degree> degrees;
  std::size_t dimension(int n) const;
};

struct BocksteinResult {
  TorsionLadder ladder;
  std::vector<BocksteinPage> pages;  // pages[r-1] is E^r
  int r_max = 1;
};

enum class Survival { Survives, Zero, Dies };

struct SurvivalReport {
  Survival status = Survival::Survives;
  /// Page reached (Survives), page where the class is zero, or page it fails to enter.
  int page = 1;
  std::string reason;
  std::optional<ClassHandle> handle;
};

/// (c, e) for bss_witness, (e, f) for class_equal_witness.
struct WitnessPair {
  Vector first;
  Vector second;
};

/// Mod-p Bockstein spectral sequence of a Z_(p) complex, with memoised solvers.
class Bockstein {
 public:
  explicit Bockstein(ChainComplex complex);

  const ChainComplex& complex() const noexcept { return complex_; }
  int prime() const noexcept { return complex_.ring().prime(); }

  /// Free parts and torsion pairs of H_n for lo <= n <= hi.
  TorsionLadder ladder(int lo, int hi) const;
  /// Pages E^1..E^{r_max} in degrees lo..hi; r_max <= 0 means (max exponent) + 1.
  BocksteinResult pages(int lo, int hi, int r_max = 0) const;

  /// ∃ c: ∂(a + pc) ∈ p^k C.
  bool in_cycles(const Vector& a, int n, int k) const;
  /// p^{k-1} a ∈ ∂C + p^k C.
  bool in_boundaries(const Vector& a, int n, int k) const;
  SurvivalReport survives_to(const Vector& a, int n, int r) const;

  /// (c, e) with ∂(a + pc) = p^r (b + pe); a ∈ C_n, b ∈ C_{n-1}.
  WitnessPair bss_witness(const Vector& a, const Vector& b, int n, int r) const;
  /// (e, f) with p^{r-1} b' = p^{r-1} b'' + p^r e + ∂f; b', b'' ∈ C_n.
  WitnessPair class_equal_witness(const Vector& b1, const Vector& b2, int n, int r) const;

 private:
  std::optional<Vector> solve_with(const std::string& kind, int n, int k, const Vector& rhs) const;
  Matrix system(const std::string& kind, int n, int k) const;
  WitnessPair bss_raw(const Vector& a, const Vector& b, int n, int r) const;

  struct Cache;
  ChainComplex complex_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace hah
