#pragma once

#include <optional>
#include <string>

#include "hah/hopf.hpp"

namespace hah {

/// ΩA / Ω^{≥3}A. In degree k the chains are I_{k+1} ⊕ (I⊗I)_{k+2}, written in
/// σ-coordinates σ(a⊗b) = (−1)^{|a|} s⁻¹a ⊗ s⁻¹b, so that
///   d(s⁻¹a) = −s⁻¹∂a + σΔ̄a,   d(σΦ) = σ∂Φ.
class TruncatedCobar {
 public:
  TruncatedCobar(HahPresentation base, int N);

  const HahPresentation& base() const noexcept { return base_; }
  const ChainComplex& complex() const noexcept { return complex_; }
  /// Highest degree of C, two below the source cap N.
  int top() const noexcept { return complex_.cap(); }

  /// dim I_{k+1}: the length-one block comes first in C_k.
  std::size_t length_one_dimension(int k) const;
  /// s⁻¹a + σΦ as a chain of C_k, with |a| = k + 1 and |Φ| = k + 2.
  Vector chain(const Element& a, const Element& phi) const;
  /// Inverse of chain(): (a ∈ I_{k+1}, Φ ∈ (I⊗I)_{k+2}).
  std::pair<Element, Element> split(const Vector& v, int k) const;

 private:
  HahPresentation base_;
  ChainComplex complex_;
};

/// Throws NotStrict for nonzero homotopy witnesses and NotACoderivation when
/// Δ̄∂ ≠ ∂Δ̄ below N (which is exactly d² ≠ 0 on C). N <= 0 means the cap.
TruncatedCobar build_truncated_cobar(const HahPresentation& h, int N = 0);

struct ObstructionClass {
  /// Degree in C, i.e. |Φ| − 2.
  int degree = 0;
  HomologyClass cls;
  /// Coefficients form a field, so there is no order to report.
  bool over_field = false;
  bool is_zero() const { return cls.is_zero(); }
  std::string describe() const;
};

/// [σΦ] ∈ H_{n−2}(C). Needs n + 1 <= N; throws NotACycle unless ∂Φ = 0.
ObstructionClass obstruction(const TruncatedCobar& c, const Element& phi);

struct Trivialization {
  /// Cycle of A_n.
  Element a;
  /// Δ̄a = Φ + ∂Ψ.
  Element psi;
};

struct OracleOutcome {
  ObstructionClass obstruction;
  std::optional<Trivialization> trivialization;
  bool obstructed() const { return !trivialization; }
};

/// Direct solve of d(s⁻¹a + σΨ') = σΦ; Ψ = −Ψ'. The identity is rechecked exactly.
OracleOutcome oracle_trivialize(const TruncatedCobar& c, const Element& phi);

}  // namespace hah
