#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hah/cobar.hpp"
#include "hah/hopf.hpp"

namespace hah {

/// Primes at which the torsion argument runs: {p} over Z_(p), none over a field.
std::vector<int> torsion_primes(const Ring& ring);

struct PrimitivizationConfig {
  std::vector<int> primes;
  int q = 0;
  /// Least non-invertible prime; 0 when every prime is invertible.
  int rho = 0;
  int cap = 0;
  int iteration_cap = 64;

  /// Primes from the ring, q and ρ from the presentation metadata.
  static PrimitivizationConfig for_presentation(const HahPresentation& h);
};

/// A ∐ T(x) with ∂x = b, Δ̄x = Φ and homotopies f, g.
struct ExtensionProblem {
  HahPresentation base;
  GeneratorSpec x;
  Element b;
  Element phi;
  Element f;
  Element g;

  int degree() const noexcept { return x.degree; }
  /// Solves for missing homotopies (Obstructed when a defect is not a
  /// boundary) and checks every invariant.
  static ExtensionProblem make(HahPresentation base, GeneratorSpec x, Element b, Element phi,
                               std::optional<Element> f = std::nullopt, std::optional<Element> g = std::nullopt);
  /// Throws HypothesisViolation naming the first failed invariant.
  void validate() const;
  HahPresentation extension() const;
};

/// Δ̄a_r = Φ − p^r Φ_r + ∂Ω_r.
struct InductionState {
  int r = 0;
  Element a;
  Element phi;
  Element omega;
};

struct KeyLemmaState {
  int i = 0;
  Element b;
  Element y;
  Element z;
  Element psi;
  /// "start", "dead" or "survives": how this state was reached.
  std::string branch;
};

struct KeyLemmaResult {
  Element x;
  Element y;
  /// Δ̄x = pΨ.
  Element psi;
  std::vector<KeyLemmaState> states;
  int bound = 0;
};

struct ModpLift {
  Element a_tilde;
  Element b_tilde;
};

/// b = z + ∂c with z primitive.
struct BoundaryAdjustment {
  Element z;
  Element c;
};

BoundaryAdjustment make_boundary_primitive(const HahPresentation& a, const Element& b);

/// ã, b̃ with ∂ã = p^r b̃ and Δ̄[ã]_r = [Φ_{r−1}]_r.
ModpLift modp_primitive_lift(const ExtensionProblem& problem, const Element& phi_prev, int r);

/// x, y with ∂(a − x − py) = 0 and Δ̄x ≡ 0 mod p, given ∂a = p^r b and ∂w = p^{r−1}Δ̄b.
KeyLemmaResult key_lemma_correct(const HahPresentation& a_alg, const Element& a, const Element& b, const Element& w, int r,
                                 int iteration_cap = 64);

InductionState induction_step(const ExtensionProblem& problem, const InductionState& prev, int iteration_cap = 64);

/// θ(x) = x + a with ∂a = 0 and Δ̄a = Φ + ∂Ψ.
struct ExtensionIso {
  Element a;
  Element psi;
  /// Stop page r*; 0 when the cobar oracle was used directly.
  int stop_page = 0;
  int torsion_exponent = 0;
  std::vector<InductionState> states;
  std::vector<KeyLemmaResult> key_lemma_runs;
};

/// Throws Obstructed when the remainder after the induction is not trivializable.
ExtensionIso trivialize_extension(const ExtensionProblem& problem, const PrimitivizationConfig& config);

/// Residuals ∂a and Δ̄a − Φ − ∂Ψ; both zero for a valid isomorphism.
std::pair<Element, Element> extension_residuals(const ExtensionProblem& problem, const Element& a, const Element& psi);

struct PrimitivizationResult {
  HahPresentation output;
  /// Θ(v_i) and H(v_i), in the shared algebra.
  std::vector<Element> theta;
  std::vector<Element> homotopy;
  std::vector<ExtensionIso> steps;
};

PrimitivizationResult primitivize(const HahPresentation& h, const PrimitivizationConfig& config);

/// Checks of the isomorphism on every generator; empty when all hold.
std::vector<std::string> primitivization_failures(const HahPresentation& source, const PrimitivizationResult& result);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool ok() const;
  std::string to_string() const;
};

VerificationReport verify_presentation(const HahPresentation& h);

struct ExtensionCorpusStats {
  int accepted = 0;
  int rejected = 0;
};

/// Seeded problem over Z_(p): Φ = Δ̄a₀ + ∂Ψ₀ + e, with pe = Δ̄c + ∂Ψ_c and ∂c
/// primitive. Instances whose homotopies are unsolvable are redrawn.
ExtensionProblem random_extension_problem(int p, int cap, std::mt19937_64& rng, ExtensionCorpusStats* stats = nullptr);

}  // namespace hah
