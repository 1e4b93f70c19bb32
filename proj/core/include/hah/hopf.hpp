#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hah/algebra.hpp"
#include "hah/chain_complex.hpp"

namespace hah {

/// Which form of the coassociativity defect to use.
/// ReducedDifference: (Δ̄⊗1 − 1⊗Δ̄)Φ, with values in I⊗I⊗I.
/// FullSum: (Δ⊗1 + 1⊗Δ)Φ, with values in A⊗A⊗A; kept for comparison only.
enum class DefectConvention { ReducedDifference, FullSum };

/// Chain algebra with a diagonal given by Δ̄ on generators and extended
/// multiplicatively, plus optional per-generator homotopy witnesses:
/// f_g in (I⊗I⊗I)_{|g|+1} and g_g in (I⊗I)_{|g|+1}.
class HahPresentation {
 public:
  HahPresentation(AlgebraPtr algebra, Derivation differential, std::vector<Element> reduced_diagonal,
                  std::vector<std::optional<Element>> coassociativity = {},
                  std::vector<std::optional<Element>> cocommutativity = {}, int q = 0, int rho = 0);

  /// All generators primitive, no homotopies.
  static HahPresentation primitively_generated(AlgebraPtr algebra, Derivation differential, int q = 0, int rho = 0);

  const AlgebraPtr& algebra() const noexcept { return algebra_; }
  const Ring& ring() const noexcept { return algebra_->ring(); }
  int cap() const noexcept { return algebra_->cap(); }
  const Derivation& differential() const noexcept { return differential_; }
  const Element& generator_diagonal(std::size_t i) const { return diagonal_.at(i); }
  const std::vector<Element>& generator_diagonals() const noexcept { return diagonal_; }
  const std::optional<Element>& coassociativity_witness(std::size_t i) const { return coassoc_.at(i); }
  const std::optional<Element>& cocommutativity_witness(std::size_t i) const { return cocomm_.at(i); }
  /// Connectivity: stored value, or the minimum generator degree when unset.
  int q() const;
  int rho() const noexcept { return rho_; }

  /// No nonzero homotopy witnesses.
  bool is_strict() const;
  /// Δ̄ vanishes on every generator.
  bool is_primitively_generated() const;

  Element diagonal(const Element& a) const;
  Element diagonal_monomial(const Monomial& m) const;
  /// Δ̄a in the reduced tensor square; zero for degree-0 input.
  Element reduced_diagonal(const Element& a) const;

  /// The tensor power complex: arity 1 unreduced is A itself.
  ChainComplex complex(int arity = 1, bool reduced = false) const;

  HahPresentation prefix(std::size_t k) const;
  HahPresentation with_ring(Ring ring) const;
  HahPresentation with_cap(int cap) const;
  /// Same presentation over F_p (identity on fields).
  HahPresentation reduced_mod_p() const;
  /// Append a generator with the given boundary, reduced diagonal, and witnesses.
  HahPresentation with_generator(const GeneratorSpec& g, const Element& boundary, const Element& diagonal,
                                 std::optional<Element> coassociativity = std::nullopt,
                                 std::optional<Element> cocommutativity = std::nullopt) const;
  HahPresentation with_metadata(int q, int rho) const;

 private:
  struct Cache;
  AlgebraPtr algebra_;
  Derivation differential_;
  std::vector<Element> diagonal_;
  std::vector<std::optional<Element>> coassoc_;
  std::vector<std::optional<Element>> cocomm_;
  int q_;
  int rho_;
  std::shared_ptr<Cache> cache_;
};

/// Replace tensor factor `position` by fn(factor). fn has degree 0 and maps
/// arity-1 elements to arity-`image_arity` elements, so no Koszul sign arises.
Element map_factor(const Element& t, int position, int image_arity,
                   const std::function<Element(const Element&)>& fn);
/// τ(a⊗b) = (−1)^{|a||b|} b⊗a.
Element twist(const Element& t);
/// Apply an algebra map (given on arity-1 elements) to every factor.
Element map_each_factor(const Element& t, const std::function<Element(const Element&)>& fn);

Element coassociativity_defect(const HahPresentation& h, const Element& phi,
                               DefectConvention convention = DefectConvention::ReducedDifference);
/// (τ − 1)Φ.
Element cocommutativity_defect(const Element& phi);

struct PrimitiveSlice {
  int degree = 0;
  std::vector<Element> basis;
  /// Columns are the basis elements in A_n coordinates.
  Matrix inclusion;
};

PrimitiveSlice primitives_at(const HahPresentation& h, int n);

/// Basis of Q(A)_n = I_n / (I·I)_n; computed over the residue field when the
/// ring is Z_(p).
struct IndecomposableSlice {
  int degree = 0;
  std::size_t decomposable_rank = 0;
  /// Monomials completing the decomposables to A_n, in basis order.
  std::vector<Element> basis;
  /// A_n -> Q_n.
  Matrix projection;
  /// P_n -> Q_n.
  Matrix from_primitives;
};

IndecomposableSlice indecomposables_at(const HahPresentation& h, int n);

/// j : H_n(PA) -> PH_n(A) over the residue field.
struct JMapSlice {
  int degree = 0;
  std::size_t dim_HPA = 0;
  std::size_t dim_HA = 0;
  std::size_t dim_PHA = 0;
  /// H_n(PA) -> H_n(A) in the chosen homology bases.
  Matrix matrix;
  std::size_t rank = 0;
  std::size_t kernel_dim = 0;
  std::size_t cokernel_dim = 0;
  bool is_isomorphism() const { return kernel_dim == 0 && cokernel_dim == 0; }
  /// Representative cycles of the H_n(PA) basis.
  std::vector<Element> hpa_representatives;
};

/// Throws NotACoderivation unless Δ̄∂ = ∂Δ̄ on A_{n}, A_{n+1}.
JMapSlice j_map_at(const HahPresentation& h, int n);

/// Δ̄∂ − ∂Δ̄ vanishes on basis elements of degree n.
bool is_coderivation_at(const HahPresentation& h, int n);

struct HomotopyDefects {
  Element coassociativity;
  Element cocommutativity;
  std::optional<Element> f;
  std::optional<Element> g;
  /// Set for a defect that is a cycle but not a boundary.
  std::optional<HomologyClass> coassociativity_class;
  std::optional<HomologyClass> cocommutativity_class;
  bool obstructed() const { return !f || !g; }
};

/// Defects of Φ in degree n, and solutions of ∂f = defect, ∂g = defect.
HomotopyDefects homotopy_defects(const HahPresentation& h, const Element& phi,
                                 DefectConvention convention = DefectConvention::ReducedDifference);

/// Structure constants in degrees <= N. product[(i,j)] maps A_i⊗A_j -> A_{i+j}
/// (columns indexed by pairs in row-major order), coproduct[(i,j)] maps
/// A_{i+j} -> A_i⊗A_j.
struct StructureTables {
  Ring ring = Ring::rational();
  int top = 0;
  std::vector<std::size_t> dims;
  std::map<std::pair<int, int>, Matrix> product;
  std::map<std::pair<int, int>, Matrix> coproduct;

  friend bool operator==(const StructureTables&, const StructureTables&) = default;
};

StructureTables structure_tables(const HahPresentation& h, int N);
/// Transposes: the product of the dual is the transposed coproduct and vice versa.
StructureTables dualize(const StructureTables& t);
StructureTables dualize_range(const HahPresentation& h, int N);
/// dim ker(⊕_{i+j=n, i,j>=1} coproduct(i,j)).
std::size_t coalgebra_primitive_dimension(const StructureTables& t, int n);
/// True when the coproduct of `t` is deconcatenation on the word basis of `algebra`.
bool is_deconcatenation(const StructureTables& t, const AlgebraPresentation& algebra);

/// TC(V): words in the cogenerators with deconcatenation.
class TensorCoalgebra {
 public:
  TensorCoalgebra(Ring ring, std::vector<GeneratorSpec> cogenerators, int cap);
  const AlgebraPtr& words() const noexcept { return words_; }
  Element reduced_diagonal(const Element& a) const;
  PrimitiveSlice primitives_at(int n) const;

 private:
  AlgebraPtr words_;
};

}  // namespace hah
