#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hah/matrix.hpp"

namespace hah {

enum class Flavor { FreeAssociative, GradedCommutative };

std::string flavor_name(Flavor flavor);

struct GeneratorSpec {
  std::string name;
  int degree = 1;
  /// Exponent at which powers vanish; 0 means untruncated. Odd-degree
  /// generators of a graded-commutative algebra always square to zero.
  int truncation = 0;

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

/// A monomial is the ordered list of its generator indices. For the
/// commutative flavor the list is sorted, so x^2*y is {x, x, y}.
using Monomial = std::vector<int>;

/// One monomial per tensor factor.
using TensorKey = std::vector<Monomial>;

class AlgebraPresentation;
using AlgebraPtr = std::shared_ptr<const AlgebraPresentation>;

/// Finite-type connected graded algebra: free associative on the generators,
/// or free graded-commutative modulo truncations. Immutable; basis tables are
/// memoised behind an internal lock.
class AlgebraPresentation : public std::enable_shared_from_this<AlgebraPresentation> {
 public:
  static AlgebraPtr make(Ring ring, Flavor flavor, std::vector<GeneratorSpec> generators, int cap);

  const Ring& ring() const noexcept { return ring_; }
  Flavor flavor() const noexcept { return flavor_; }
  int cap() const noexcept { return cap_; }
  const std::vector<GeneratorSpec>& generators() const noexcept { return generators_; }
  std::size_t generator_count() const noexcept { return generators_.size(); }
  /// Minimum generator degree (the connectivity q); 0 when there are no generators.
  int min_degree() const;
  std::optional<int> generator_index(const std::string& name) const;

  int degree_of(const Monomial& m) const;
  int degree_of(const TensorKey& key) const;
  /// Largest admissible exponent + 1 for a generator (0 = unbounded).
  int exponent_limit(int generator) const;

  /// Monomial basis of A_n in canonical order; DegreeOutOfCap when n > cap.
  const std::vector<Monomial>& basis(int n) const;
  /// Basis of the arity-fold tensor power in degree n. `reduced` drops every
  /// key with a degree-0 factor (the augmentation-ideal tensor power).
  const std::vector<TensorKey>& tensor_basis(int arity, bool reduced, int n) const;
  std::optional<std::size_t> tensor_index(int arity, bool reduced, int n, const TensorKey& key) const;

  /// Product of two monomials: sign in {-1, 0, +1} and the normal form.
  std::pair<int, Monomial> multiply_monomials(const Monomial& a, const Monomial& b) const;

  std::string render(const Monomial& m) const;

  /// Sub-presentation on the first k generators (same ring, flavor, cap).
  AlgebraPtr prefix(std::size_t k) const;
  /// Presentation with one more generator appended.
  AlgebraPtr with_generator(const GeneratorSpec& g) const;
  AlgebraPtr with_ring(Ring ring) const;
  AlgebraPtr with_cap(int cap) const;

  bool same_structure(const AlgebraPresentation& other) const;

 private:
  AlgebraPresentation(Ring ring, Flavor flavor, std::vector<GeneratorSpec> generators, int cap);
  struct Cache;

  Ring ring_;
  Flavor flavor_;
  std::vector<GeneratorSpec> generators_;
  int cap_;
  std::shared_ptr<Cache> cache_;
};

/// Homogeneous element of A^{(x) arity}. Terms are kept sparse and sorted by
/// key, which is also the basis order.
class Element {
 public:
  Element(AlgebraPtr algebra, int arity, int degree);

  static Element zero(AlgebraPtr algebra, int arity, int degree) { return Element(std::move(algebra), arity, degree); }
  static Element unit(AlgebraPtr algebra, int arity = 1);
  static Element generator(AlgebraPtr algebra, int index);
  static Element monomial(AlgebraPtr algebra, const Monomial& m, const Scalar& c);
  static Element tensor_monomial(AlgebraPtr algebra, const TensorKey& key, const Scalar& c);

  const AlgebraPtr& algebra() const noexcept { return algebra_; }
  const Ring& ring() const noexcept { return algebra_->ring(); }
  int arity() const noexcept { return arity_; }
  int degree() const noexcept { return degree_; }
  const std::map<TensorKey, Scalar>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Scalar coefficient(const TensorKey& key) const;

  void add_term(const TensorKey& key, const Scalar& c);

  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element operator-() const;
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Scalar& c, const Element& e);
  /// Exact division by a scalar; throws if some coefficient is not divisible.
  Element divided_by(const Scalar& c) const;
  friend bool operator==(const Element& a, const Element& b);

  /// Smallest valuation of a coefficient.
  int valuation() const;
  /// All coefficients divisible by p^e.
  bool divisible_by_prime_power(int e) const;

  /// Same terms, reinterpreted in another presentation (keys must be valid there).
  Element rebased(AlgebraPtr algebra) const;

  std::string to_string() const;

 private:
  void check_compatible(const Element& other) const;

  AlgebraPtr algebra_;
  int arity_;
  int degree_;
  std::map<TensorKey, Scalar> terms_;
};

/// Product in A^{(x) k} with the Koszul rule.
Element multiply(const Element& a, const Element& b);
/// a (x) b (arities add).
Element tensor(const Element& a, const Element& b);

/// Coordinates of an element against the (possibly reduced) tensor basis.
Vector to_vector(const Element& e, bool reduced);
Element from_vector(const AlgebraPtr& algebra, int arity, bool reduced, int degree, const Vector& v);

/// Degree -1 derivation determined by its values on generators, extended to
/// tensor powers by the Koszul-signed Leibniz rule.
class Derivation {
 public:
  Derivation(AlgebraPtr algebra, std::vector<Element> values);
  static Derivation zero(AlgebraPtr algebra);

  const AlgebraPtr& algebra() const noexcept { return algebra_; }
  const std::vector<Element>& values() const noexcept { return values_; }
  const Element& value(std::size_t generator) const { return values_.at(generator); }

  Element apply(const Element& e) const;
  Element apply_monomial(const Monomial& m) const;
  /// Matrix of d: (A^{(x)arity})_n -> (A^{(x)arity})_{n-1}.
  Matrix matrix(int arity, bool reduced, int n) const;
  /// Throws InvalidDerivation unless d(d(g)) = 0 for every generator.
  void validate() const;

  Derivation rebased(AlgebraPtr algebra) const;

 private:
  struct Cache;
  AlgebraPtr algebra_;
  std::vector<Element> values_;
  std::shared_ptr<Cache> cache_;
};

/// Matrix of a linear map evaluated on basis keys.
template <typename Fn>
Matrix linear_map_matrix(const AlgebraPtr& algebra, int src_arity, bool src_reduced, int src_degree, int dst_arity,
                         bool dst_reduced, int dst_degree, Fn&& fn) {
  const auto& src = algebra->tensor_basis(src_arity, src_reduced, src_degree);
  const auto& dst = algebra->tensor_basis(dst_arity, dst_reduced, dst_degree);
  Matrix m(algebra->ring(), dst.size(), src.size());
  for (std::size_t j = 0; j < src.size(); ++j) {
    Element image = fn(Element::tensor_monomial(algebra, src[j], Scalar::one(algebra->ring())));
    m.set_column(j, to_vector(image, dst_reduced));
  }
  return m;
}

/// Free product A ∐ T(x) with d x = b. Requires the free associative flavor,
/// deg x at least every existing generator degree, and b a cycle of degree
/// deg x - 1 (NotACycle otherwise). Returns the enlarged algebra and derivation.
std::pair<AlgebraPtr, Derivation> adjoin_to_algebra(const Derivation& d, const GeneratorSpec& x, const Element& b);

/// Canonical rendering of a scalar coefficient: "a" or "a/b".
std::string render_scalar(const Scalar& s);

}  // namespace hah
