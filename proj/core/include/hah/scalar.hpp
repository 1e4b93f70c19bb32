#pragma once

#include <gmpxx.h>

#include <climits>
#include <compare>
#include <string>

namespace hah {

enum class RingKind { ModP, Localized, Rational };

/// Coefficient ring: the field F_p, the local ring Z_(p), or Q (prime 0).
class Ring {
 public:
  static Ring mod_p(int p);
  static Ring localized(int p);
  static Ring rational() { return Ring(RingKind::Rational, 0); }

  RingKind kind() const noexcept { return kind_; }
  int prime() const noexcept { return p_; }
  bool is_field() const noexcept { return kind_ != RingKind::Localized; }

  /// F_p for Z_(p); identity otherwise.
  Ring residue_field() const;
  std::string name() const;

  friend bool operator==(const Ring&, const Ring&) = default;

 private:
  Ring(RingKind kind, int p) : kind_(kind), p_(p) {}
  RingKind kind_;
  int p_;
};

inline constexpr int kInfiniteValuation = INT_MAX;

/// Exact ring element. Over F_p the value is a canonical residue 0..p-1; over
/// Z_(p) and Q it is a reduced fraction (denominator positive, and coprime to
/// p for Z_(p)).
class Scalar {
 public:
  explicit Scalar(Ring ring) : ring_(ring) {}
  Scalar(Ring ring, long value);
  Scalar(Ring ring, const mpq_class& value);

  static Scalar zero(Ring ring) { return Scalar(ring); }
  static Scalar one(Ring ring) { return Scalar(ring, 1L); }
  /// p^e in the ring (e >= 0).
  static Scalar prime_power(Ring ring, int e);
  /// Parses "a", "-a", "a/b".
  static Scalar parse(Ring ring, const std::string& text);

  const Ring& ring() const noexcept { return ring_; }
  const mpq_class& value() const noexcept { return v_; }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_unit() const { return !is_zero() && valuation() == 0; }
  /// p-adic valuation over Z_(p); 0 for nonzero elements of a field;
  /// kInfiniteValuation for zero.
  int valuation() const;
  /// Value with the p-power stripped: x = p^v(x) * unit_part().
  Scalar unit_part() const;

  Scalar inverse() const;
  /// Exact quotient; throws when the divisor does not divide this element.
  Scalar divided_by(const Scalar& divisor) const;
  bool divides(const Scalar& other) const;

  /// Image in the residue field (Z_(p) -> F_p). Identity on fields.
  Scalar reduce() const;
  /// Reinterpret under another ring (e.g. lift an F_p residue to Z_(p)).
  Scalar with_ring(Ring ring) const { return Scalar(ring, v_); }

  std::string to_string() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& other);
  Scalar& operator-=(const Scalar& other);
  Scalar& operator*=(const Scalar& other);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.ring_ == b.ring_ && a.v_ == b.v_; }

 private:
  void normalize();
  void check_ring(const Scalar& other) const;

  Ring ring_;
  mpq_class v_;
};

/// p-adic valuation of a nonzero integer.
int integer_valuation(const mpz_class& n, int p);

}  // namespace hah
