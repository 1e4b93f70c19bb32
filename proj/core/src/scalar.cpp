#include "hah/scalar.hpp"

#include <stdexcept>

#include "hah/errors.hpp"

namespace hah {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegreeOutOfCap: return "DegreeOutOfCap";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MixedPresentation: return "MixedPresentation";
    case ErrorCode::InvalidDerivation: return "InvalidDerivation";
    case ErrorCode::InvalidComplex: return "InvalidComplex";
    case ErrorCode::NotACycle: return "NotACycle";
    case ErrorCode::NotACoderivation: return "NotACoderivation";
    case ErrorCode::NotStrict: return "NotStrict";
    case ErrorCode::NotAModPCycle: return "NotAModPCycle";
    case ErrorCode::HypothesisFails: return "HypothesisFails";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::TheoryViolation: return "TheoryViolation";
    case ErrorCode::IterationBoundExceeded: return "IterationBoundExceeded";
    case ErrorCode::Obstructed: return "Obstructed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

Ring Ring::mod_p(int p) {
  if (!is_prime(p) || p == 2) fail(ErrorCode::InvalidArgument, "ring prime must be an odd prime, got " + std::to_string(p));
  return Ring(RingKind::ModP, p);
}

Ring Ring::localized(int p) {
  if (!is_prime(p) || p == 2) fail(ErrorCode::InvalidArgument, "ring prime must be an odd prime, got " + std::to_string(p));
  return Ring(RingKind::Localized, p);
}

Ring Ring::residue_field() const {
  if (kind_ == RingKind::Localized) return Ring(RingKind::ModP, p_);
  return *this;
}

std::string Ring::name() const {
  switch (kind_) {
    case RingKind::ModP: return "F_" + std::to_string(p_);
    case RingKind::Localized: return "Z_(" + std::to_string(p_) + ")";
    case RingKind::Rational: return "Q";
  }
  return "?";
}

int integer_valuation(const mpz_class& n, int p) {
  if (sgn(n) == 0) return kInfiniteValuation;
  mpz_class m = abs(n);
  int v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

Scalar::Scalar(Ring ring, long value) : ring_(ring), v_(value) { normalize(); }

Scalar::Scalar(Ring ring, const mpq_class& value) : ring_(ring), v_(value) {
  v_.canonicalize();
  normalize();
}

Scalar Scalar::prime_power(Ring ring, int e) {
  if (ring.kind() == RingKind::Rational) return one(ring);
  if (ring.kind() == RingKind::ModP) return e == 0 ? one(ring) : zero(ring);
  mpz_class n;
  mpz_ui_pow_ui(n.get_mpz_t(), static_cast<unsigned long>(ring.prime()), static_cast<unsigned long>(e));
  return Scalar(ring, mpq_class(n));
}

Scalar Scalar::parse(Ring ring, const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) fail(ErrorCode::ParseError, "bad coefficient '" + text + "'");
  if (q.get_den() == 0) fail(ErrorCode::ParseError, "zero denominator in '" + text + "'");
  return Scalar(ring, q);
}

void Scalar::normalize() {
  switch (ring_.kind()) {
    case RingKind::Rational: return;
    case RingKind::Localized:
      if (integer_valuation(v_.get_den(), ring_.prime()) != 0)
        fail(ErrorCode::InvalidArgument, v_.get_str() + " is not in " + ring_.name());
      return;
    case RingKind::ModP: {
      if (v_.get_den() == 1 && sgn(v_.get_num()) >= 0 && v_.get_num() < ring_.prime()) return;
      mpz_class p = ring_.prime();
      mpz_class den = v_.get_den();
      mpz_class inv;
      if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
        fail(ErrorCode::InvalidArgument, v_.get_str() + " is not defined in " + ring_.name());
      mpz_class r = v_.get_num() * inv;
      mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
      v_ = mpq_class(r);
      return;
    }
  }
}

void Scalar::check_ring(const Scalar& other) const {
  if (!(ring_ == other.ring_))
    fail(ErrorCode::MixedPresentation, "scalars over " + ring_.name() + " and " + other.ring_.name());
}

int Scalar::valuation() const {
  if (is_zero()) return kInfiniteValuation;
  if (ring_.kind() != RingKind::Localized) return 0;
  return integer_valuation(v_.get_num(), ring_.prime());
}

Scalar Scalar::unit_part() const {
  int v = valuation();
  if (v == kInfiniteValuation || v == 0) return *this;
  return divided_by(prime_power(ring_, v));
}

Scalar Scalar::inverse() const {
  if (!is_unit()) fail(ErrorCode::InvalidArgument, to_string() + " is not a unit in " + ring_.name());
  return Scalar(ring_, mpq_class(1) / v_);
}

bool Scalar::divides(const Scalar& other) const {
  check_ring(other);
  if (other.is_zero()) return true;
  if (is_zero()) return false;
  return valuation() <= other.valuation();
}

Scalar Scalar::divided_by(const Scalar& divisor) const {
  check_ring(divisor);
  if (!divisor.divides(*this))
    fail(ErrorCode::InvalidArgument, divisor.to_string() + " does not divide " + to_string() + " in " + ring_.name());
  if (is_zero()) return *this;
  return Scalar(ring_, v_ / divisor.v_);
}

Scalar Scalar::reduce() const {
  if (ring_.kind() != RingKind::Localized) return *this;
  return Scalar(ring_.residue_field(), v_);
}

std::string Scalar::to_string() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Scalar Scalar::operator-() const {
  Scalar r(ring_);
  r.v_ = -v_;
  r.normalize();
  return r;
}

Scalar& Scalar::operator+=(const Scalar& other) {
  check_ring(other);
  v_ += other.v_;
  normalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& other) {
  check_ring(other);
  v_ -= other.v_;
  normalize();
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& other) {
  check_ring(other);
  v_ *= other.v_;
  normalize();
  return *this;
}

}  // namespace hah
