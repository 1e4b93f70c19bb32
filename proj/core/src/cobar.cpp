#include "hah/cobar.hpp"

#include <sstream>

#include "hah/errors.hpp"

namespace hah {

namespace {

Matrix block(const Matrix& tl, const Matrix& tr, const Matrix& bl, const Matrix& br) {
  return tl.hstack(tr).vstack(bl.hstack(br));
}

Matrix negated(Matrix m) {
  const Scalar minus(m.ring(), -1L);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) *= minus;
  return m;
}

ChainComplex make_complex(const HahPresentation& h, int N) {
  const AlgebraPtr alg = h.algebra();
  const Derivation d = h.differential();
  auto dim1 = [alg](int k) { return alg->tensor_basis(1, true, k + 1).size(); };
  auto dim2 = [alg](int k) { return alg->tensor_basis(2, true, k + 2).size(); };
  HahPresentation base = h;
  auto boundary = [alg, d, base, dim1, dim2](int k) {
    const Ring R = alg->ring();
    Matrix minus_d = negated(d.matrix(1, true, k + 1));
    Matrix dbar = linear_map_matrix(alg, 1, true, k + 1, 2, true, k + 1,
                                    [&base](const Element& e) { return base.reduced_diagonal(e); });
    Matrix d2 = d.matrix(2, true, k + 2);
    return block(minus_d, Matrix(R, dim1(k - 1), dim2(k)), dbar, d2);
  };
  return ChainComplex(h.ring(), N - 2, [dim1, dim2](int k) { return dim1(k) + dim2(k); }, boundary, "cobar");
}

}  // namespace

TruncatedCobar::TruncatedCobar(HahPresentation base, int N) : base_(std::move(base)), complex_(make_complex(base_, N)) {}

std::size_t TruncatedCobar::length_one_dimension(int k) const {
  return base_.algebra()->tensor_basis(1, true, k + 1).size();
}

Vector TruncatedCobar::chain(const Element& a, const Element& phi) const {
  if (a.arity() != 1 || phi.arity() != 2) fail(ErrorCode::InvalidArgument, "cobar chain needs (A, A⊗A) components");
  if (phi.degree() != a.degree() + 1) fail(ErrorCode::InvalidArgument, "cobar components of mismatched degree");
  Vector v = to_vector(a, true);
  Vector w = to_vector(phi, true);
  v.insert(v.end(), w.begin(), w.end());
  return v;
}

std::pair<Element, Element> TruncatedCobar::split(const Vector& v, int k) const {
  const std::size_t n1 = length_one_dimension(k);
  if (v.size() != complex_.dimension(k)) fail(ErrorCode::InvalidArgument, "cobar chain of the wrong length");
  const auto& alg = base_.algebra();
  return {from_vector(alg, 1, true, k + 1, Vector(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n1))),
          from_vector(alg, 2, true, k + 2, Vector(v.begin() + static_cast<std::ptrdiff_t>(n1), v.end()))};
}

TruncatedCobar build_truncated_cobar(const HahPresentation& h, int N) {
  if (N <= 0) N = h.cap();
  if (N > h.cap()) fail(ErrorCode::DegreeOutOfCap, "cobar range exceeds the presentation cap");
  if (N < 2) fail(ErrorCode::InvalidArgument, "cobar complex needs N >= 2");
  if (!h.is_strict()) fail(ErrorCode::NotStrict, "truncated cobar complex needs a strict Hopf algebra");
  for (int n = 1; n <= N; ++n)
    if (!is_coderivation_at(h, n))
      fail(ErrorCode::NotACoderivation, "Δ̄∂ ≠ ∂Δ̄ in degree " + std::to_string(n));
  TruncatedCobar c(h, N);
  for (int k = 1; k < c.top(); ++k)
    if (!c.complex().squares_to_zero_at(k))
      fail(ErrorCode::TheoryViolation, "cobar differential does not square to zero at degree " + std::to_string(k));
  return c;
}

std::string ObstructionClass::describe() const {
  std::ostringstream os;
  if (is_zero()) {
    os << "zero class in H_" << degree << "(C)";
    return os.str();
  }
  auto e = cls.order_exponent();
  os << "nonzero class in H_" << degree << "(C)";
  if (over_field) return os.str();
  os << " of ";
  if (e)
    os << "order p^" << *e;
  else
    os << "infinite order";
  return os.str();
}

namespace {

void check_phi(const TruncatedCobar& c, const Element& phi) {
  if (phi.arity() != 2) fail(ErrorCode::InvalidArgument, "obstruction needs an element of A⊗A");
  if (phi.degree() - 1 > c.top())
    fail(ErrorCode::DegreeOutOfCap, "obstruction in degree " + std::to_string(phi.degree()) + " needs cap at least " +
                                        std::to_string(phi.degree() + 1));
  if (!c.base().differential().apply(phi).is_zero()) fail(ErrorCode::NotACycle, "Φ is not a cycle");
}

ObstructionClass class_of(const TruncatedCobar& c, const Element& phi) {
  const int k = phi.degree() - 2;
  ObstructionClass out;
  out.degree = k;
  out.over_field = c.base().ring().is_field();
  if (k < 0) return out;
  const auto& alg = c.base().algebra();
  out.cls = homology_at(c.complex(), k).class_of(c.chain(Element::zero(alg, 1, k + 1), phi));
  return out;
}

}  // namespace

ObstructionClass obstruction(const TruncatedCobar& c, const Element& phi) {
  check_phi(c, phi);
  return class_of(c, phi);
}

OracleOutcome oracle_trivialize(const TruncatedCobar& c, const Element& phi) {
  check_phi(c, phi);
  const auto& h = c.base();
  const auto& alg = h.algebra();
  const int n = phi.degree();
  OracleOutcome out;
  if (phi.is_zero()) {
    out.obstruction.degree = n - 2;
    out.trivialization = Trivialization{Element::zero(alg, 1, n), Element::zero(alg, 2, n + 1)};
    return out;
  }
  out.obstruction = class_of(c, phi);
  if (!out.obstruction.is_zero()) return out;
  auto u = solve(c.complex().boundary(n - 1), c.chain(Element::zero(alg, 1, n - 1), phi));
  if (!u) fail(ErrorCode::TheoryViolation, "obstruction vanishes but the cobar solve failed");
  auto [a, psi_prime] = c.split(*u, n - 1);
  Trivialization t{a, -psi_prime};
  if (!h.differential().apply(t.a).is_zero() ||
      !(h.reduced_diagonal(t.a) - phi - h.differential().apply(t.psi)).is_zero())
    fail(ErrorCode::TheoryViolation, "cobar trivialization identity fails");
  out.trivialization = std::move(t);
  return out;
}

}  // namespace hah
