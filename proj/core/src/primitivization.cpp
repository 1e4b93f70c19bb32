#include "hah/primitivization.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "hah/bockstein.hpp"
#include "hah/corpus.hpp"
#include "hah/errors.hpp"

namespace hah {

std::vector<int> torsion_primes(const Ring& ring) {
  if (ring.kind() == RingKind::Localized) return {ring.prime()};
  return {};
}

PrimitivizationConfig PrimitivizationConfig::for_presentation(const HahPresentation& h) {
  PrimitivizationConfig c;
  c.primes = torsion_primes(h.ring());
  c.q = h.q();
  c.rho = h.rho() > 0 ? h.rho() : h.ring().prime();
  c.cap = h.cap();
  return c;
}

namespace {

Matrix hcat(const std::vector<Matrix>& parts) {
  Matrix out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = out.hstack(parts[i]);
  return out;
}

Matrix ident(const Ring& R, std::size_t n, const Scalar& c) {
  Matrix m(R, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = c;
  return m;
}

Matrix times(Matrix m, const Scalar& c) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) *= c;
  return m;
}

std::vector<Vector> cut(const Vector& v, const std::vector<std::size_t>& sizes) {
  std::vector<Vector> out;
  std::size_t at = 0;
  for (std::size_t s : sizes) {
    out.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(at), v.begin() + static_cast<std::ptrdiff_t>(at + s));
    at += s;
  }
  return out;
}

Vector join(const std::vector<Vector>& parts) {
  Vector out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// Shared matrices and factored solvers for one presentation.
class Engine {
 public:
  explicit Engine(HahPresentation h) : h_(std::move(h)), R_(h_.ring()) {}

  const HahPresentation& h() const { return h_; }
  const Ring& ring() const { return R_; }
  Scalar pk(int e) const { return Scalar::prime_power(R_, e); }

  std::size_t dimA(int n) const { return n < 0 ? 0 : h_.algebra()->tensor_basis(1, false, n).size(); }
  std::size_t dim2(int n) const { return n < 0 ? 0 : h_.algebra()->tensor_basis(2, true, n).size(); }

  const Matrix& dA(int n) const { return h_.complex(1, false).boundary(n); }
  const Matrix& d2(int n) const { return h_.complex(2, true).boundary(n); }
  Matrix dbar(int n) const {
    return linear_map_matrix(h_.algebra(), 1, false, n, 2, true, n,
                             [this](const Element& e) { return h_.reduced_diagonal(e); });
  }

  std::optional<Vector> solve(const std::string& key, const std::function<Matrix()>& build, const Vector& rhs) {
    auto it = solvers_.find(key);
    if (it == solvers_.end()) it = solvers_.emplace(key, std::make_shared<const LinearSolver>(build())).first;
    return it->second->solve(rhs);
  }

  Element A(int n, const Vector& v) const { return from_vector(h_.algebra(), 1, false, n, v); }
  Element T(int n, const Vector& v) const { return from_vector(h_.algebra(), 2, true, n, v); }
  Element zeroA(int n) const { return Element::zero(h_.algebra(), 1, n); }
  Element zeroT(int n) const { return Element::zero(h_.algebra(), 2, n); }
  Element d(const Element& e) const { return h_.differential().apply(e); }
  Element dbar(const Element& e) const { return h_.reduced_diagonal(e); }

 private:
  HahPresentation h_;
  Ring R_;
  std::map<std::string, std::shared_ptr<const LinearSolver>> solvers_;
};

std::string key_of(const char* kind, int n, int r) {
  return std::string(kind) + ":" + std::to_string(n) + ":" + std::to_string(r);
}

KeyLemmaResult run_key_lemma(Engine& E, const Element& a, const Element& b, const Element& w, int r, int cap) {
  const HahPresentation& h = E.h();
  const int n = a.degree();
  if (r < 1) fail(ErrorCode::InvalidArgument, "key lemma needs r >= 1");
  if (a.arity() != 1 || b.arity() != 1 || w.arity() != 2 || b.degree() != n - 1 || w.degree() != n)
    fail(ErrorCode::InvalidArgument, "key lemma inputs have the wrong shape");
  const int p = E.ring().prime();
  if (h.q() > 0 && b.degree() >= h.q() * p)
    fail(ErrorCode::OutOfRange, "key lemma needs deg b < qp, got " + std::to_string(b.degree()));
  if (!(E.d(a) == E.pk(r) * b)) fail(ErrorCode::HypothesisFails, "∂a ≠ p^r b");
  if (!(E.d(w) == E.pk(r - 1) * E.dbar(b))) fail(ErrorCode::HypothesisFails, "∂w ≠ p^{r-1} Δ̄b");

  const int m = homology_at(h.complex(), n - 1).max_torsion_exponent();
  KeyLemmaResult out{E.zeroA(n), E.zeroA(n), E.zeroT(n), {}, 0};
  out.bound = std::max(m - r + 2, 1);
  KeyLemmaState st{0, b, E.zeroA(n), E.zeroA(n), E.zeroT(n), "start"};
  const std::size_t dn = E.dimA(n), dm = E.dimA(n - 1), dt = E.dim2(n);
  for (;;) {
    // (eq:a) and (eq:w) hold for the current state.
    const int s = r + st.i - 1;
    if (!(E.d(a - st.z - E.pk(1) * st.y) == E.pk(s + 1) * st.b) ||
        !(E.d(w - E.dbar(st.y) - st.psi) == E.pk(s) * E.dbar(st.b)))
      fail(ErrorCode::TheoryViolation, "key lemma invariant broken at iteration " + std::to_string(st.i));
    out.states.push_back(st);

    auto u = E.solve(key_of("absorb", n, 0), [&] { return E.dA(n); }, to_vector(E.pk(s) * st.b, false));
    if (u) {
      out.x = st.z;
      out.y = st.y + E.A(n, *u);
      out.psi = st.psi;
      break;
    }
    if (st.i + 1 >= out.bound)
      fail(ErrorCode::IterationBoundExceeded,
           "key lemma did not terminate within " + std::to_string(out.bound) + " iterations");
    if (st.i + 1 >= cap) fail(ErrorCode::TheoryViolation, "key lemma hit the safety cap");

    KeyLemmaState next = st;
    next.i = st.i + 1;
    // Dead: ∂v = p^s b_i − p^{s+1} b_{i+1}.
    auto dead = E.solve(
        key_of("dead", n, s), [&] { return E.dA(n).hstack(ident(E.ring(), dm, E.pk(s + 1))); },
        to_vector(E.pk(s) * st.b, false));
    if (dead) {
      auto parts = cut(*dead, {dn, dm});
      next.y = st.y + E.A(n, parts[0]);
      next.b = E.A(n - 1, parts[1]);
      next.branch = "dead";
    } else {
      // Survives: ∂z + p∂y + p^{s+2} b_{i+1} = p^{s+1} b_i and Δ̄z = pΨ.
      auto sol = E.solve(
          key_of("survive", n, s),
          [&] {
            Matrix top = hcat({E.dA(n), times(E.dA(n), E.pk(1)), ident(E.ring(), dm, E.pk(s + 2)), Matrix(E.ring(), dm, dt)});
            Matrix bottom = hcat({E.dbar(n), Matrix(E.ring(), dt, dn), Matrix(E.ring(), dt, dm),
                                  ident(E.ring(), dt, -E.pk(1))});
            return top.vstack(bottom);
          },
          join({to_vector(E.pk(s + 1) * st.b, false), zero_vector(E.ring(), dt)}));
      if (!sol) fail(ErrorCode::TheoryViolation, "no primitive Bockstein preimage on page " + std::to_string(s + 1));
      auto parts = cut(*sol, {dn, dn, dm, dt});
      next.z = st.z + E.A(n, parts[0]);
      next.y = st.y + E.A(n, parts[1]);
      next.b = E.A(n - 1, parts[2]);
      next.psi = st.psi + E.T(n, parts[3]);
      next.branch = "survives";
    }
    st = std::move(next);
  }
  if (!E.d(a - out.x - E.pk(1) * out.y).is_zero() || !(E.dbar(out.x) == E.pk(1) * out.psi))
    fail(ErrorCode::TheoryViolation, "key lemma output fails its identity");
  return out;
}

ModpLift run_lift(Engine& E, const Element& phi_prev, int n, int r) {
  const std::size_t dn = E.dimA(n), dm = E.dimA(n - 1), du = E.dim2(n + 1), dt = E.dim2(n);
  const Ring& R = E.ring();
  auto sol = E.solve(
      key_of("lift", n, r),
      [&] {
        Matrix top = hcat({E.dA(n), ident(R, dm, -E.pk(r)), Matrix(R, dm, du), Matrix(R, dm, dt)});
        Matrix bottom = hcat({times(E.dbar(n), E.pk(r - 1)), Matrix(R, dt, dm), times(E.d2(n + 1), Scalar(R, -1L)),
                              ident(R, dt, -E.pk(r))});
        return top.vstack(bottom);
      },
      join({zero_vector(R, dm), to_vector(E.pk(r - 1) * phi_prev, true)}));
  if (!sol) fail(ErrorCode::TheoryViolation, "no mod-p primitive lift on page " + std::to_string(r));
  auto parts = cut(*sol, {dn, dm, du, dt});
  return {E.A(n, parts[0]), E.A(n - 1, parts[1])};
}

std::pair<InductionState, KeyLemmaResult> run_step(Engine& E, const ExtensionProblem& problem, const InductionState& prev,
                                                   int cap) {
  const int r = prev.r + 1;
  const int n = problem.degree();
  ModpLift lift = run_lift(E, prev.phi, n, r);
  Bockstein bss(E.h().complex(2, true));
  WitnessPair ef = bss.class_equal_witness(to_vector(E.dbar(lift.a_tilde), true), to_vector(prev.phi, true), n, r);
  const Element phi_prime = -E.T(n, ef.first);
  const Element u = E.T(n + 1, ef.second);
  KeyLemmaResult key = run_key_lemma(E, lift.a_tilde, lift.b_tilde, -phi_prime, r, cap);
  InductionState next{r, prev.a + E.pk(r - 1) * (lift.a_tilde - key.x - E.pk(1) * key.y),
                      phi_prime + key.psi + E.dbar(key.y), u + prev.omega};
  if (!E.d(next.a).is_zero() || !E.d(next.phi).is_zero() ||
      !(E.dbar(next.a) == problem.phi - E.pk(r) * next.phi + E.d(next.omega)))
    fail(ErrorCode::TheoryViolation, "induction invariant fails on page " + std::to_string(r));
  return {std::move(next), std::move(key)};
}

bool involves_generator_at_least(const Element& e, int first) {
  for (const auto& [key, c] : e.terms())
    for (const auto& m : key)
      for (int g : m)
        if (g >= first) return true;
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------

ExtensionProblem ExtensionProblem::make(HahPresentation base, GeneratorSpec x, Element b, Element phi,
                                        std::optional<Element> f, std::optional<Element> g) {
  const AlgebraPtr alg = base.algebra();
  const int n = x.degree;
  b = b.is_zero() ? Element::zero(alg, 1, n - 1) : b.rebased(alg);
  phi = phi.is_zero() ? Element::zero(alg, 2, n) : phi.rebased(alg);
  if (n + 1 > base.cap())
    fail(ErrorCode::DegreeOutOfCap, "extension in degree " + std::to_string(n) + " needs cap at least " +
                                        std::to_string(n + 1));
  if (!f || !g) {
    if (phi.arity() != 2 || phi.degree() != n) fail(ErrorCode::HypothesisViolation, "Φ must lie in (A⊗A)_n");
    HomotopyDefects hd = homotopy_defects(base, phi);
    if (!f) {
      if (!hd.f) fail(ErrorCode::Obstructed, "coassociativity defect is not a boundary: not a Hah");
      f = hd.f;
    }
    if (!g) {
      if (!hd.g) fail(ErrorCode::Obstructed, "cocommutativity defect is not a boundary: not a Hah");
      g = hd.g;
    }
  }
  ExtensionProblem out{std::move(base), std::move(x), std::move(b), std::move(phi),
                       f->is_zero() ? Element::zero(alg, 3, n + 1) : f->rebased(alg),
                       g->is_zero() ? Element::zero(alg, 2, n + 1) : g->rebased(alg)};
  out.validate();
  return out;
}

void ExtensionProblem::validate() const {
  const int n = x.degree;
  auto bad = [](const std::string& what) { fail(ErrorCode::HypothesisViolation, what); };
  if (!base.is_primitively_generated()) bad("base must be primitively generated");
  if (!base.is_strict()) bad("base must be strict");
  for (const auto& g : base.algebra()->generators())
    if (g.degree > n) bad("new generator must not have lower degree than the base generators");
  if (b.arity() != 1 || b.degree() != n - 1) bad("∂x must lie in A_{n-1}");
  if (phi.arity() != 2 || phi.degree() != n) bad("Φ must lie in (A⊗A)_n");
  if (f.arity() != 3 || f.degree() != n + 1) bad("f must lie in (A⊗A⊗A)_{n+1}");
  if (g.arity() != 2 || g.degree() != n + 1) bad("g must lie in (A⊗A)_{n+1}");
  const auto& d = base.differential();
  if (!d.apply(b).is_zero()) bad("∂x is not a cycle");
  if (!base.reduced_diagonal(b).is_zero()) bad("∂x is not primitive");
  (void)to_vector(phi, true);
  if (!d.apply(phi).is_zero()) bad("∂Φ ≠ 0");
  if (!(d.apply(f) == coassociativity_defect(base, phi))) bad("∂f ≠ (Δ̄⊗1 − 1⊗Δ̄)Φ");
  if (!(d.apply(g) == cocommutativity_defect(phi))) bad("∂g ≠ (τ − 1)Φ");
}

HahPresentation ExtensionProblem::extension() const { return base.with_generator(x, b, phi, f, g); }

BoundaryAdjustment make_boundary_primitive(const HahPresentation& h, const Element& b0) {
  const auto& alg = h.algebra();
  const Element b = b0.rebased(alg);
  const int m = b.degree();
  if (!h.differential().apply(b).is_zero()) fail(ErrorCode::NotACycle, "boundary value is not a cycle");
  if (h.reduced_diagonal(b).is_zero()) return {b, Element::zero(alg, 1, m + 1)};
  const int p = h.ring().prime();
  if (p > 0 && h.q() > 0 && m >= h.q() * p)
    fail(ErrorCode::OutOfRange, "deg ∂v = " + std::to_string(m) + " is not below qp = " + std::to_string(h.q() * p));
  PrimitiveSlice prim = primitives_at(h, m);
  const Matrix& d = h.complex().boundary(m + 1);
  auto sol = solve(d.hstack(prim.inclusion), to_vector(b, false));
  if (!sol) {
    Vector db = to_vector(h.reduced_diagonal(b), true);
    if (!solve(h.complex(2, true).boundary(m + 1), db))
      fail(ErrorCode::HypothesisViolation, "[∂v] is not primitive in homology");
    fail(ErrorCode::TheoryViolation, "primitive boundary adjustment failed in range");
  }
  auto parts = cut(*sol, {d.cols(), prim.inclusion.cols()});
  BoundaryAdjustment out{from_vector(alg, 1, false, m, prim.inclusion.apply(parts[1])),
                         from_vector(alg, 1, false, m + 1, parts[0])};
  if (!(out.z + h.differential().apply(out.c) == b) || !h.reduced_diagonal(out.z).is_zero())
    fail(ErrorCode::TheoryViolation, "boundary adjustment identity fails");
  return out;
}

ModpLift modp_primitive_lift(const ExtensionProblem& problem, const Element& phi_prev, int r) {
  if (r < 1) fail(ErrorCode::InvalidArgument, "page index must be at least 1");
  Engine E(problem.base);
  return run_lift(E, phi_prev.rebased(problem.base.algebra()), problem.degree(), r);
}

KeyLemmaResult key_lemma_correct(const HahPresentation& h, const Element& a, const Element& b, const Element& w, int r,
                                 int iteration_cap) {
  Engine E(h);
  return run_key_lemma(E, a.rebased(h.algebra()), b.rebased(h.algebra()), w.rebased(h.algebra()), r, iteration_cap);
}

InductionState induction_step(const ExtensionProblem& problem, const InductionState& prev, int iteration_cap) {
  Engine E(problem.base);
  return run_step(E, problem, prev, iteration_cap).first;
}

std::pair<Element, Element> extension_residuals(const ExtensionProblem& problem, const Element& a0, const Element& psi0) {
  const auto& h = problem.base;
  const Element a = a0.rebased(h.algebra());
  const Element psi = psi0.rebased(h.algebra());
  return {h.differential().apply(a), h.reduced_diagonal(a) - problem.phi - h.differential().apply(psi)};
}

ExtensionIso trivialize_extension(const ExtensionProblem& problem, const PrimitivizationConfig& config) {
  problem.validate();
  const HahPresentation& h = problem.base;
  const int n = problem.degree();
  const Ring& R = h.ring();
  ExtensionIso out{Element::zero(h.algebra(), 1, n), Element::zero(h.algebra(), 2, n + 1), 0, 0, {}, {}};
  TruncatedCobar cobar = build_truncated_cobar(h, n + 1);

  const bool staged = R.kind() == RingKind::Localized &&
                      std::find(config.primes.begin(), config.primes.end(), R.prime()) != config.primes.end() &&
                      (config.q <= 0 || n < config.q * R.prime());
  Element remainder = problem.phi;
  Element a_acc = Element::zero(h.algebra(), 1, n);
  Element omega = Element::zero(h.algebra(), 2, n + 1);
  if (staged) {
    Engine E(h);
    out.torsion_exponent = n >= 2 ? homology_at(cobar.complex(), n - 2).max_torsion_exponent() : 0;
    out.stop_page = out.torsion_exponent + 1;
    InductionState st{0, Element::zero(h.algebra(), 1, n), problem.phi, Element::zero(h.algebra(), 2, n + 1)};
    out.states.push_back(st);
    for (int r = 1; r <= out.stop_page; ++r) {
      auto [next, key] = run_step(E, problem, st, config.iteration_cap);
      out.key_lemma_runs.push_back(std::move(key));
      st = std::move(next);
      out.states.push_back(st);
    }
    remainder = Scalar::prime_power(R, st.r) * st.phi;
    a_acc = st.a;
    omega = st.omega;
  }
  OracleOutcome rest = oracle_trivialize(cobar, remainder);
  if (rest.obstructed()) fail(ErrorCode::Obstructed, "extension is obstructed: " + rest.obstruction.describe());
  out.a = a_acc + rest.trivialization->a;
  out.psi = rest.trivialization->psi + omega;
  auto [da, res] = extension_residuals(problem, out.a, out.psi);
  if (!da.is_zero() || !res.is_zero()) fail(ErrorCode::TheoryViolation, "trivialization identity fails");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Θ : A -> A' and the homotopy H : A -> A'⊗A' on the shared free algebra.
class Transport {
 public:
  Transport(HahPresentation source, HahPresentation primitive)
      : source_(std::move(source)), target_(std::move(primitive)) {}

  void push(Element theta, Element homotopy) {
    theta_.push_back(std::move(theta));
    homotopy_.push_back(std::move(homotopy));
    theta_memo_.clear();
    h_memo_.clear();
  }

  Element theta(const Element& e) {
    const auto& alg = source_.algebra();
    Element out = Element::zero(alg, e.arity(), e.degree());
    if (e.arity() == 1) {
      for (const auto& [key, c] : e.terms()) out += c * theta_monomial(key.front());
      return out;
    }
    return map_each_factor(e, [this](const Element& x) { return theta(x); });
  }

  /// G = (Θ⊗Θ)Δ.
  Element G(const Element& e) { return theta(source_.diagonal(e)); }
  /// F = Δ'Θ.
  Element F(const Element& e) { return target_.diagonal(theta(e)); }

  Element H(const Element& e) {
    const auto& alg = source_.algebra();
    Element out = Element::zero(alg, 2, e.degree() + 1);
    for (const auto& [key, c] : e.terms()) out += c * h_monomial(key.front());
    return out;
  }

 private:
  Element theta_monomial(const Monomial& m) {
    auto it = theta_memo_.find(m);
    if (it != theta_memo_.end()) return it->second;
    const auto& alg = source_.algebra();
    Element out = Element::unit(alg);
    for (int g : m) {
      if (static_cast<std::size_t>(g) >= theta_.size()) fail(ErrorCode::InvalidArgument, "Θ is not yet defined there");
      out = multiply(out, theta_[static_cast<std::size_t>(g)]);
    }
    theta_memo_.emplace(m, out);
    return out;
  }

  Element h_monomial(const Monomial& m) {
    const auto& alg = source_.algebra();
    if (m.empty()) return Element::zero(alg, 2, 1);
    auto it = h_memo_.find(m);
    if (it != h_memo_.end()) return it->second;
    const int g = m.front();
    if (static_cast<std::size_t>(g) >= homotopy_.size()) fail(ErrorCode::InvalidArgument, "H is not yet defined there");
    Element out = homotopy_[static_cast<std::size_t>(g)];
    if (m.size() > 1) {
      const Monomial rest(m.begin() + 1, m.end());
      const Element head = Element::monomial(alg, {g}, Scalar::one(alg->ring()));
      const Element tail = Element::monomial(alg, rest, Scalar::one(alg->ring()));
      const int sign = alg->generators()[static_cast<std::size_t>(g)].degree % 2 ? -1 : 1;
      out = multiply(out, G(tail)) + Scalar(alg->ring(), static_cast<long>(sign)) * multiply(F(head), h_monomial(rest));
    }
    h_memo_.emplace(m, out);
    return out;
  }

  HahPresentation source_;
  HahPresentation target_;
  std::vector<Element> theta_;
  std::vector<Element> homotopy_;
  std::map<Monomial, Element> theta_memo_;
  std::map<Monomial, Element> h_memo_;
};

HahPresentation primitive_diagonal(const HahPresentation& h) {
  return HahPresentation::primitively_generated(h.algebra(), Derivation::zero(h.algebra()), h.q(), h.rho());
}

}  // namespace

PrimitivizationResult primitivize(const HahPresentation& h, const PrimitivizationConfig& config) {
  const auto& alg = h.algebra();
  const std::size_t k = alg->generator_count();
  const int q = config.q > 0 ? config.q : h.q();
  for (const auto& g : alg->generators()) {
    if (g.degree < q) fail(ErrorCode::HypothesisViolation, "generator " + g.name + " lies below q");
    if (config.rho > 0 && g.degree > q * config.rho - 1)
      fail(ErrorCode::HypothesisViolation, "generator " + g.name + " lies above qρ − 1");
  }
  if (config.rho > 0 && config.rho <= 2) fail(ErrorCode::HypothesisViolation, "ρ must be an odd prime");

  bool already = h.is_primitively_generated() && h.is_strict();
  for (std::size_t i = 0; already && i < k; ++i)
    already = h.reduced_diagonal(h.differential().value(i)).is_zero();
  PrimitivizationResult out{h, {}, {}, {}};
  if (already) {
    for (std::size_t i = 0; i < k; ++i) {
      out.theta.push_back(Element::generator(alg, static_cast<int>(i)));
      out.homotopy.push_back(Element::zero(alg, 2, alg->generators()[i].degree + 1));
    }
    return out;
  }
  if (alg->flavor() != Flavor::FreeAssociative)
    fail(ErrorCode::InvalidArgument, "primitivize adjoins free generators; the presentation must be free associative");

  Transport T(h, primitive_diagonal(h));
  HahPresentation current = h.prefix(0);
  current = HahPresentation::primitively_generated(current.algebra(), current.differential(), q, config.rho);
  std::vector<Element> boundaries;
  for (std::size_t i = 0; i < k; ++i) {
    const GeneratorSpec& spec = alg->generators()[i];
    const Element v = Element::generator(alg, static_cast<int>(i));
    const Element dv = h.differential().value(i);
    const Element b = T.theta(dv).rebased(current.algebra());
    const Element phi0 = (T.theta(h.generator_diagonal(i)) + T.H(dv)).rebased(current.algebra());
    BoundaryAdjustment adj = make_boundary_primitive(current, b);
    const Element phi = phi0 - current.reduced_diagonal(adj.c);
    ExtensionProblem problem = ExtensionProblem::make(current, spec, adj.z, phi);
    ExtensionIso iso = trivialize_extension(problem, config);
    T.push(v + (iso.a + adj.c).rebased(alg), iso.psi.rebased(alg));
    out.theta.push_back(v + (iso.a + adj.c).rebased(alg));
    out.homotopy.push_back(iso.psi.rebased(alg));
    out.steps.push_back(std::move(iso));
    boundaries.push_back(adj.z.rebased(alg));
    current = current.with_generator(spec, adj.z, Element::zero(current.algebra(), 2, spec.degree));
  }
  out.output = HahPresentation::primitively_generated(alg, Derivation(alg, boundaries), q, config.rho);
  auto failures = primitivization_failures(h, out);
  if (!failures.empty()) fail(ErrorCode::TheoryViolation, "primitivization check failed: " + failures.front());
  return out;
}

std::vector<std::string> primitivization_failures(const HahPresentation& source, const PrimitivizationResult& result) {
  std::vector<std::string> out;
  const auto& alg = source.algebra();
  const HahPresentation& target = result.output;
  Transport T(source, target);
  for (std::size_t i = 0; i < result.theta.size(); ++i) T.push(result.theta[i], result.homotopy[i]);
  for (std::size_t i = 0; i < alg->generator_count(); ++i) {
    const std::string name = alg->generators()[i].name;
    const Element v = Element::generator(alg, static_cast<int>(i));
    const Element dv = source.differential().value(i);
    if (!target.generator_diagonal(i).is_zero()) out.push_back("Δ̄'" + name + " ≠ 0");
    if (!target.reduced_diagonal(target.differential().value(i)).is_zero())
      out.push_back("∂'" + name + " is not primitive");
    const Element tv = T.theta(v);
    if (!(target.differential().apply(tv) == T.theta(dv))) out.push_back("Θ is not a chain map on " + name);
    const Element lhs = target.diagonal(tv) - T.G(v);
    const Element rhs = target.differential().apply(T.H(v)) + T.H(dv);
    if (!(lhs - rhs).is_zero()) out.push_back("homotopy identity fails on " + name + ": " + (lhs - rhs).to_string());
    if (involves_generator_at_least(tv - v, static_cast<int>(i))) out.push_back("Θ(" + name + ") − " + name + " is not in the prefix");
  }
  return out;
}

// ---------------------------------------------------------------------------

bool VerificationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerificationReport::to_string() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "pass" : "FAIL") << "  " << c.name;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  return os.str();
}

VerificationReport verify_presentation(const HahPresentation& h) {
  VerificationReport rep;
  const auto& alg = h.algebra();
  const auto& d = h.differential();
  const Ring& R = h.ring();
  const int cap = h.cap();
  auto record = [&rep](std::string name, bool passed, std::string detail = {}) {
    rep.checks.push_back({std::move(name), passed, std::move(detail)});
  };
  auto gen_name = [&alg](std::size_t i) { return alg->generators()[i].name; };

  {
    std::string bad;
    for (std::size_t i = 0; i < alg->generator_count() && bad.empty(); ++i) {
      Element dd = d.apply(d.value(i));
      if (!dd.is_zero()) bad = "∂∂" + gen_name(i) + " = " + dd.to_string();
    }
    record("differential squares to zero", bad.empty(), bad);
  }
  {
    std::string bad;
    for (std::size_t i = 0; i < alg->generator_count() && bad.empty(); ++i)
      for (std::size_t j = 0; j < alg->generator_count() && bad.empty(); ++j) {
        const auto& gi = alg->generators()[i];
        const auto& gj = alg->generators()[j];
        if (gi.degree + gj.degree > cap) continue;
        Element u = Element::generator(alg, static_cast<int>(i)), v = Element::generator(alg, static_cast<int>(j));
        Element lhs = d.apply(multiply(u, v));
        Element rhs = multiply(d.apply(u), v) + Scalar(R, gi.degree % 2 ? -1L : 1L) * multiply(u, d.apply(v));
        if (!(lhs == rhs)) bad = "∂(" + gi.name + gj.name + ")";
        Element dl = h.diagonal(multiply(u, v));
        Element dr = multiply(h.diagonal(u), h.diagonal(v));
        if (bad.empty() && !(dl == dr)) bad = "Δ(" + gi.name + gj.name + ") ≠ Δ" + gi.name + "·Δ" + gj.name;
      }
    record("Leibniz rule and multiplicative diagonal", bad.empty(), bad);
  }
  {
    std::string bad;
    for (std::size_t i = 0; i < alg->generator_count() && bad.empty(); ++i) {
      const auto& g = alg->generators()[i];
      if (g.truncation == 0) continue;
      if (g.truncation * g.degree > cap) continue;
      Element x = Element::generator(alg, static_cast<int>(i));
      Element xt = Element::unit(alg);
      for (int e = 0; e + 1 < g.truncation; ++e) xt = multiply(xt, x);
      Element dx = Scalar(R, static_cast<long>(g.truncation)) * multiply(xt, d.value(i));
      if (!dx.is_zero()) bad = "∂(" + g.name + "^" + std::to_string(g.truncation) + ") ≠ 0";
      Element delta = Element::unit(alg, 2);
      for (int e = 0; e < g.truncation; ++e) delta = multiply(delta, h.diagonal(x));
      if (bad.empty() && !delta.is_zero()) bad = "Δ(" + g.name + ")^" + std::to_string(g.truncation) + " ≠ 0";
    }
    record("relations respected by ∂ and Δ", bad.empty(), bad);
  }
  {
    std::string bad;
    for (std::size_t i = 0; i < alg->generator_count() && bad.empty(); ++i) {
      const Element& dg = h.generator_diagonal(i);
      if (dg.arity() != 2 || dg.degree() != alg->generators()[i].degree) bad = "Δ̄" + gen_name(i) + " has the wrong shape";
      for (const auto& [key, c] : dg.terms())
        if (key[0].empty() || key[1].empty()) bad = "Δ̄" + gen_name(i) + " has a unit factor";
    }
    record("diagonal shape", bad.empty(), bad);
  }
  {
    std::string bad;
    const int top = std::min(cap, 8);
    for (int n = 1; n <= top && bad.empty(); ++n) {
      const std::vector<Monomial> basis = alg->basis(n);
      for (const auto& m : basis) {
        Element e = Element::monomial(alg, m, Scalar::one(R));
        Element left = Element::zero(alg, 1, n), right = Element::zero(alg, 1, n);
        const Element full = h.diagonal(e);
        for (const auto& [key, c] : full.terms()) {
          if (key[0].empty()) left += Element::monomial(alg, key[1], c);
          if (key[1].empty()) right += Element::monomial(alg, key[0], c);
        }
        if (!(left == e) || !(right == e)) {
          bad = "counit fails on " + alg->render(m);
          break;
        }
      }
    }
    record("counit", bad.empty(), bad);
  }
  {
    std::string bad;
    for (std::size_t i = 0; i < alg->generator_count() && bad.empty(); ++i) {
      Element g = Element::generator(alg, static_cast<int>(i));
      Element res = h.reduced_diagonal(d.apply(g)) - d.apply(h.generator_diagonal(i));
      if (!res.is_zero()) bad = "Δ̄∂" + gen_name(i) + " − ∂Δ̄" + gen_name(i) + " = " + res.to_string();
    }
    record("∂ is a coderivation", bad.empty(), bad);
  }
  for (int which = 0; which < 2; ++which) {
    std::string bad, note;
    for (std::size_t i = 0; i < alg->generator_count() && bad.empty(); ++i) {
      const auto& gspec = alg->generators()[i];
      const Element& phi = h.generator_diagonal(i);
      const Element defect = which == 0 ? coassociativity_defect(h, phi) : cocommutativity_defect(phi);
      const auto& witness = which == 0 ? h.coassociativity_witness(i) : h.cocommutativity_witness(i);
      if (witness) {
        Element res = d.apply(*witness) - defect;
        if (!res.is_zero()) bad = "residual on " + gspec.name + ": " + res.to_string();
        continue;
      }
      if (defect.is_zero()) continue;
      if (gspec.degree + 1 > cap) {
        note = "unchecked above the cap";
        continue;
      }
      ChainComplex c = h.complex(which == 0 ? 3 : 2, true);
      if (!solve(c.boundary(gspec.degree + 1), to_vector(defect, true)))
        bad = "defect on " + gspec.name + " is not a boundary";
      else
        note = "witnesses solvable";
    }
    record(which == 0 ? "coassociativity homotopy" : "cocommutativity homotopy", bad.empty(), bad.empty() ? note : bad);
  }
  return rep;
}

// ---------------------------------------------------------------------------

ExtensionProblem random_extension_problem(int p, int cap, std::mt19937_64& rng, ExtensionCorpusStats* stats) {
  const Ring R = Ring::localized(p);
  corpus::PresentationShape shape;
  shape.cap = cap;
  shape.q = 2;
  shape.max_degree = std::min(5, 2 * p - 1);
  std::uniform_int_distribution<long> coef(-2, 2);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto combination = [&](const Matrix& basis) {
    Vector v = zero_vector(R, basis.rows());
    for (std::size_t j = 0; j < basis.cols(); ++j) v = add(v, scale(Scalar(R, coef(rng)), basis.column(j)));
    return v;
  };
  for (int attempt = 0; attempt < 1000; ++attempt) {
    HahPresentation base = corpus::random_primitive_presentation(R, shape, rng);
    const auto& alg = base.algebra();
    int lo = 3;
    for (const auto& g : alg->generators()) lo = std::max(lo, g.degree);
    const int hi = std::min(cap - 1, 2 * p - 1);
    if (lo > hi) continue;
    const int n = std::uniform_int_distribution<int>(lo, hi)(rng);
    Engine E(base);
    Element b = E.A(n - 1, combination(corpus::primitive_cycles(base, n - 1)));
    if (coin(rng) < 0.5) b = E.pk(1) * b;
    Element a0 = E.A(n, combination(kernel_basis(E.dA(n))));
    Element psi0 = corpus::random_element(alg, 2, true, n + 1, rng);
    const std::size_t dn = E.dimA(n), du = E.dim2(n + 1), dt = E.dim2(n), dl = E.dim2(n - 1);
    Matrix top = hcat({E.dbar(n - 1) * E.dA(n), Matrix(R, dl, du), Matrix(R, dl, dt)});
    Matrix bottom = hcat({E.dbar(n), E.d2(n + 1), ident(R, dt, -E.pk(1))});
    Vector twist = cut(combination(kernel_basis(top.vstack(bottom))), {dn, du, dt})[2];
    Element phi = E.dbar(a0) + E.d(psi0) + E.T(n, twist);
    GeneratorSpec x{"x", n, 0};
    try {
      ExtensionProblem problem = ExtensionProblem::make(base, x, b, phi);
      if (stats) ++stats->accepted;
      return problem;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Obstructed) throw;
      if (stats) ++stats->rejected;
    }
  }
  fail(ErrorCode::TheoryViolation, "no admissible extension problem after 1000 draws");
}

}  // namespace hah
