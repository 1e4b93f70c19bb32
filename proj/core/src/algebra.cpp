#include "hah/algebra.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>
#include <tuple>

#include "hah/errors.hpp"

namespace hah {

std::string flavor_name(Flavor flavor) {
  return flavor == Flavor::FreeAssociative ? "free-associative" : "graded-commutative";
}

std::string render_scalar(const Scalar& s) { return s.to_string(); }

struct AlgebraPresentation::Cache {
  std::mutex mutex;
  std::map<int, std::vector<Monomial>> bases;
  struct TensorTable {
    std::vector<TensorKey> keys;
    std::map<TensorKey, std::size_t> index;
  };
  std::map<std::tuple<int, bool, int>, TensorTable> tensors;
};

AlgebraPresentation::AlgebraPresentation(Ring ring, Flavor flavor, std::vector<GeneratorSpec> generators, int cap)
    : ring_(ring), flavor_(flavor), generators_(std::move(generators)), cap_(cap), cache_(std::make_shared<Cache>()) {}

AlgebraPtr AlgebraPresentation::make(Ring ring, Flavor flavor, std::vector<GeneratorSpec> generators, int cap) {
  if (cap < 0) fail(ErrorCode::InvalidArgument, "degree cap must be nonnegative");
  std::set<std::string> names;
  int previous = 0;
  for (const auto& g : generators) {
    if (g.name.empty()) fail(ErrorCode::InvalidArgument, "generator with empty name");
    if (!names.insert(g.name).second) fail(ErrorCode::InvalidArgument, "duplicate generator '" + g.name + "'");
    if (g.degree < 1) fail(ErrorCode::InvalidArgument, "generator '" + g.name + "' must have positive degree");
    if (g.degree < previous)
      fail(ErrorCode::InvalidArgument, "generators must be listed in nondecreasing degree ('" + g.name + "')");
    previous = g.degree;
    if (g.truncation < 0 || g.truncation == 1)
      fail(ErrorCode::InvalidArgument, "generator '" + g.name + "' has invalid truncation");
    if (flavor == Flavor::FreeAssociative && g.truncation != 0)
      fail(ErrorCode::InvalidArgument, "truncation is only meaningful for the graded-commutative flavor");
  }
  return AlgebraPtr(new AlgebraPresentation(ring, flavor, std::move(generators), cap));
}

int AlgebraPresentation::min_degree() const {
  if (generators_.empty()) return 0;
  int q = generators_.front().degree;
  for (const auto& g : generators_) q = std::min(q, g.degree);
  return q;
}

std::optional<int> AlgebraPresentation::generator_index(const std::string& name) const {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (generators_[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

int AlgebraPresentation::degree_of(const Monomial& m) const {
  int d = 0;
  for (int g : m) d += generators_.at(static_cast<std::size_t>(g)).degree;
  return d;
}

int AlgebraPresentation::degree_of(const TensorKey& key) const {
  int d = 0;
  for (const auto& m : key) d += degree_of(m);
  return d;
}

int AlgebraPresentation::exponent_limit(int generator) const {
  if (flavor_ == Flavor::FreeAssociative) return 0;
  const auto& g = generators_.at(static_cast<std::size_t>(generator));
  if (g.degree % 2 == 1) return 2;
  return g.truncation;
}

namespace {

void enumerate_commutative(const AlgebraPresentation& a, std::size_t gen, int remaining, Monomial& current,
                           std::vector<Monomial>& out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  if (gen == a.generator_count()) return;
  const int deg = a.generators()[gen].degree;
  const int limit = a.exponent_limit(static_cast<int>(gen));
  const std::size_t base = current.size();
  for (int e = 0; e * deg <= remaining && (limit == 0 || e < limit); ++e) {
    enumerate_commutative(a, gen + 1, remaining - e * deg, current, out);
    current.push_back(static_cast<int>(gen));
  }
  current.resize(base);
}

}  // namespace

const std::vector<Monomial>& AlgebraPresentation::basis(int n) const {
  if (n > cap_)
    fail(ErrorCode::DegreeOutOfCap, "degree " + std::to_string(n) + " exceeds cap " + std::to_string(cap_));
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->bases.find(n);
    if (it != cache_->bases.end()) return it->second;
  }
  std::vector<Monomial> out;
  if (n == 0) {
    out.push_back({});
  } else if (n > 0) {
    if (flavor_ == Flavor::FreeAssociative) {
      for (std::size_t g = 0; g < generators_.size(); ++g) {
        const int deg = generators_[g].degree;
        if (deg > n) continue;
        for (const auto& tail : basis(n - deg)) {
          Monomial w;
          w.reserve(tail.size() + 1);
          w.push_back(static_cast<int>(g));
          w.insert(w.end(), tail.begin(), tail.end());
          out.push_back(std::move(w));
        }
      }
    } else {
      Monomial current;
      enumerate_commutative(*this, 0, n, current, out);
    }
    std::sort(out.begin(), out.end());
  }
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto [it, inserted] = cache_->bases.emplace(n, std::move(out));
  return it->second;
}

const std::vector<TensorKey>& AlgebraPresentation::tensor_basis(int arity, bool reduced, int n) const {
  if (arity < 1) fail(ErrorCode::InvalidArgument, "tensor arity must be positive");
  if (n > cap_)
    fail(ErrorCode::DegreeOutOfCap, "degree " + std::to_string(n) + " exceeds cap " + std::to_string(cap_));
  const auto key = std::make_tuple(arity, reduced, n);
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->tensors.find(key);
    if (it != cache_->tensors.end()) return it->second.keys;
  }
  Cache::TensorTable table;
  const int lo = reduced ? 1 : 0;
  if (n >= 0) {
    if (arity == 1) {
      if (n >= lo)
        for (const auto& m : basis(n)) table.keys.push_back({m});
    } else {
      for (int d = lo; d <= n; ++d) {
        const auto& heads = basis(d);
        if (heads.empty()) continue;
        const auto& tails = tensor_basis(arity - 1, reduced, n - d);
        for (const auto& h : heads)
          for (const auto& t : tails) {
            TensorKey k;
            k.reserve(static_cast<std::size_t>(arity));
            k.push_back(h);
            k.insert(k.end(), t.begin(), t.end());
            table.keys.push_back(std::move(k));
          }
      }
    }
  }
  std::sort(table.keys.begin(), table.keys.end());
  for (std::size_t i = 0; i < table.keys.size(); ++i) table.index.emplace(table.keys[i], i);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto [it, inserted] = cache_->tensors.emplace(key, std::move(table));
  return it->second.keys;
}

std::optional<std::size_t> AlgebraPresentation::tensor_index(int arity, bool reduced, int n,
                                                             const TensorKey& key) const {
  tensor_basis(arity, reduced, n);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  const auto& table = cache_->tensors.at(std::make_tuple(arity, reduced, n));
  auto it = table.index.find(key);
  if (it == table.index.end()) return std::nullopt;
  return it->second;
}

std::pair<int, Monomial> AlgebraPresentation::multiply_monomials(const Monomial& a, const Monomial& b) const {
  Monomial out;
  out.reserve(a.size() + b.size());
  if (flavor_ == Flavor::FreeAssociative) {
    out = a;
    out.insert(out.end(), b.begin(), b.end());
    return {1, out};
  }
  // Moving each odd factor of b left past the larger odd factors of a.
  int odd_crossings = 0;
  for (int x : b) {
    if (generators_[static_cast<std::size_t>(x)].degree % 2 == 0) continue;
    for (int y : a)
      if (y > x && generators_[static_cast<std::size_t>(y)].degree % 2 == 1) ++odd_crossings;
  }
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  for (std::size_t i = 0; i < out.size();) {
    std::size_t j = i;
    while (j < out.size() && out[j] == out[i]) ++j;
    const int limit = exponent_limit(out[i]);
    if (limit != 0 && static_cast<int>(j - i) >= limit) return {0, {}};
    i = j;
  }
  return {odd_crossings % 2 == 0 ? 1 : -1, out};
}

std::string AlgebraPresentation::render(const Monomial& m) const {
  if (m.empty()) return "1";
  std::string out;
  if (flavor_ == Flavor::FreeAssociative) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i) out += ".";
      out += generators_[static_cast<std::size_t>(m[i])].name;
    }
    return out;
  }
  for (std::size_t i = 0; i < m.size();) {
    std::size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    if (!out.empty()) out += "*";
    out += generators_[static_cast<std::size_t>(m[i])].name;
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

AlgebraPtr AlgebraPresentation::prefix(std::size_t k) const {
  if (k > generators_.size()) fail(ErrorCode::InvalidArgument, "prefix longer than generator list");
  return make(ring_, flavor_, std::vector<GeneratorSpec>(generators_.begin(), generators_.begin() + static_cast<std::ptrdiff_t>(k)), cap_);
}

AlgebraPtr AlgebraPresentation::with_generator(const GeneratorSpec& g) const {
  auto gens = generators_;
  gens.push_back(g);
  return make(ring_, flavor_, std::move(gens), cap_);
}

AlgebraPtr AlgebraPresentation::with_ring(Ring ring) const { return make(ring, flavor_, generators_, cap_); }

AlgebraPtr AlgebraPresentation::with_cap(int cap) const { return make(ring_, flavor_, generators_, cap); }

bool AlgebraPresentation::same_structure(const AlgebraPresentation& other) const {
  return ring_ == other.ring_ && flavor_ == other.flavor_ && generators_ == other.generators_ && cap_ == other.cap_;
}

// ---------------------------------------------------------------------------

Element::Element(AlgebraPtr algebra, int arity, int degree)
    : algebra_(std::move(algebra)), arity_(arity), degree_(degree) {
  if (!algebra_) fail(ErrorCode::InvalidArgument, "element without presentation");
  if (arity_ < 1) fail(ErrorCode::InvalidArgument, "element arity must be positive");
}

Element Element::unit(AlgebraPtr algebra, int arity) {
  Element e(algebra, arity, 0);
  e.add_term(TensorKey(static_cast<std::size_t>(arity)), Scalar::one(algebra->ring()));
  return e;
}

Element Element::generator(AlgebraPtr algebra, int index) {
  const int deg = algebra->generators().at(static_cast<std::size_t>(index)).degree;
  Element e(algebra, 1, deg);
  e.add_term({{index}}, Scalar::one(algebra->ring()));
  return e;
}

Element Element::monomial(AlgebraPtr algebra, const Monomial& m, const Scalar& c) {
  const int deg = algebra->degree_of(m);
  Element e(algebra, 1, deg);
  e.add_term({m}, c);
  return e;
}

Element Element::tensor_monomial(AlgebraPtr algebra, const TensorKey& key, const Scalar& c) {
  const int deg = algebra->degree_of(key);
  Element e(algebra, static_cast<int>(key.size()), deg);
  e.add_term(key, c);
  return e;
}

Scalar Element::coefficient(const TensorKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Scalar::zero(ring()) : it->second;
}

void Element::add_term(const TensorKey& key, const Scalar& c) {
  if (c.is_zero()) return;
  if (static_cast<int>(key.size()) != arity_) fail(ErrorCode::InvalidArgument, "term has wrong tensor arity");
  if (algebra_->degree_of(key) != degree_)
    fail(ErrorCode::InvalidArgument, "inhomogeneous term in degree " + std::to_string(degree_));
  if (!(c.ring() == ring())) fail(ErrorCode::MixedPresentation, "coefficient over the wrong ring");
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Element::check_compatible(const Element& other) const {
  if (algebra_ != other.algebra_ && !algebra_->same_structure(*other.algebra_))
    fail(ErrorCode::MixedPresentation, "elements belong to different presentations");
  if (arity_ != other.arity_) fail(ErrorCode::MixedPresentation, "elements have different tensor arity");
}

Element& Element::operator+=(const Element& other) {
  check_compatible(other);
  if (other.is_zero()) return *this;
  if (is_zero()) degree_ = other.degree_;
  if (degree_ != other.degree_)
    fail(ErrorCode::InvalidArgument, "adding elements of degrees " + std::to_string(degree_) + " and " +
                                         std::to_string(other.degree_));
  for (const auto& [k, c] : other.terms_) add_term(k, c);
  return *this;
}

Element& Element::operator-=(const Element& other) { return *this += -other; }

Element Element::operator-() const {
  Element r(algebra_, arity_, degree_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

Element operator*(const Scalar& c, const Element& e) {
  Element r(e.algebra_, e.arity_, e.degree_);
  if (c.is_zero()) return r;
  for (const auto& [k, v] : e.terms_) r.add_term(k, c * v);
  return r;
}

Element Element::divided_by(const Scalar& c) const {
  Element r(algebra_, arity_, degree_);
  for (const auto& [k, v] : terms_) r.add_term(k, v.divided_by(c));
  return r;
}

bool operator==(const Element& a, const Element& b) {
  return a.arity_ == b.arity_ && a.terms_ == b.terms_ && (a.is_zero() || a.degree_ == b.degree_);
}

int Element::valuation() const {
  int v = kInfiniteValuation;
  for (const auto& [k, c] : terms_) v = std::min(v, c.valuation());
  return v;
}

bool Element::divisible_by_prime_power(int e) const {
  if (e <= 0) return true;
  if (ring().kind() == RingKind::Rational) return true;
  return valuation() >= e;
}

Element Element::rebased(AlgebraPtr algebra) const {
  Element r(algebra, arity_, degree_);
  for (const auto& [k, c] : terms_) {
    for (const auto& m : k)
      for (int g : m)
        if (g < 0 || static_cast<std::size_t>(g) >= algebra->generator_count())
          fail(ErrorCode::InvalidArgument, "rebased: generator index outside target presentation");
    r.add_term(k, c.with_ring(algebra->ring()));
  }
  return r;
}

std::string Element::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    Scalar mag = c;
    bool negative = sgn(c.value()) < 0;
    if (negative) mag = -c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string body;
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (i) body += " (x) ";
      body += algebra_->render(key[i]);
    }
    const bool bare_unit = key.size() == 1 && key[0].empty();
    if (bare_unit) {
      out += mag.to_string();
    } else if (mag.is_one()) {
      out += body;
    } else {
      out += mag.to_string() + "*" + body;
    }
  }
  return out;
}

Element multiply(const Element& a, const Element& b) {
  if (a.algebra() != b.algebra() && !a.algebra()->same_structure(*b.algebra()))
    fail(ErrorCode::MixedPresentation, "multiply: elements belong to different presentations");
  if (a.arity() != b.arity()) fail(ErrorCode::MixedPresentation, "multiply: tensor arities differ");
  const auto& alg = *a.algebra();
  Element out(a.algebra(), a.arity(), a.degree() + b.degree());
  for (const auto& [ka, ca] : a.terms()) {
    std::vector<int> deg_a;
    for (const auto& m : ka) deg_a.push_back(alg.degree_of(m));
    for (const auto& [kb, cb] : b.terms()) {
      int parity = 0;
      int sign = 1;
      TensorKey key(ka.size());
      bool vanished = false;
      for (std::size_t j = 0; j < kb.size() && !vanished; ++j) {
        const int db = alg.degree_of(kb[j]);
        for (std::size_t i = j + 1; i < ka.size(); ++i) parity += db * deg_a[i];
        auto [s, m] = alg.multiply_monomials(ka[j], kb[j]);
        if (s == 0) vanished = true;
        sign *= s;
        key[j] = std::move(m);
      }
      if (vanished) continue;
      if (parity % 2) sign = -sign;
      Scalar c = ca * cb;
      out.add_term(key, sign > 0 ? c : -c);
    }
  }
  return out;
}

Element tensor(const Element& a, const Element& b) {
  if (a.algebra() != b.algebra() && !a.algebra()->same_structure(*b.algebra()))
    fail(ErrorCode::MixedPresentation, "tensor: elements belong to different presentations");
  Element out(a.algebra(), a.arity() + b.arity(), a.degree() + b.degree());
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      TensorKey key = ka;
      key.insert(key.end(), kb.begin(), kb.end());
      out.add_term(key, ca * cb);
    }
  return out;
}

Vector to_vector(const Element& e, bool reduced) {
  const auto& alg = *e.algebra();
  const auto& basis = alg.tensor_basis(e.arity(), reduced, e.degree());
  Vector v = zero_vector(e.ring(), basis.size());
  for (const auto& [k, c] : e.terms()) {
    auto idx = alg.tensor_index(e.arity(), reduced, e.degree(), k);
    if (!idx) fail(ErrorCode::InvalidArgument, "term outside the " + std::string(reduced ? "reduced " : "") + "tensor basis");
    v[*idx] = c;
  }
  return v;
}

Element from_vector(const AlgebraPtr& algebra, int arity, bool reduced, int degree, const Vector& v) {
  const auto& basis = algebra->tensor_basis(arity, reduced, degree);
  if (v.size() != basis.size()) fail(ErrorCode::InvalidArgument, "from_vector: length mismatch");
  Element e(algebra, arity, degree);
  for (std::size_t i = 0; i < v.size(); ++i) e.add_term(basis[i], v[i]);
  return e;
}

// ---------------------------------------------------------------------------

struct Derivation::Cache {
  std::mutex mutex;
  std::map<Monomial, Element> values;
};

Derivation::Derivation(AlgebraPtr algebra, std::vector<Element> values)
    : algebra_(std::move(algebra)), values_(std::move(values)), cache_(std::make_shared<Cache>()) {
  if (values_.size() != algebra_->generator_count())
    fail(ErrorCode::InvalidDerivation, "derivation needs one value per generator");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const auto& g = algebra_->generators()[i];
    auto& v = values_[i];
    if (v.arity() != 1) fail(ErrorCode::InvalidDerivation, "d(" + g.name + ") must be an algebra element");
    if (v.is_zero()) v = Element::zero(algebra_, 1, g.degree - 1);
    if (v.degree() != g.degree - 1)
      fail(ErrorCode::InvalidDerivation, "d(" + g.name + ") must have degree " + std::to_string(g.degree - 1));
    if (v.algebra() != algebra_) v = v.rebased(algebra_);
  }
}

Derivation Derivation::zero(AlgebraPtr algebra) {
  std::vector<Element> values;
  for (const auto& g : algebra->generators()) values.push_back(Element::zero(algebra, 1, g.degree - 1));
  return Derivation(algebra, std::move(values));
}

Element Derivation::apply_monomial(const Monomial& m) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->values.find(m);
    if (it != cache_->values.end()) return it->second;
  }
  const Ring ring = algebra_->ring();
  Element out(algebra_, 1, algebra_->degree_of(m) - 1);
  int prefix_degree = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& dg = values_[static_cast<std::size_t>(m[i])];
    if (!dg.is_zero()) {
      Monomial head(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(i));
      Monomial tail(m.begin() + static_cast<std::ptrdiff_t>(i) + 1, m.end());
      Element term = multiply(multiply(Element::monomial(algebra_, head, Scalar::one(ring)), dg),
                              Element::monomial(algebra_, tail, Scalar::one(ring)));
      if (prefix_degree % 2) term = -term;
      out += term;
    }
    prefix_degree += algebra_->generators()[static_cast<std::size_t>(m[i])].degree;
  }
  std::lock_guard<std::mutex> lock(cache_->mutex);
  cache_->values.emplace(m, out);
  return out;
}

Element Derivation::apply(const Element& e) const {
  if (e.algebra() != algebra_ && !e.algebra()->same_structure(*algebra_))
    fail(ErrorCode::MixedPresentation, "derivation applied to an element of another presentation");
  Element out(algebra_, e.arity(), e.degree() - 1);
  for (const auto& [key, c] : e.terms()) {
    int prefix_degree = 0;
    for (std::size_t j = 0; j < key.size(); ++j) {
      Element dm = apply_monomial(key[j]);
      const bool negative = prefix_degree % 2 == 1;
      for (const auto& [dk, dc] : dm.terms()) {
        TensorKey k = key;
        k[j] = dk[0];
        Scalar coeff = c * dc;
        out.add_term(k, negative ? -coeff : coeff);
      }
      prefix_degree += algebra_->degree_of(key[j]);
    }
  }
  return out;
}

Matrix Derivation::matrix(int arity, bool reduced, int n) const {
  return linear_map_matrix(algebra_, arity, reduced, n, arity, reduced, n - 1,
                           [this](const Element& e) { return apply(e); });
}

void Derivation::validate() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    Element dd = apply(values_[i]);
    if (!dd.is_zero())
      fail(ErrorCode::InvalidDerivation, "d(d(" + algebra_->generators()[i].name + ")) = " + dd.to_string());
  }
}

Derivation Derivation::rebased(AlgebraPtr algebra) const {
  std::vector<Element> values;
  for (const auto& v : values_) values.push_back(v.rebased(algebra));
  return Derivation(std::move(algebra), std::move(values));
}

std::pair<AlgebraPtr, Derivation> adjoin_to_algebra(const Derivation& d, const GeneratorSpec& x, const Element& b) {
  const auto& base = d.algebra();
  if (base->flavor() != Flavor::FreeAssociative)
    fail(ErrorCode::InvalidArgument, "free monogenic extension needs the free associative flavor");
  for (const auto& g : base->generators())
    if (g.degree > x.degree)
      fail(ErrorCode::InvalidArgument, "new generator '" + x.name + "' must not precede '" + g.name + "' in degree");
  if (b.arity() != 1 || (!b.is_zero() && b.degree() != x.degree - 1))
    fail(ErrorCode::InvalidArgument, "boundary value must lie in degree " + std::to_string(x.degree - 1));
  if (!d.apply(b).is_zero()) fail(ErrorCode::NotACycle, "d(" + x.name + ") = " + b.to_string() + " is not a cycle");
  AlgebraPtr extended = base->with_generator(x);
  std::vector<Element> values;
  for (const auto& v : d.values()) values.push_back(v.rebased(extended));
  values.push_back(b.is_zero() ? Element::zero(extended, 1, x.degree - 1) : b.rebased(extended));
  return {extended, Derivation(extended, std::move(values))};
}

}  // namespace hah
