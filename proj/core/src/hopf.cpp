#include "hah/hopf.hpp"

#include <mutex>

#include "hah/errors.hpp"

namespace hah {

struct HahPresentation::Cache {
  std::mutex mutex;
  std::map<Monomial, Element> diagonals;
  std::map<std::pair<int, bool>, std::shared_ptr<ChainComplex>> complexes;
};

namespace {

bool has_unit_factor(const TensorKey& key) {
  for (const auto& m : key)
    if (m.empty()) return true;
  return false;
}

Element checked(const AlgebraPtr& alg, const Element& e, int arity, int degree, const std::string& what) {
  if (e.is_zero()) return Element::zero(alg, arity, degree);
  if (e.arity() != arity) fail(ErrorCode::InvalidArgument, what + " has tensor arity " + std::to_string(e.arity()));
  if (e.degree() != degree)
    fail(ErrorCode::InvalidArgument, what + " must have degree " + std::to_string(degree));
  Element out = e.algebra() == alg ? e : e.rebased(alg);
  for (const auto& [k, c] : out.terms())
    if (has_unit_factor(k)) fail(ErrorCode::InvalidArgument, what + " has a term with a unit factor");
  return out;
}

}  // namespace

HahPresentation::HahPresentation(AlgebraPtr algebra, Derivation differential, std::vector<Element> reduced_diagonal,
                                 std::vector<std::optional<Element>> coassociativity,
                                 std::vector<std::optional<Element>> cocommutativity, int q, int rho)
    : algebra_(std::move(algebra)),
      differential_(differential.algebra() == algebra_ ? std::move(differential) : differential.rebased(algebra_)),
      q_(q),
      rho_(rho),
      cache_(std::make_shared<Cache>()) {
  const std::size_t k = algebra_->generator_count();
  if (reduced_diagonal.size() != k) fail(ErrorCode::InvalidArgument, "need one reduced diagonal per generator");
  if (coassociativity.empty()) coassociativity.resize(k);
  if (cocommutativity.empty()) cocommutativity.resize(k);
  if (coassociativity.size() != k || cocommutativity.size() != k)
    fail(ErrorCode::InvalidArgument, "homotopy witness lists must match the generators");
  for (std::size_t i = 0; i < k; ++i) {
    const auto& g = algebra_->generators()[i];
    diagonal_.push_back(checked(algebra_, reduced_diagonal[i], 2, g.degree, "diagonal of " + g.name));
    coassoc_.push_back(coassociativity[i]
                           ? std::optional<Element>(checked(algebra_, *coassociativity[i], 3, g.degree + 1,
                                                            "coassociativity witness of " + g.name))
                           : std::nullopt);
    cocomm_.push_back(cocommutativity[i]
                          ? std::optional<Element>(checked(algebra_, *cocommutativity[i], 2, g.degree + 1,
                                                           "cocommutativity witness of " + g.name))
                          : std::nullopt);
  }
}

HahPresentation HahPresentation::primitively_generated(AlgebraPtr algebra, Derivation differential, int q, int rho) {
  std::vector<Element> diag;
  for (const auto& g : algebra->generators()) diag.push_back(Element::zero(algebra, 2, g.degree));
  return HahPresentation(algebra, std::move(differential), std::move(diag), {}, {}, q, rho);
}

int HahPresentation::q() const { return q_ > 0 ? q_ : algebra_->min_degree(); }

bool HahPresentation::is_strict() const {
  for (std::size_t i = 0; i < diagonal_.size(); ++i) {
    if (coassoc_[i] && !coassoc_[i]->is_zero()) return false;
    if (cocomm_[i] && !cocomm_[i]->is_zero()) return false;
  }
  return true;
}

bool HahPresentation::is_primitively_generated() const {
  for (const auto& d : diagonal_)
    if (!d.is_zero()) return false;
  return true;
}

Element HahPresentation::diagonal_monomial(const Monomial& m) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->diagonals.find(m);
    if (it != cache_->diagonals.end()) return it->second;
  }
  const Ring ring = algebra_->ring();
  Element out = Element::unit(algebra_, 2);
  if (!m.empty()) {
    const int g = m.back();
    Element dg = diagonal_[static_cast<std::size_t>(g)];
    dg.add_term({{g}, {}}, Scalar::one(ring));
    dg.add_term({{}, {g}}, Scalar::one(ring));
    if (m.size() == 1) {
      out = dg;
    } else {
      out = multiply(diagonal_monomial(Monomial(m.begin(), m.end() - 1)), dg);
    }
  }
  std::lock_guard<std::mutex> lock(cache_->mutex);
  cache_->diagonals.emplace(m, out);
  return out;
}

Element HahPresentation::diagonal(const Element& a) const {
  if (a.arity() != 1) fail(ErrorCode::InvalidArgument, "diagonal of a tensor");
  Element out(algebra_, 2, a.degree());
  for (const auto& [k, c] : a.terms()) {
    Element d = diagonal_monomial(k[0]);
    for (const auto& [dk, dc] : d.terms()) out.add_term(dk, c * dc);
  }
  return out;
}

Element HahPresentation::reduced_diagonal(const Element& a) const {
  if (a.arity() != 1) fail(ErrorCode::InvalidArgument, "reduced diagonal of a tensor");
  if (a.degree() > cap())
    fail(ErrorCode::DegreeOutOfCap, "degree " + std::to_string(a.degree()) + " exceeds cap " + std::to_string(cap()));
  Element out(algebra_, 2, a.degree());
  for (const auto& [k, c] : a.terms()) {
    if (k[0].empty()) continue;
    Element d = diagonal_monomial(k[0]);
    for (const auto& [dk, dc] : d.terms())
      if (!dk[0].empty() && !dk[1].empty()) out.add_term(dk, c * dc);
  }
  return out;
}

ChainComplex HahPresentation::complex(int arity, bool reduced) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto key = std::make_pair(arity, reduced);
  auto it = cache_->complexes.find(key);
  if (it != cache_->complexes.end()) return *it->second;
  AlgebraPtr alg = algebra_;
  Derivation d = differential_;
  std::string name = arity == 1 ? (reduced ? "I" : "A") : (reduced ? "I^" : "A^") + std::to_string(arity);
  auto c = std::make_shared<ChainComplex>(
      alg->ring(), alg->cap(), [alg, arity, reduced](int n) { return alg->tensor_basis(arity, reduced, n).size(); },
      [d, arity, reduced](int n) { return d.matrix(arity, reduced, n); }, name);
  cache_->complexes.emplace(key, c);
  return *c;
}

HahPresentation HahPresentation::prefix(std::size_t k) const {
  AlgebraPtr alg = algebra_->prefix(k);
  std::vector<Element> dvals, diag;
  std::vector<std::optional<Element>> fa, ga;
  for (std::size_t i = 0; i < k; ++i) {
    dvals.push_back(differential_.value(i).rebased(alg));
    diag.push_back(diagonal_[i].rebased(alg));
    fa.push_back(coassoc_[i] ? std::optional<Element>(coassoc_[i]->rebased(alg)) : std::nullopt);
    ga.push_back(cocomm_[i] ? std::optional<Element>(cocomm_[i]->rebased(alg)) : std::nullopt);
  }
  return HahPresentation(alg, Derivation(alg, std::move(dvals)), std::move(diag), std::move(fa), std::move(ga), q_,
                         rho_);
}

namespace {

HahPresentation rebuilt(const HahPresentation& h, const AlgebraPtr& alg, int q, int rho) {
  std::vector<Element> diag;
  std::vector<std::optional<Element>> fa, ga;
  for (std::size_t i = 0; i < h.algebra()->generator_count(); ++i) {
    diag.push_back(h.generator_diagonal(i).rebased(alg));
    const auto& f = h.coassociativity_witness(i);
    const auto& g = h.cocommutativity_witness(i);
    fa.push_back(f ? std::optional<Element>(f->rebased(alg)) : std::nullopt);
    ga.push_back(g ? std::optional<Element>(g->rebased(alg)) : std::nullopt);
  }
  return HahPresentation(alg, h.differential().rebased(alg), std::move(diag), std::move(fa), std::move(ga), q, rho);
}

}  // namespace

HahPresentation HahPresentation::with_ring(Ring ring) const {
  return rebuilt(*this, algebra_->with_ring(ring), q_, rho_);
}

HahPresentation HahPresentation::with_cap(int cap) const { return rebuilt(*this, algebra_->with_cap(cap), q_, rho_); }

HahPresentation HahPresentation::reduced_mod_p() const {
  if (ring().is_field()) return *this;
  return with_ring(ring().residue_field());
}

HahPresentation HahPresentation::with_metadata(int q, int rho) const { return rebuilt(*this, algebra_, q, rho); }

HahPresentation HahPresentation::with_generator(const GeneratorSpec& g, const Element& boundary,
                                                const Element& diagonal, std::optional<Element> coassociativity,
                                                std::optional<Element> cocommutativity) const {
  AlgebraPtr alg = algebra_->with_generator(g);
  std::vector<Element> dvals, diag;
  std::vector<std::optional<Element>> fa, ga;
  for (std::size_t i = 0; i < algebra_->generator_count(); ++i) {
    dvals.push_back(differential_.value(i).rebased(alg));
    diag.push_back(diagonal_[i].rebased(alg));
    fa.push_back(coassoc_[i] ? std::optional<Element>(coassoc_[i]->rebased(alg)) : std::nullopt);
    ga.push_back(cocomm_[i] ? std::optional<Element>(cocomm_[i]->rebased(alg)) : std::nullopt);
  }
  dvals.push_back(boundary.is_zero() ? Element::zero(alg, 1, g.degree - 1) : boundary.rebased(alg));
  diag.push_back(diagonal.is_zero() ? Element::zero(alg, 2, g.degree) : diagonal.rebased(alg));
  fa.push_back(coassociativity ? std::optional<Element>(coassociativity->rebased(alg)) : std::nullopt);
  ga.push_back(cocommutativity ? std::optional<Element>(cocommutativity->rebased(alg)) : std::nullopt);
  return HahPresentation(alg, Derivation(alg, std::move(dvals)), std::move(diag), std::move(fa), std::move(ga), q_,
                         rho_);
}

// ---------------------------------------------------------------------------

Element map_factor(const Element& t, int position, int image_arity,
                   const std::function<Element(const Element&)>& fn) {
  if (position < 0 || position >= t.arity()) fail(ErrorCode::InvalidArgument, "map_factor: bad position");
  const auto& alg = t.algebra();
  const Ring ring = alg->ring();
  Element out(alg, t.arity() - 1 + image_arity, t.degree());
  const auto pos = static_cast<std::size_t>(position);
  for (const auto& [key, c] : t.terms()) {
    Element image = fn(Element::monomial(alg, key[pos], Scalar::one(ring)));
    for (const auto& [ik, ic] : image.terms()) {
      TensorKey k(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(pos));
      k.insert(k.end(), ik.begin(), ik.end());
      k.insert(k.end(), key.begin() + static_cast<std::ptrdiff_t>(pos) + 1, key.end());
      out.add_term(k, c * ic);
    }
  }
  return out;
}

Element twist(const Element& t) {
  if (t.arity() != 2) fail(ErrorCode::InvalidArgument, "twist needs a tensor square");
  const auto& alg = *t.algebra();
  Element out(t.algebra(), 2, t.degree());
  for (const auto& [key, c] : t.terms()) {
    const int da = alg.degree_of(key[0]);
    const int db = alg.degree_of(key[1]);
    out.add_term({key[1], key[0]}, (da * db) % 2 ? -c : c);
  }
  return out;
}

Element map_each_factor(const Element& t, const std::function<Element(const Element&)>& fn) {
  const auto& alg = t.algebra();
  const Ring ring = alg->ring();
  Element out(alg, t.arity(), t.degree());
  for (const auto& [key, c] : t.terms()) {
    std::optional<Element> acc;
    for (const auto& m : key) {
      Element image = fn(Element::monomial(alg, m, Scalar::one(ring)));
      if (image.is_zero()) {
        acc.reset();
        break;
      }
      acc = acc ? tensor(*acc, image) : image;
    }
    if (acc) out += c * *acc;
  }
  return out;
}

Element coassociativity_defect(const HahPresentation& h, const Element& phi, DefectConvention convention) {
  if (phi.arity() != 2) fail(ErrorCode::InvalidArgument, "coassociativity defect needs a tensor square");
  if (convention == DefectConvention::ReducedDifference) {
    auto rd = [&h](const Element& e) { return h.reduced_diagonal(e); };
    return map_factor(phi, 0, 2, rd) - map_factor(phi, 1, 2, rd);
  }
  auto fd = [&h](const Element& e) { return h.diagonal(e); };
  return map_factor(phi, 0, 2, fd) + map_factor(phi, 1, 2, fd);
}

Element cocommutativity_defect(const Element& phi) { return twist(phi) - phi; }

PrimitiveSlice primitives_at(const HahPresentation& h, int n) {
  const auto& alg = h.algebra();
  PrimitiveSlice slice{n, {}, Matrix(h.ring(), alg->basis(n).size(), 0)};
  if (n <= 0) return slice;
  Matrix dbar = linear_map_matrix(alg, 1, true, n, 2, true, n, [&h](const Element& e) { return h.reduced_diagonal(e); });
  slice.inclusion = kernel_basis(dbar);
  for (std::size_t j = 0; j < slice.inclusion.cols(); ++j)
    slice.basis.push_back(from_vector(alg, 1, false, n, slice.inclusion.column(j)));
  return slice;
}

IndecomposableSlice indecomposables_at(const HahPresentation& h0, int n) {
  const HahPresentation h = h0.reduced_mod_p();
  const auto& alg = h.algebra();
  const Ring ring = h.ring();
  const auto& basis = alg->basis(n);
  const std::size_t dim = basis.size();
  IndecomposableSlice slice{n, 0, {}, Matrix(ring, 0, dim), Matrix(ring, 0, 0)};
  if (n <= 0) {
    slice.from_primitives = Matrix(ring, 0, 0);
    return slice;
  }
  std::vector<Vector> products;
  for (int i = 1; i < n; ++i)
    for (const auto& a : alg->basis(i))
      for (const auto& b : alg->basis(n - i)) {
        Element prod = multiply(Element::monomial(alg, a, Scalar::one(ring)), Element::monomial(alg, b, Scalar::one(ring)));
        products.push_back(to_vector(prod, false));
      }
  Matrix dec = Matrix::from_columns(ring, dim, products);
  slice.decomposable_rank = rank(dec);
  // Complete the decomposables with standard monomials, scanning in basis order.
  Matrix current = dec;
  std::size_t current_rank = slice.decomposable_rank;
  std::vector<std::size_t> chosen;
  for (std::size_t j = 0; j < dim && current_rank < dim; ++j) {
    Vector e = zero_vector(ring, dim);
    e[j] = Scalar::one(ring);
    Matrix trial = current.hstack(Matrix::from_columns(ring, dim, {e}));
    std::size_t r = rank(trial);
    if (r > current_rank) {
      chosen.push_back(j);
      current = std::move(trial);
      current_rank = r;
    }
  }
  for (auto j : chosen) slice.basis.push_back(Element::monomial(alg, basis[j], Scalar::one(ring)));
  // Projection: solve [chosen | dec] for each standard vector, keep the chosen part.
  std::vector<Vector> chosen_cols;
  for (auto j : chosen) {
    Vector e = zero_vector(ring, dim);
    e[j] = Scalar::one(ring);
    chosen_cols.push_back(e);
  }
  LinearSolver solver(Matrix::from_columns(ring, dim, chosen_cols).hstack(dec));
  slice.projection = Matrix(ring, chosen.size(), dim);
  for (std::size_t j = 0; j < dim; ++j) {
    Vector e = zero_vector(ring, dim);
    e[j] = Scalar::one(ring);
    auto u = solver.solve(e);
    if (!u) fail(ErrorCode::TheoryViolation, "indecomposables: basis completion does not span");
    for (std::size_t i = 0; i < chosen.size(); ++i) slice.projection.at(i, j) = (*u)[i];
  }
  PrimitiveSlice prim = primitives_at(h, n);
  slice.from_primitives = slice.projection * prim.inclusion;
  return slice;
}

bool is_coderivation_at(const HahPresentation& h, int n) {
  const auto& alg = h.algebra();
  const Ring ring = h.ring();
  if (n <= 0) return true;
  for (const auto& m : alg->basis(n)) {
    Element e = Element::monomial(alg, m, Scalar::one(ring));
    Element lhs = h.reduced_diagonal(h.differential().apply(e));
    Element rhs = h.differential().apply(h.reduced_diagonal(e));
    if (!(lhs - rhs).is_zero()) return false;
  }
  return true;
}

JMapSlice j_map_at(const HahPresentation& h0, int n) {
  const HahPresentation h = h0.reduced_mod_p();
  const auto& alg = h.algebra();
  const Ring ring = h.ring();
  if (n + 1 > h.cap())
    fail(ErrorCode::DegreeOutOfCap, "j-map in degree " + std::to_string(n) + " needs degree " + std::to_string(n + 1));
  for (int k : {n, n + 1})
    if (!is_coderivation_at(h, k))
      fail(ErrorCode::NotACoderivation, "differential is not a coderivation in degree " + std::to_string(k));

  std::map<int, PrimitiveSlice> prim;
  for (int k = n - 1; k <= n + 1; ++k) prim.emplace(k, primitives_at(h, k));
  auto pdim = [&prim](int k) -> std::size_t {
    auto it = prim.find(k);
    return it == prim.end() ? 0 : it->second.basis.size();
  };
  const ChainComplex ac = h.complex();
  std::map<int, Matrix> pbound;
  for (int k : {n, n + 1}) {
    Matrix m(ring, pdim(k - 1), pdim(k));
    if (pdim(k) > 0 && pdim(k - 1) > 0) {
      LinearSolver sol(prim.at(k - 1).inclusion);
      for (std::size_t j = 0; j < pdim(k); ++j) {
        auto u = sol.solve(ac.boundary(k).apply(prim.at(k).inclusion.column(j)));
        if (!u) fail(ErrorCode::NotACoderivation, "PA is not a subcomplex in degree " + std::to_string(k));
        m.set_column(j, *u);
      }
    } else if (pdim(k) > 0) {
      for (std::size_t j = 0; j < pdim(k); ++j)
        if (!is_zero(ac.boundary(k).apply(prim.at(k).inclusion.column(j))))
          fail(ErrorCode::NotACoderivation, "PA is not a subcomplex in degree " + std::to_string(k));
    }
    pbound.emplace(k, std::move(m));
  }
  ChainComplex pc(
      ring, n + 1,
      [n, pdim](int k) { return (k >= n - 1 && k <= n + 1) ? pdim(k) : std::size_t{0}; },
      [n, ring, pdim, pbound](int k) {
        auto it = pbound.find(k);
        if (it != pbound.end()) return it->second;
        std::size_t rows = (k - 1 >= n - 1 && k - 1 <= n + 1) ? pdim(k - 1) : 0;
        std::size_t cols = (k >= n - 1 && k <= n + 1) ? pdim(k) : 0;
        return Matrix(ring, rows, cols);
      },
      "PA");
  HomologySlice hp = homology_at(pc, n);
  HomologySlice ha = homology_at(ac, n);
  HomologySlice hii = homology_at(h.complex(2, true), n);

  JMapSlice out;
  out.degree = n;
  out.dim_HPA = hp.free_rank;
  out.dim_HA = ha.free_rank;
  // [z] -> [Δ̄z]; its kernel is PH_n(A).
  Matrix delta(ring, hii.free_rank, ha.free_rank);
  for (std::size_t j = 0; j < ha.free_rank; ++j) {
    Element z = from_vector(alg, 1, false, n, ha.free_representatives[j]);
    auto cls = hii.class_of(to_vector(h.reduced_diagonal(z), true));
    for (std::size_t i = 0; i < hii.free_rank; ++i) delta.at(i, j) = cls.free_coordinates[i];
  }
  // Primitives live in the augmentation ideal, so PH_0 = 0.
  out.dim_PHA = n > 0 ? ha.free_rank - rank(delta) : 0;
  out.matrix = Matrix(ring, ha.free_rank, hp.free_rank);
  for (std::size_t j = 0; j < hp.free_rank; ++j) {
    Vector rep = n >= 0 ? prim.at(n).inclusion.apply(hp.free_representatives[j]) : Vector{};
    out.hpa_representatives.push_back(from_vector(alg, 1, false, n, rep));
    auto cls = ha.class_of(rep);
    for (std::size_t i = 0; i < ha.free_rank; ++i) out.matrix.at(i, j) = cls.free_coordinates[i];
  }
  if (!(delta * out.matrix).is_zero()) fail(ErrorCode::TheoryViolation, "image of H(PA) is not primitive");
  out.rank = rank(out.matrix);
  out.kernel_dim = out.dim_HPA - out.rank;
  out.cokernel_dim = out.dim_PHA - out.rank;
  return out;
}

HomotopyDefects homotopy_defects(const HahPresentation& h, const Element& phi, DefectConvention convention) {
  if (phi.arity() != 2) fail(ErrorCode::InvalidArgument, "homotopy defects need a tensor square");
  const int n = phi.degree();
  if (n + 1 > h.cap())
    fail(ErrorCode::DegreeOutOfCap, "homotopies for degree " + std::to_string(n) + " live in degree " +
                                        std::to_string(n + 1) + " above the cap");
  const bool reduced = convention == DefectConvention::ReducedDifference;
  HomotopyDefects out{coassociativity_defect(h, phi, convention), cocommutativity_defect(phi), {}, {}, {}, {}};

  auto attempt = [&h, n](const Element& defect, int arity, bool red, std::optional<Element>& witness,
                         std::optional<HomologyClass>& cls) {
    if (defect.is_zero()) {
      witness = Element::zero(h.algebra(), arity, n + 1);
      return;
    }
    ChainComplex c = h.complex(arity, red);
    Vector v = to_vector(defect, red);
    auto u = solve(c.boundary(n + 1), v);
    if (u) {
      witness = from_vector(h.algebra(), arity, red, n + 1, *u);
      return;
    }
    if (is_zero(c.boundary(n).apply(v))) cls = homology_at(c, n).class_of(v);
  };
  attempt(out.coassociativity, 3, reduced, out.f, out.coassociativity_class);
  attempt(out.cocommutativity, 2, true, out.g, out.cocommutativity_class);
  return out;
}

// ---------------------------------------------------------------------------

StructureTables structure_tables(const HahPresentation& h, int N) {
  const auto& alg = h.algebra();
  const Ring ring = h.ring();
  StructureTables t;
  t.ring = ring;
  t.top = N;
  for (int n = 0; n <= N; ++n) t.dims.push_back(alg->basis(n).size());
  for (int i = 0; i <= N; ++i)
    for (int j = 0; i + j <= N; ++j) {
      const auto& bi = alg->basis(i);
      const auto& bj = alg->basis(j);
      const std::size_t dj = bj.size();
      Matrix prod(ring, t.dims[static_cast<std::size_t>(i + j)], bi.size() * dj);
      for (std::size_t a = 0; a < bi.size(); ++a)
        for (std::size_t b = 0; b < dj; ++b) {
          auto [sign, m] = alg->multiply_monomials(bi[a], bj[b]);
          if (sign == 0) continue;
          auto idx = alg->tensor_index(1, false, i + j, {m});
          prod.at(*idx, a * dj + b) = Scalar(ring, static_cast<long>(sign));
        }
      t.product.emplace(std::make_pair(i, j), std::move(prod));
      Matrix cop(ring, bi.size() * dj, t.dims[static_cast<std::size_t>(i + j)]);
      const auto& bn = alg->basis(i + j);
      for (std::size_t w = 0; w < bn.size(); ++w) {
        Element d = h.diagonal_monomial(bn[w]);
        for (const auto& [k, c] : d.terms()) {
          if (alg->degree_of(k[0]) != i) continue;
          auto a = alg->tensor_index(1, false, i, {k[0]});
          auto b = alg->tensor_index(1, false, j, {k[1]});
          cop.at(*a * dj + *b, w) = c;
        }
      }
      t.coproduct.emplace(std::make_pair(i, j), std::move(cop));
    }
  return t;
}

StructureTables dualize(const StructureTables& t) {
  StructureTables d;
  d.ring = t.ring;
  d.top = t.top;
  d.dims = t.dims;
  for (const auto& [k, m] : t.coproduct) d.product.emplace(k, m.transpose());
  for (const auto& [k, m] : t.product) d.coproduct.emplace(k, m.transpose());
  return d;
}

StructureTables dualize_range(const HahPresentation& h, int N) { return dualize(structure_tables(h, N)); }

std::size_t coalgebra_primitive_dimension(const StructureTables& t, int n) {
  if (n <= 0 || n > t.top) return 0;
  const std::size_t dim = t.dims[static_cast<std::size_t>(n)];
  Matrix stacked(t.ring, 0, dim);
  for (int i = 1; i < n; ++i) stacked = stacked.vstack(t.coproduct.at({i, n - i}));
  return dim - rank(stacked);
}

bool is_deconcatenation(const StructureTables& t, const AlgebraPresentation& algebra) {
  for (const auto& [key, m] : t.coproduct) {
    const auto& bi = algebra.basis(key.first);
    const auto& bj = algebra.basis(key.second);
    const auto& bn = algebra.basis(key.first + key.second);
    for (std::size_t a = 0; a < bi.size(); ++a)
      for (std::size_t b = 0; b < bj.size(); ++b)
        for (std::size_t w = 0; w < bn.size(); ++w) {
          Monomial cat = bi[a];
          cat.insert(cat.end(), bj[b].begin(), bj[b].end());
          const Scalar& c = m.at(a * bj.size() + b, w);
          if (cat == bn[w] ? !c.is_one() : !c.is_zero()) return false;
        }
  }
  return true;
}

TensorCoalgebra::TensorCoalgebra(Ring ring, std::vector<GeneratorSpec> cogenerators, int cap)
    : words_(AlgebraPresentation::make(ring, Flavor::FreeAssociative, std::move(cogenerators), cap)) {}

Element TensorCoalgebra::reduced_diagonal(const Element& a) const {
  if (a.arity() != 1) fail(ErrorCode::InvalidArgument, "reduced diagonal of a tensor");
  Element out(words_, 2, a.degree());
  for (const auto& [k, c] : a.terms()) {
    const Monomial& w = k[0];
    for (std::size_t s = 1; s < w.size(); ++s)
      out.add_term({Monomial(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(s)),
                    Monomial(w.begin() + static_cast<std::ptrdiff_t>(s), w.end())},
                   c);
  }
  return out;
}

PrimitiveSlice TensorCoalgebra::primitives_at(int n) const {
  PrimitiveSlice slice{n, {}, Matrix(words_->ring(), words_->basis(n).size(), 0)};
  if (n <= 0) return slice;
  Matrix dbar = linear_map_matrix(words_, 1, true, n, 2, true, n, [this](const Element& e) { return reduced_diagonal(e); });
  slice.inclusion = kernel_basis(dbar);
  for (std::size_t j = 0; j < slice.inclusion.cols(); ++j)
    slice.basis.push_back(from_vector(words_, 1, false, n, slice.inclusion.column(j)));
  return slice;
}

}  // namespace hah
