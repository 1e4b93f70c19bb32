#include "hah/bockstein.hpp"

#include <algorithm>
#include <mutex>
#include <tuple>

#include "hah/errors.hpp"

namespace hah {

namespace {

Vector slice(const Vector& v, std::size_t first, std::size_t count) {
  return Vector(v.begin() + static_cast<std::ptrdiff_t>(first), v.begin() + static_cast<std::ptrdiff_t>(first + count));
}

Matrix scaled_identity(Ring ring, std::size_t n, const Scalar& c) {
  Matrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = c;
  return m;
}

Matrix scaled(Matrix m, const Scalar& c) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) *= c;
  return m;
}

}  // namespace

int TorsionLadder::max_exponent() const {
  int m = 0;
  for (const auto& [n, d] : degrees)
    for (const auto& pair : d.pairs) m = std::max(m, pair.exponent);
  return m;
}

std::size_t BocksteinPage::dimension(int n) const {
  auto it = degrees.find(n);
  return it == degrees.end() ? 0 : it->second.basis.size();
}

struct Bockstein::Cache {
  std::mutex mutex;
  std::map<std::tuple<std::string, int, int>, std::shared_ptr<const LinearSolver>> solvers;
};

Bockstein::Bockstein(ChainComplex complex) : complex_(std::move(complex)), cache_(std::make_shared<Cache>()) {
  if (complex_.ring().kind() != RingKind::Localized)
    fail(ErrorCode::InvalidArgument, "Bockstein spectral sequence needs a Z_(p) complex, got " + complex_.ring().name());
}

// zk   [p∂_n | -p^k]       unknowns (c ∈ C_n, e ∈ C_{n-1})
// bk   [∂_{n+1} | p^k]     unknowns (y ∈ C_{n+1}, e ∈ C_n)
// bss1 [∂_n | -p]          unknowns (c ∈ C_n, e ∈ C_{n-1})
// eq1  [p | ∂_{n+1}]       unknowns (e ∈ C_n, f ∈ C_{n+1})
Matrix Bockstein::system(const std::string& kind, int n, int k) const {
  const Ring& R = complex_.ring();
  const Scalar pk = Scalar::prime_power(R, k);
  const Scalar p = Scalar::prime_power(R, 1);
  if (kind == "zk")
    return scaled(complex_.boundary(n), p).hstack(scaled_identity(R, complex_.dimension(n - 1), -pk));
  if (kind == "bk") return complex_.boundary(n + 1).hstack(scaled_identity(R, complex_.dimension(n), pk));
  if (kind == "bss1") return complex_.boundary(n).hstack(scaled_identity(R, complex_.dimension(n - 1), -p));
  if (kind == "eq1") return scaled_identity(R, complex_.dimension(n), p).hstack(complex_.boundary(n + 1));
  fail(ErrorCode::InvalidArgument, "unknown Bockstein system " + kind);
}

std::optional<Vector> Bockstein::solve_with(const std::string& kind, int n, int k, const Vector& rhs) const {
  const auto key = std::make_tuple(kind, n, k);
  std::shared_ptr<const LinearSolver> solver;
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->solvers.find(key);
    if (it != cache_->solvers.end()) solver = it->second;
  }
  if (!solver) {
    solver = std::make_shared<const LinearSolver>(system(kind, n, k));
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->solvers.emplace(key, solver);
  }
  return solver->solve(rhs);
}

TorsionLadder Bockstein::ladder(int lo, int hi) const {
  TorsionLadder out;
  for (int n = std::max(0, lo); n <= hi; ++n) {
    HomologySlice h = homology_at(complex_, n);
    TorsionLadder::Degree d;
    d.free = h.free_representatives;
    for (std::size_t i = 0; i < h.torsion_count(); ++i)
      d.pairs.push_back({h.torsion_representatives[i], h.torsion_partners[i], h.torsion_exponents[i]});
    out.degrees.emplace(n, std::move(d));
  }
  return out;
}

namespace {

std::vector<ClassHandle> page_basis(const TorsionLadder& ladder, int n, int r) {
  std::vector<ClassHandle> out;
  if (n < 0) return out;
  const auto& here = ladder.degrees.at(n);
  for (const auto& z : here.free) out.push_back({z, n, r, HandleKind::Free, 0});
  for (const auto& t : here.pairs)
    if (t.exponent >= r) out.push_back({t.bottom, n, r, HandleKind::TorsionBottom, t.exponent});
  if (n > 0)
    for (const auto& t : ladder.degrees.at(n - 1).pairs)
      if (t.exponent >= r) out.push_back({t.top, n, r, HandleKind::TorsionTop, t.exponent});
  return out;
}

}  // namespace

BocksteinResult Bockstein::pages(int lo, int hi, int r_max) const {
  if (lo < 0 || hi < lo) fail(ErrorCode::InvalidArgument, "empty degree range for Bockstein pages");
  BocksteinResult out;
  out.ladder = ladder(lo - 2, hi);
  out.r_max = r_max > 0 ? r_max : out.ladder.max_exponent() + 1;
  const Ring F = complex_.ring().residue_field();
  for (int r = 1; r <= out.r_max; ++r) {
    BocksteinPage page;
    page.r = r;
    for (int n = lo; n <= hi; ++n) {
      BocksteinPage::Degree d;
      d.basis = page_basis(out.ladder, n, r);
      const auto below = page_basis(out.ladder, n - 1, r);
      d.beta = Matrix(F, below.size(), d.basis.size());
      // β^r sends the top of a Z/p^r summand to its bottom; everything else to 0.
      const auto& prev_pairs = n > 0 ? out.ladder.degrees.at(n - 1).pairs : std::vector<TorsionPair>{};
      std::size_t col = 0;
      for (; col < d.basis.size() && d.basis[col].kind != HandleKind::TorsionTop; ++col) {
      }
      const std::size_t free_below = n > 0 ? out.ladder.degrees.at(n - 1).free.size() : 0;
      std::size_t bottom_row = free_below;
      for (const auto& t : prev_pairs) {
        if (t.exponent < r) continue;
        if (t.exponent == r) d.beta.at(bottom_row, col) = Scalar::one(F);
        ++bottom_row;
        ++col;
      }
      page.degrees.emplace(n, std::move(d));
    }
    out.pages.push_back(std::move(page));
  }
  return out;
}

bool Bockstein::in_cycles(const Vector& a, int n, int k) const {
  if (n == 0) return true;
  return solve_with("zk", n, k, scale(Scalar(complex_.ring(), -1L), complex_.apply_boundary(n, a))).has_value();
}

bool Bockstein::in_boundaries(const Vector& a, int n, int k) const {
  return solve_with("bk", n, k, scale(Scalar::prime_power(complex_.ring(), k - 1), a)).has_value();
}

SurvivalReport Bockstein::survives_to(const Vector& a, int n, int r) const {
  if (r < 1) fail(ErrorCode::InvalidArgument, "page index must be at least 1");
  if (a.size() != complex_.dimension(n))
    fail(ErrorCode::InvalidArgument, "chain has the wrong length for degree " + std::to_string(n));
  if (n > 0 && valuation(complex_.apply_boundary(n, a)) < 1)
    fail(ErrorCode::NotAModPCycle, "boundary of the chain is nonzero mod p");
  SurvivalReport out;
  if (valuation(a) >= 1) {
    out.status = Survival::Zero;
    out.page = 1;
    out.reason = "chain vanishes mod p";
    return out;
  }
  for (int k = 1; k <= r; ++k) {
    if (!in_cycles(a, n, k)) {
      out.status = Survival::Dies;
      out.page = k;
      out.reason = "nonzero differential on page " + std::to_string(k - 1);
      return out;
    }
    if (in_boundaries(a, n, k)) {
      out.status = Survival::Zero;
      out.page = k;
      out.reason = "class is a boundary on page " + std::to_string(k);
      return out;
    }
  }
  out.page = r;
  out.handle = ClassHandle{a, n, r, HandleKind::Generic, 0};
  return out;
}

WitnessPair Bockstein::bss_raw(const Vector& a, const Vector& b, int n, int r) const {
  const Ring& R = complex_.ring();
  const Scalar p = Scalar::prime_power(R, 1);
  const std::size_t dn = complex_.dimension(n);
  const std::size_t dm = complex_.dimension(n - 1);
  if (r == 1) {
    Vector x = complex_.apply_boundary(n, a);
    for (auto& s : x) {
      if (!p.divides(s)) fail(ErrorCode::HypothesisFails, "chain is not a cycle mod p");
      s = s.divided_by(p);
    }
    auto sol = solve_with("bss1", n, 1, subtract(b, x));
    if (!sol) fail(ErrorCode::HypothesisFails, "first differential does not hit the target class");
    return {slice(*sol, 0, dn), slice(*sol, dn, dm)};
  }
  const WitnessPair fg = bss_raw(a, zero_vector(R, dm), n, r - 1);
  const Vector gb = subtract(fg.second, b);
  auto sol = solve_with("bk", n - 1, r, scale(Scalar::prime_power(R, r - 1), gb));
  if (!sol) fail(ErrorCode::HypothesisFails, "differential on page " + std::to_string(r) + " does not hit the target");
  const Vector y = slice(*sol, 0, dn);
  const WitnessPair ze = bss_raw(y, gb, n, r - 1);
  return {subtract(subtract(fg.first, y), scale(p, ze.first)), scale(Scalar(R, -1L), ze.second)};
}

WitnessPair Bockstein::bss_witness(const Vector& a, const Vector& b, int n, int r) const {
  if (r < 1) fail(ErrorCode::InvalidArgument, "page index must be at least 1");
  if (n < 1) fail(ErrorCode::InvalidArgument, "Bockstein witness needs degree at least 1");
  if (a.size() != complex_.dimension(n) || b.size() != complex_.dimension(n - 1))
    fail(ErrorCode::InvalidArgument, "chain lengths do not match the degrees");
  WitnessPair w = bss_raw(a, b, n, r);
  const Ring& R = complex_.ring();
  const Vector lhs = complex_.apply_boundary(n, add(a, scale(Scalar::prime_power(R, 1), w.first)));
  const Vector rhs = scale(Scalar::prime_power(R, r), add(b, scale(Scalar::prime_power(R, 1), w.second)));
  if (lhs != rhs) fail(ErrorCode::TheoryViolation, "Bockstein witness identity fails");
  return w;
}

WitnessPair Bockstein::class_equal_witness(const Vector& b1, const Vector& b2, int n, int r) const {
  if (r < 1) fail(ErrorCode::InvalidArgument, "page index must be at least 1");
  if (b1.size() != complex_.dimension(n) || b2.size() != complex_.dimension(n))
    fail(ErrorCode::InvalidArgument, "chain lengths do not match the degree");
  const Ring& R = complex_.ring();
  const Scalar p = Scalar::prime_power(R, 1);
  const std::size_t dn = complex_.dimension(n);
  const std::size_t up = complex_.dimension(n + 1);
  const Vector diff = subtract(b1, b2);
  WitnessPair out;
  if (r == 1) {
    auto sol = solve_with("eq1", n, 1, diff);
    if (!sol) fail(ErrorCode::HypothesisFails, "classes differ on page 1");
    out = {slice(*sol, 0, dn), slice(*sol, dn, up)};
  } else {
    auto sol = solve_with("bk", n, r, scale(Scalar::prime_power(R, r - 1), diff));
    if (!sol) fail(ErrorCode::HypothesisFails, "classes differ on page " + std::to_string(r));
    const Vector a = slice(*sol, 0, up);
    const WitnessPair ce = bss_raw(a, diff, n + 1, r - 1);
    out = {scale(Scalar(R, -1L), ce.second), add(a, scale(p, ce.first))};
  }
  const Scalar pr1 = Scalar::prime_power(R, r - 1);
  const Vector lhs = scale(pr1, b1);
  const Vector rhs = add(add(scale(pr1, b2), scale(Scalar::prime_power(R, r), out.first)),
                         complex_.apply_boundary(n + 1, out.second));
  if (lhs != rhs) fail(ErrorCode::TheoryViolation, "class equality witness identity fails");
  return out;
}

}  // namespace hah
