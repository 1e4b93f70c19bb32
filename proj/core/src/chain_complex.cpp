#include "hah/chain_complex.hpp"

#include <map>
#include <mutex>

#include "hah/errors.hpp"

namespace hah {

struct ChainComplex::Cache {
  std::mutex mutex;
  std::map<int, std::size_t> dims;
  std::map<int, std::unique_ptr<Matrix>> boundaries;
};

ChainComplex::ChainComplex(Ring ring, int cap, DimensionFn dimension, BoundaryFn boundary, std::string name)
    : ring_(ring),
      cap_(cap),
      dimension_(std::move(dimension)),
      boundary_fn_(std::move(boundary)),
      name_(std::move(name)),
      cache_(std::make_shared<Cache>()) {}

ChainComplex ChainComplex::from_matrices(Ring ring, std::vector<std::size_t> dims, std::vector<Matrix> boundaries,
                                         std::string name) {
  const int cap = static_cast<int>(dims.size()) - 1;
  auto shared_dims = std::make_shared<std::vector<std::size_t>>(std::move(dims));
  auto shared_bd = std::make_shared<std::vector<Matrix>>(std::move(boundaries));
  return ChainComplex(
      ring, cap, [shared_dims](int n) { return (*shared_dims)[static_cast<std::size_t>(n)]; },
      [shared_bd](int n) { return (*shared_bd)[static_cast<std::size_t>(n)]; }, std::move(name));
}

std::size_t ChainComplex::dimension(int n) const {
  if (n < 0) return 0;
  if (n > cap_) fail(ErrorCode::DegreeOutOfCap, name_ + ": degree " + std::to_string(n) + " exceeds cap " + std::to_string(cap_));
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->dims.find(n);
  if (it != cache_->dims.end()) return it->second;
  std::size_t d = dimension_(n);
  cache_->dims.emplace(n, d);
  return d;
}

const Matrix& ChainComplex::boundary(int n) const {
  if (n > cap_) fail(ErrorCode::DegreeOutOfCap, name_ + ": degree " + std::to_string(n) + " exceeds cap " + std::to_string(cap_));
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->boundaries.find(n);
    if (it != cache_->boundaries.end()) return *it->second;
  }
  const std::size_t rows = dimension(n - 1);
  const std::size_t cols = dimension(n);
  auto m = std::make_unique<Matrix>(n <= 0 ? Matrix(ring_, rows, cols) : boundary_fn_(n));
  if (m->rows() != rows || m->cols() != cols)
    fail(ErrorCode::InvalidComplex, name_ + ": boundary matrix in degree " + std::to_string(n) + " has wrong shape");
  if (!(m->ring() == ring_)) fail(ErrorCode::MixedPresentation, name_ + ": boundary over the wrong ring");
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto [it, inserted] = cache_->boundaries.emplace(n, std::move(m));
  return *it->second;
}

bool ChainComplex::squares_to_zero_at(int n) const {
  if (n < 1) return true;
  return (boundary(n) * boundary(n + 1)).is_zero();
}

ChainComplex ChainComplex::reduced_mod_p() const {
  if (ring_.kind() != RingKind::Localized) return *this;
  ChainComplex self = *this;
  return ChainComplex(
      ring_.residue_field(), cap_, [self](int n) { return self.dimension(n); },
      [self](int n) { return self.boundary(n).reduce(); }, name_ + " mod p");
}

bool HomologyClass::is_zero() const {
  for (const auto& c : free_coordinates)
    if (!c.is_zero()) return false;
  for (std::size_t i = 0; i < torsion_coordinates.size(); ++i)
    if (torsion_coordinates[i].valuation() < torsion_exponents[i]) return false;
  return true;
}

std::optional<int> HomologyClass::order_exponent() const {
  for (const auto& c : free_coordinates)
    if (!c.is_zero()) return std::nullopt;
  int order = 0;
  for (std::size_t i = 0; i < torsion_coordinates.size(); ++i) {
    int v = torsion_coordinates[i].valuation();
    if (v < torsion_exponents[i]) order = std::max(order, torsion_exponents[i] - v);
  }
  return order;
}

HomologyClass HomologySlice::class_of(const Vector& cycle) const {
  if (!is_zero(cycle_test->apply(cycle)))
    fail(ErrorCode::NotACycle, "class_of: chain in degree " + std::to_string(degree) + " is not a cycle");
  auto coords = coordinate_solver->solve(cycle);
  if (!coords) fail(ErrorCode::TheoryViolation, "class_of: cycle not expressible in the homology basis");
  HomologyClass cls;
  cls.torsion_exponents = torsion_exponents;
  for (std::size_t i = 0; i < free_rank; ++i) cls.free_coordinates.push_back((*coords)[i]);
  for (std::size_t i = 0; i < torsion_exponents.size(); ++i) cls.torsion_coordinates.push_back((*coords)[free_rank + i]);
  return cls;
}

namespace {

// First basis completion of B inside Z, scanning Z's canonical basis in order.
std::vector<Vector> complete_basis(const Matrix& cycles, const Matrix& boundaries) {
  std::vector<Vector> chosen;
  Matrix current = boundaries;
  std::size_t current_rank = rank(current);
  for (std::size_t j = 0; j < cycles.cols(); ++j) {
    Matrix trial = current.hstack(cycles.column_range(j, 1));
    std::size_t r = rank(trial);
    if (r > current_rank) {
      chosen.push_back(cycles.column(j));
      current = std::move(trial);
      current_rank = r;
    }
  }
  return chosen;
}

}  // namespace

HomologySlice homology_at(const ChainComplex& complex, int n) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "negative homology degree");
  if (n + 1 > complex.cap())
    fail(ErrorCode::DegreeOutOfCap, complex.name() + ": H_" + std::to_string(n) + " needs degree " +
                                        std::to_string(n + 1) + " above cap " + std::to_string(complex.cap()));
  const Ring ring = complex.ring();
  const Matrix& dn = complex.boundary(n);
  const Matrix& dn1 = complex.boundary(n + 1);
  if (!(dn * dn1).is_zero())
    fail(ErrorCode::InvalidComplex, complex.name() + ": d^2 != 0 at degree " + std::to_string(n + 1));

  const std::size_t dim = complex.dimension(n);
  HomologySlice slice;
  slice.degree = n;

  const SmithForm sd = local_smith_form(dn);
  const std::size_t z = dim - sd.rank;
  const Matrix cycles = sd.V.column_range(sd.rank, z);
  // Coordinates of im d_{n+1} with respect to the cycle basis.
  Matrix coords(ring, z, dn1.cols());
  for (std::size_t i = 0; i < z; ++i)
    for (std::size_t j = 0; j < dn1.cols(); ++j) {
      Scalar acc = Scalar::zero(ring);
      for (std::size_t k = 0; k < dim; ++k)
        if (!sd.V_inv.at(sd.rank + i, k).is_zero() && !dn1.at(k, j).is_zero())
          acc += sd.V_inv.at(sd.rank + i, k) * dn1.at(k, j);
      coords.at(i, j) = acc;
    }
  const SmithForm sb = local_smith_form(coords);
  const Matrix generators = cycles * sb.U_inv;

  if (ring.is_field()) {
    slice.free_rank = z - sb.rank;
    if (slice.free_rank > 0) {
      Matrix zbasis = kernel_basis(dn);
      Matrix bbasis = dn1.cols() == 0 ? Matrix(ring, dim, 0) : dn1;
      slice.free_representatives = complete_basis(zbasis, bbasis);
    }
  } else {
    for (std::size_t i = 0; i < z; ++i) {
      if (i < sb.rank) {
        int e = sb.exponents[i];
        if (e == 0) continue;
        slice.torsion_exponents.push_back(e);
        slice.torsion_representatives.push_back(generators.column(i));
        slice.torsion_partners.push_back(sb.V.column(i));
      } else {
        slice.free_representatives.push_back(generators.column(i));
      }
    }
    slice.free_rank = slice.free_representatives.size();
  }

  std::vector<Vector> gens = slice.free_representatives;
  gens.insert(gens.end(), slice.torsion_representatives.begin(), slice.torsion_representatives.end());
  Matrix system = Matrix::from_columns(ring, dim, gens).hstack(dn1);
  slice.coordinate_solver = std::make_shared<LinearSolver>(system);
  slice.cycle_test = std::make_shared<Matrix>(dn);
  return slice;
}

}  // namespace hah
