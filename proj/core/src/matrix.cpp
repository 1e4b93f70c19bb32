#include "hah/matrix.hpp"

#include <algorithm>
#include <sstream>

#include "hah/errors.hpp"

namespace hah {

Vector zero_vector(Ring ring, std::size_t n) { return Vector(n, Scalar::zero(ring)); }

bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

Vector add(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) fail(ErrorCode::InvalidArgument, "vector length mismatch");
  Vector r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Vector subtract(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) fail(ErrorCode::InvalidArgument, "vector length mismatch");
  Vector r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Vector scale(const Scalar& c, const Vector& v) {
  Vector r = v;
  for (auto& x : r) x *= c;
  return r;
}

Vector reduce(const Vector& v) {
  Vector r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(x.reduce());
  return r;
}

int valuation(const Vector& v) {
  int best = kInfiniteValuation;
  for (const auto& x : v) best = std::min(best, x.valuation());
  return best;
}

Matrix::Matrix(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(ring)) {}

Matrix Matrix::identity(Ring ring, std::size_t n) {
  Matrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(ring);
  return m;
}

Matrix Matrix::from_columns(Ring ring, std::size_t rows, const std::vector<Vector>& columns) {
  Matrix m(ring, rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v;
  v.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v.push_back(at(i, j));
  return v;
}

Vector Matrix::row(std::size_t i) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

void Matrix::set_column(std::size_t j, const Vector& v) {
  if (v.size() != rows_) fail(ErrorCode::InvalidArgument, "column length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) at(i, j) = v[i];
}

Matrix Matrix::transpose() const {
  Matrix t(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

Matrix Matrix::reduce() const {
  Matrix r(ring_.residue_field(), rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k].reduce();
  return r;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
}

Matrix Matrix::column_range(std::size_t first, std::size_t count) const {
  Matrix r(ring_, rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) r.at(i, j) = at(i, first + j);
  return r;
}

Matrix Matrix::hstack(const Matrix& other) const {
  if (other.rows_ != rows_) fail(ErrorCode::InvalidArgument, "hstack row mismatch");
  Matrix r(ring_, rows_, cols_ + other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (std::size_t j = 0; j < other.cols_; ++j) r.at(i, cols_ + j) = other.at(i, j);
  }
  return r;
}

Matrix Matrix::vstack(const Matrix& other) const {
  if (other.cols_ != cols_) fail(ErrorCode::InvalidArgument, "vstack column mismatch");
  Matrix r(ring_, rows_ + other.rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
  for (std::size_t i = 0; i < other.rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(rows_ + i, j) = other.at(i, j);
  return r;
}

Vector Matrix::apply(const Vector& v) const {
  if (v.size() != cols_) fail(ErrorCode::InvalidArgument, "apply: dimension mismatch");
  Vector r = zero_vector(ring_, rows_);
  for (std::size_t j = 0; j < cols_; ++j) {
    if (v[j].is_zero()) continue;
    for (std::size_t i = 0; i < rows_; ++i)
      if (!at(i, j).is_zero()) r[i] += at(i, j) * v[j];
  }
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) fail(ErrorCode::InvalidArgument, "matrix product dimension mismatch");
  Matrix r(a.ring_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& x = a.at(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!b.at(k, j).is_zero()) r.at(i, j) += x * b.at(k, j);
    }
  return r;
}

void Matrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
}

void Matrix::swap_cols(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
}

void Matrix::add_row_multiple(std::size_t i, std::size_t j, const Scalar& c) {
  if (c.is_zero()) return;
  for (std::size_t k = 0; k < cols_; ++k)
    if (!at(j, k).is_zero()) at(i, k) += c * at(j, k);
}

void Matrix::add_col_multiple(std::size_t i, std::size_t j, const Scalar& c) {
  if (c.is_zero()) return;
  for (std::size_t k = 0; k < rows_; ++k)
    if (!at(k, j).is_zero()) at(k, i) += c * at(k, j);
}

void Matrix::scale_row(std::size_t i, const Scalar& c) {
  for (std::size_t k = 0; k < cols_; ++k) at(i, k) *= c;
}

void Matrix::scale_col(std::size_t j, const Scalar& c) {
  for (std::size_t k = 0; k < rows_; ++k) at(k, j) *= c;
}

std::string Matrix::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < rows_; ++i) {
    out << "[";
    for (std::size_t j = 0; j < cols_; ++j) out << (j ? " " : "") << at(i, j).to_string();
    out << "]\n";
  }
  return out.str();
}

SmithForm local_smith_form(const Matrix& m) {
  const Ring ring = m.ring();
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  SmithForm s{Matrix::identity(ring, rows), Matrix::identity(ring, rows), m, Matrix::identity(ring, cols),
              Matrix::identity(ring, cols), 0, {}};
  Matrix& d = s.D;

  for (std::size_t k = 0; k < std::min(rows, cols); ++k) {
    // Pivot: minimal valuation, then smallest column, then smallest row.
    int best = kInfiniteValuation;
    std::size_t pr = 0, pc = 0;
    for (std::size_t j = k; j < cols && best > 0; ++j)
      for (std::size_t i = k; i < rows; ++i) {
        int v = d.at(i, j).valuation();
        if (v < best) {
          best = v;
          pr = i;
          pc = j;
          if (v == 0) break;
        }
      }
    if (best == kInfiniteValuation) break;

    d.swap_rows(k, pr);
    s.U.swap_rows(k, pr);
    s.U_inv.swap_cols(k, pr);
    d.swap_cols(k, pc);
    s.V.swap_cols(k, pc);
    s.V_inv.swap_rows(k, pc);

    Scalar unit = d.at(k, k).unit_part();
    if (!unit.is_one()) {
      Scalar inv = unit.inverse();
      d.scale_row(k, inv);
      s.U.scale_row(k, inv);
      s.U_inv.scale_col(k, unit);
    }
    const Scalar pivot = d.at(k, k);

    for (std::size_t i = k + 1; i < rows; ++i) {
      if (d.at(i, k).is_zero()) continue;
      Scalar f = d.at(i, k).divided_by(pivot);
      d.add_row_multiple(i, k, -f);
      s.U.add_row_multiple(i, k, -f);
      s.U_inv.add_col_multiple(k, i, f);
    }
    for (std::size_t j = k + 1; j < cols; ++j) {
      if (d.at(k, j).is_zero()) continue;
      Scalar f = d.at(k, j).divided_by(pivot);
      d.at(k, j) = Scalar::zero(ring);
      s.V.add_col_multiple(j, k, -f);
      s.V_inv.add_row_multiple(k, j, f);
    }
    s.exponents.push_back(best);
    s.rank = k + 1;
  }
  return s;
}

LinearSolver::LinearSolver(const Matrix& m) : smith_(local_smith_form(m)), rows_(m.rows()), cols_(m.cols()) {}

std::optional<Vector> LinearSolver::solve(const Vector& v) const {
  if (v.size() != rows_) fail(ErrorCode::InvalidArgument, "solve: dimension mismatch");
  const Ring ring = smith_.D.ring();
  Vector w = smith_.U.apply(v);
  Vector t = zero_vector(ring, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i < smith_.rank) {
      const Scalar& d = smith_.D.at(i, i);
      if (!d.divides(w[i])) return std::nullopt;
      t[i] = w[i].divided_by(d);
    } else if (!w[i].is_zero()) {
      return std::nullopt;
    }
  }
  return smith_.V.apply(t);
}

std::optional<Vector> solve(const Matrix& m, const Vector& v) { return LinearSolver(m).solve(v); }

std::size_t rank(const Matrix& m) { return local_smith_form(m).rank; }

namespace {

Matrix echelonize_saturated(Matrix b) {
  const Ring ring = b.ring();
  const std::size_t n = b.rows();
  const std::size_t k = b.cols();
  std::vector<bool> is_pivot(k, false);
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (coordinate, column)
  for (std::size_t i = 0; i < n && pivots.size() < k; ++i) {
    std::size_t chosen = k;
    for (std::size_t j = 0; j < k; ++j)
      if (!is_pivot[j] && b.at(i, j).is_unit()) {
        chosen = j;
        break;
      }
    if (chosen == k) continue;
    b.scale_col(chosen, b.at(i, chosen).inverse());
    for (std::size_t j = 0; j < k; ++j) {
      if (j == chosen || b.at(i, j).is_zero()) continue;
      b.add_col_multiple(j, chosen, -b.at(i, j));
    }
    is_pivot[chosen] = true;
    pivots.emplace_back(i, chosen);
  }
  if (pivots.size() != k) fail(ErrorCode::InvalidArgument, "echelonize: module is not saturated");
  Matrix out(ring, n, k);
  for (std::size_t c = 0; c < pivots.size(); ++c) out.set_column(c, b.column(pivots[c].second));
  return out;
}

}  // namespace

Matrix canonical_basis(const Matrix& m) {
  SmithForm s = local_smith_form(m);
  return echelonize_saturated(s.U_inv.column_range(0, s.rank));
}

Matrix kernel_basis(const Matrix& m) {
  SmithForm s = local_smith_form(m);
  return echelonize_saturated(s.V.column_range(s.rank, m.cols() - s.rank));
}

}  // namespace hah
