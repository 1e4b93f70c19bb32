#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hah/scalar.hpp"

namespace hah {

using Vector = std::vector<Scalar>;

Vector zero_vector(Ring ring, std::size_t n);
bool is_zero(const Vector& v);
Vector add(const Vector& a, const Vector& b);
Vector subtract(const Vector& a, const Vector& b);
Vector scale(const Scalar& c, const Vector& v);
Vector reduce(const Vector& v);
/// Minimal valuation over the entries (kInfiniteValuation for the zero vector).
int valuation(const Vector& v);

/// Dense row-major matrix over a single ring.
class Matrix {
 public:
  Matrix() : Matrix(Ring::rational(), 0, 0) {}
  Matrix(Ring ring, std::size_t rows, std::size_t cols);
  static Matrix identity(Ring ring, std::size_t n);
  static Matrix from_columns(Ring ring, std::size_t rows, const std::vector<Vector>& columns);

  const Ring& ring() const noexcept { return ring_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Scalar& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector column(std::size_t j) const;
  Vector row(std::size_t i) const;
  void set_column(std::size_t j, const Vector& v);

  Matrix transpose() const;
  Matrix reduce() const;
  bool is_zero() const;
  /// Columns [first, first+count).
  Matrix column_range(std::size_t first, std::size_t count) const;
  /// [this | other].
  Matrix hstack(const Matrix& other) const;
  /// [this ; other].
  Matrix vstack(const Matrix& other) const;

  Vector apply(const Vector& v) const;
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);
  /// row_i += c * row_j
  void add_row_multiple(std::size_t i, std::size_t j, const Scalar& c);
  /// col_i += c * col_j
  void add_col_multiple(std::size_t i, std::size_t j, const Scalar& c);
  void scale_row(std::size_t i, const Scalar& c);
  void scale_col(std::size_t j, const Scalar& c);

  std::string to_string() const;

 private:
  Ring ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> data_;
};

/// U * M * V = D with U, V invertible over the ring and D diagonal with
/// entries p^{e_1} | p^{e_2} | ... (units normalised to 1).
struct SmithForm {
  Matrix U;
  Matrix U_inv;
  Matrix D;
  Matrix V;
  Matrix V_inv;
  std::size_t rank = 0;
  /// Valuations of the nonzero diagonal entries, nondecreasing.
  std::vector<int> exponents;
};

SmithForm local_smith_form(const Matrix& m);

/// Factor once, solve many right-hand sides.
class LinearSolver {
 public:
  explicit LinearSolver(const Matrix& m);
  /// u with M u = v, or nullopt when v is not in the image. Free variables are
  /// zero in the V-coordinates of the Smith form, so the result is a fixed
  /// function of (M, v).
  std::optional<Vector> solve(const Vector& v) const;
  const SmithForm& smith() const noexcept { return smith_; }
  std::size_t cols() const noexcept { return cols_; }

 private:
  SmithForm smith_;
  std::size_t rows_;
  std::size_t cols_;
};

std::optional<Vector> solve(const Matrix& m, const Vector& v);

std::size_t rank(const Matrix& m);

/// Canonical basis (as columns) of the saturated submodule spanned by the
/// columns of `m`: reduced column echelon form with unit pivots, pivots taken
/// at the earliest possible coordinate.
Matrix canonical_basis(const Matrix& m);

/// Canonical basis of ker(m), saturated.
Matrix kernel_basis(const Matrix& m);

}  // namespace hah
