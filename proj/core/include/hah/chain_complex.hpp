#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hah/matrix.hpp"

namespace hah {

/// Nonnegatively graded complex of finite free modules. Degrees are pulled on
/// demand and memoised; asking for anything above the cap is an error. The
/// differential is checked to square to zero the first time a degree is used.
class ChainComplex {
 public:
  using DimensionFn = std::function<std::size_t(int)>;
  /// Matrix of d_n : C_n -> C_{n-1}, shape dim(n-1) x dim(n).
  using BoundaryFn = std::function<Matrix(int)>;

  ChainComplex(Ring ring, int cap, DimensionFn dimension, BoundaryFn boundary, std::string name = "complex");

  /// Complex given explicitly by dims[0..] and boundaries[n] = d_n (boundaries[0] ignored).
  static ChainComplex from_matrices(Ring ring, std::vector<std::size_t> dims, std::vector<Matrix> boundaries,
                                    std::string name = "complex");

  const Ring& ring() const noexcept { return ring_; }
  int cap() const noexcept { return cap_; }
  const std::string& name() const noexcept { return name_; }

  std::size_t dimension(int n) const;
  const Matrix& boundary(int n) const;
  Vector apply_boundary(int n, const Vector& chain) const { return boundary(n).apply(chain); }

  /// d_{n} d_{n+1} == 0, exact.
  bool squares_to_zero_at(int n) const;

  /// C (x) F_p: entries reduced to the residue field.
  ChainComplex reduced_mod_p() const;

 private:
  struct Cache;
  Ring ring_;
  int cap_;
  DimensionFn dimension_;
  BoundaryFn boundary_fn_;
  std::string name_;
  std::shared_ptr<Cache> cache_;
};

/// A class in H_n: free coordinates (exact) and torsion coordinates (each
/// meaningful modulo p^{e_i}).
struct HomologyClass {
  std::vector<Scalar> free_coordinates;
  std::vector<Scalar> torsion_coordinates;
  std::vector<int> torsion_exponents;

  bool is_zero() const;
  /// Order as a power of p: nullopt for infinite order, 0 for the zero class.
  std::optional<int> order_exponent() const;
};

/// H_n(C) with a chosen decomposition Z/B = R^free (+) (+)_i R/p^{e_i}.
struct HomologySlice {
  int degree = 0;
  std::size_t free_rank = 0;
  /// Exponents e_i >= 1 of the torsion summands, nondecreasing.
  std::vector<int> torsion_exponents;
  /// Cycles whose classes generate the free part.
  std::vector<Vector> free_representatives;
  /// Cycles t_i generating the torsion summands.
  std::vector<Vector> torsion_representatives;
  /// Chains u_i in C_{n+1} with d u_i = p^{e_i} t_i.
  std::vector<Vector> torsion_partners;

  std::size_t torsion_count() const { return torsion_exponents.size(); }
  int max_torsion_exponent() const { return torsion_exponents.empty() ? 0 : torsion_exponents.back(); }

  /// Coordinates of a cycle; throws NotACycle when d z != 0.
  HomologyClass class_of(const Vector& cycle) const;

  // Solver for [generators | d_{n+1}] used by class_of.
  std::shared_ptr<const LinearSolver> coordinate_solver;
  std::shared_ptr<const Matrix> cycle_test;
};

/// Homology in degree n; needs d_n and d_{n+1}, so n + 1 must not exceed the cap.
HomologySlice homology_at(const ChainComplex& complex, int n);

}  // namespace hah
