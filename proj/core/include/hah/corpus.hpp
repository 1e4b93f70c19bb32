#pragma once

#include <random>

#include "hah/hopf.hpp"

namespace hah::corpus {

/// Random element of the (reduced) tensor power in degree n, coefficients in [-3, 3].
Element random_element(const AlgebraPtr& algebra, int arity, bool reduced, int n, std::mt19937_64& rng,
                       double density = 0.6);

/// Basis (as columns in A_n coordinates) of primitive cycles of degree n.
Matrix primitive_cycles(const HahPresentation& h, int n);

struct PresentationShape {
  Flavor flavor = Flavor::FreeAssociative;
  int q = 2;
  /// Generator degrees are drawn from [q, max_degree].
  int max_degree = 5;
  int generators = 3;
  int cap = 12;
  /// Over Z_(p): chance that a boundary value is multiplied by p.
  double torsion_chance = 0.5;
};

/// Primitively generated presentation whose boundaries are primitive cycles,
/// so the differential is a strict coderivation. Commutative presentations are
/// built over F_p with even generators truncated at p.
HahPresentation random_primitive_presentation(Ring ring, const PresentationShape& shape, std::mt19937_64& rng);

}  // namespace hah::corpus
