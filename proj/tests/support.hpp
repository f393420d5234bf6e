#pragma once

// Random generators for property tests. All draws come from a caller-owned
// engine so every test is reproducible.

#include <cmath>
#include <random>

#include "sweq/fockspace.hpp"

namespace sweq::testing {

inline Complex gaussian_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

/// Unit vector of length dim with random entries on the first `support`
/// components.
inline ComplexVector random_unit_vector(std::mt19937_64& rng, int dim, int support) {
  ComplexVector v = ComplexVector::Zero(dim);
  for (int k = 0; k < support; ++k) v(k) = gaussian_complex(rng);
  v.normalize();
  return v;
}

/// Unnormalized random matrix supported on the top-left support×support block.
inline ComplexMatrix random_operator(std::mt19937_64& rng, int dim, int support) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < support; ++i)
    for (int j = 0; j < support; ++j) m(i, j) = gaussian_complex(rng);
  return m;
}

/// Mixed field density matrix of rank `rank` on occupations < support.
inline ComplexMatrix random_density(std::mt19937_64& rng, int dim, int support, int rank = 2) {
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int r = 0; r < rank; ++r) {
    const ComplexVector v = random_unit_vector(rng, dim, support);
    rho += u(rng) * v * v.adjoint();
  }
  return rho / rho.trace();
}

/// Random composite pure state with Fock support below `fock_support`.
inline CompositeState random_composite_state(std::mt19937_64& rng, const CompositeSpace& space, int fock_support) {
  ComplexVector amps = ComplexVector::Zero(space.total_dim());
  for (int i = 0; i < space.atom_dim(); ++i)
    for (int n = 0; n < fock_support; ++n) amps(space.index(i, n)) = gaussian_complex(rng);
  amps.normalize();
  return CompositeState(space, amps);
}

/// Max-abs entry restricted to occupation indices ≤ limit on both sides
/// of a field operator.
inline double max_abs_upto(const ComplexMatrix& m, int limit) {
  return m.topLeftCorner(limit + 1, limit + 1).cwiseAbs().maxCoeff();
}

}  // namespace sweq::testing
