#pragma once

// Phase-space representations of the cavity mode: characteristic functions,
// Wigner (sharp) and Husimi (coarse-grained) densities, Gaussian
// coarse-graining, semiclassical observables and the operator-side moment
// oracle built from symmetric-product superoperators.
//
// Conventions: a = x + iy; the measure da* da is dx dy; grid nodes are
// stored row-major with node = ix * M + iy.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sweq/fockspace.hpp"

namespace sweq {

class PhaseGrid {
 public:
  static constexpr double kDefaultExtent = 5.0;
  static constexpr int kDefaultPoints = 128;

  /// Covers Re a, Im a ∈ [−extent, extent) with points_per_axis nodes each.
  /// points_per_axis must be a power of two >= 32.
  PhaseGrid(double extent, int points_per_axis);
  static PhaseGrid default_grid() { return PhaseGrid(kDefaultExtent, kDefaultPoints); }

  double extent() const { return extent_; }
  int points() const { return points_; }
  double spacing() const { return 2.0 * extent_ / points_; }
  double weight() const { return spacing() * spacing(); }
  int node_count() const { return points_ * points_; }

  double coordinate(int k) const { return -extent_ + k * spacing(); }
  int node(int ix, int iy) const { return ix * points_ + iy; }
  Complex point(int node) const { return {coordinate(node / points_), coordinate(node % points_)}; }
  bool on_boundary(int node) const;

  /// Nearest node to a (clamped to the grid).
  int nearest_node(Complex a) const;

  /// Grid quadrature tolerance: 1e-4 at the default spacing, scaling as h².
  double tol_grid() const;

  friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;

 private:
  double extent_;
  int points_;
};

enum class PhaseKind { wigner, husimi, generic };

const char* to_string(PhaseKind kind);
PhaseKind phase_kind_from_string(const std::string& name);

/// Real scalar field on a PhaseGrid.
struct PhaseFunction {
  PhaseGrid grid;
  std::vector<double> values;
  PhaseKind kind = PhaseKind::generic;

  PhaseFunction(PhaseGrid g, std::vector<double> v, PhaseKind k);

  double integral() const;
  double min() const;
  double max() const;
};

/// d×d complex matrix per grid node, stored plane by plane:
/// data[(i * d + j) * node_count + node].
struct OperatorPhaseField {
  PhaseGrid grid;
  int dim;
  std::vector<Complex> data;
  std::vector<int> flagged_nodes;  ///< nodes where a truncation check failed

  OperatorPhaseField(PhaseGrid g, int d);

  Complex& at(int i, int j, int node) { return data[plane_offset(i, j) + node]; }
  Complex at(int i, int j, int node) const { return data[plane_offset(i, j) + node]; }
  std::span<Complex> plane(int i, int j) {
    return {data.data() + plane_offset(i, j), static_cast<size_t>(grid.node_count())};
  }
  std::span<const Complex> plane(int i, int j) const {
    return {data.data() + plane_offset(i, j), static_cast<size_t>(grid.node_count())};
  }

  ComplexMatrix node_matrix(int node) const;
  /// Quadrature ∫ρ(a,a*) da* da, a d×d matrix.
  ComplexMatrix integral() const;
  /// Node-wise atomic trace.
  PhaseFunction trace_atom(PhaseKind kind) const;

 private:
  size_t plane_offset(int i, int j) const {
    return static_cast<size_t>(i * dim + j) * static_cast<size_t>(grid.node_count());
  }
};

struct CharacteristicSample {
  Complex lambda;
  Complex value;
};

/// tr(exp(λâ† − λ*â) ρ) with the exponential taken on the truncated space.
CharacteristicSample characteristic_function(const ComplexMatrix& rho_field, Complex lambda);

/// tr(exp(−λ*â_c + λâ_c†) ρ) through the product form of superop_weyl_apply.
CharacteristicSample superop_characteristic_function(const ComplexMatrix& rho, Complex lambda,
                                                     const FockBasis& basis);

/// Matrix elements ⟨m|D(α)|n⟩, m, n < dim, of the untruncated displacement
/// operator D(α) = exp(αâ† − α*â), by recurrence from the vacuum column.
ComplexMatrix displacement_matrix(Complex alpha, int dim);

/// Wigner function of a field density matrix by Fourier inversion of the
/// characteristic function sampled on the conjugate λ grid.
/// Throws SolverError if the quadrature normalization leaves [0.99, 1.01].
PhaseFunction wigner(const ComplexMatrix& rho_field, const PhaseGrid& grid);

/// Operator-valued Wigner transform over the field factor of a composite
/// density operator (the sharp semiclassical density).
OperatorPhaseField sharp_density(const ComplexMatrix& rho, const CompositeSpace& space, const PhaseGrid& grid);

/// Vacuum-noise density w(a0) = exp(−|a0|²/v)/(πv); v = ⟨|a0|²⟩ = 1/2 is the
/// minimum coarse-graining. Other variances exist only for negative controls.
struct GaussianKernel {
  double variance = 0.5;

  double operator()(Complex a0) const;
  /// Kernel sampled on a grid with wrap-around centering at node (0, 0).
  std::vector<double> sampled(const PhaseGrid& grid) const;
};

/// Monomial coeff · a^a_power · (a*)^conj_power.
struct Monomial {
  int a_power = 0;
  int conj_power = 0;
  Complex coeff{1.0, 0.0};
};

/// F(a,a*) = f(a,a*) · A, with f a scalar symbol (optionally polynomial) and A
/// an optional atomic matrix (identity when absent).
class SemiclassicalObservable {
 public:
  using Symbol = std::function<Complex(Complex)>;

  static SemiclassicalObservable polynomial(std::vector<Monomial> terms);
  static SemiclassicalObservable from_symbol(Symbol f);
  static SemiclassicalObservable constant(Complex c) { return polynomial({{0, 0, c}}); }
  static SemiclassicalObservable modulus_squared() { return polynomial({{1, 1, 1.0}}); }

  SemiclassicalObservable with_atomic(ComplexMatrix atomic) const;

  Complex scalar(Complex a) const { return symbol_(a); }
  bool is_polynomial() const { return terms_.has_value(); }
  const std::vector<Monomial>& terms() const;
  int degree() const;
  const std::optional<ComplexMatrix>& atomic() const { return atomic_; }

  /// tr_ato(F(a) · m) for a d×d atomic matrix m.
  Complex trace_with(Complex a, const ComplexMatrix& m) const;

 private:
  Symbol symbol_;
  std::optional<std::vector<Monomial>> terms_;
  std::optional<ComplexMatrix> atomic_;
};

/// Gaussian convolution by FFT. Throws SolverError if the input's boundary
/// mass exceeds 1e-8 (periodic wrap-around would not be negligible).
/// A Wigner input yields kind husimi.
PhaseFunction coarse_grain(const PhaseFunction& f, const GaussianKernel& kernel = {});
OperatorPhaseField coarse_grain(const OperatorPhaseField& f, const GaussianKernel& kernel = {});

/// Coarse-grained observable: exact Gaussian moments for polynomial symbols,
/// patch quadrature of the kernel otherwise.
SemiclassicalObservable coarse_grain(const SemiclassicalObservable& f, const GaussianKernel& kernel = {});

/// Node-wise (1/π)⟨a,a*|ρ|a,a*⟩ over the field factor, with the coherent
/// state truncated at n_max. Nodes beyond |a| = √n_max / 2 whose coherent
/// state loses more than 1e-10 of its norm to truncation are flagged.
OperatorPhaseField husimi_density(const ComplexMatrix& rho, const CompositeSpace& space, const PhaseGrid& grid);

/// Scalar Husimi Q-function of a field density matrix.
PhaseFunction husimi(const ComplexMatrix& rho_field, const PhaseGrid& grid);

Complex semiclassical_expectation(const SemiclassicalObservable& f, const OperatorPhaseField& field);
Complex semiclassical_expectation(const SemiclassicalObservable& f, const PhaseFunction& field);

/// ∫|a|² Q da* da − 1.
double photon_number_from_husimi(const PhaseFunction& q);

/// tr(F(â_c, â_c†) ρ) with superoperators substituted monomial by monomial.
/// ρ is embedded in a Fock space padded by the polynomial degree, so the
/// result is exact for operators supported on the truncated space.
Complex symmetric_moment_oracle(const SemiclassicalObservable& f, const ComplexMatrix& rho,
                                const CompositeSpace& space);
Complex symmetric_moment_oracle(const SemiclassicalObservable& f, const ComplexMatrix& rho_field,
                                const FockBasis& basis);

/// Σ over the outermost node ring of |f| h².
double boundary_mass(const PhaseFunction& f);
double boundary_mass(const OperatorPhaseField& f);

}  // namespace sweq
