#pragma once

// Semiclassical wave function ψ(a,a*) of the atom conditioned on the
// classical field variable a, and its exact equation of motion
//
//   dψ/dt = −i (a* ĵ(t) + (a/2) ĵ†(t)) ψ − i ĵ†(t) ∂ψ/∂a*.
//
// Two backends: Bargmann coefficients F_n, with
//   ψ(a,a*) = e^{−|a|²/2} π^{−1/2} Σ_n F_n (a*)^n / √n!,
// and direct nodal values on a PhaseGrid with Fourier (or finite-difference)
// evaluation of ∂/∂a* = ½(∂/∂x + i ∂/∂y).

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "sweq/fft.hpp"
#include "sweq/phasespace.hpp"
#include "sweq/unitary.hpp"

namespace sweq {

struct GridWave {
  PhaseGrid grid;
  int atom_dim;
  std::vector<Complex> values;  ///< values[component * node_count + node]
  double time = 0.0;

  GridWave(PhaseGrid g, int d, double t = 0.0);

  Complex& at(int component, int node) { return values[static_cast<size_t>(component) * grid.node_count() + node]; }
  Complex at(int component, int node) const {
    return values[static_cast<size_t>(component) * grid.node_count() + node];
  }
  ComplexVector node_vector(int node) const;
  double total_probability() const;
};

struct BargmannWave {
  FockBasis basis;
  ComplexMatrix coeffs;  ///< atom_dim × (n_max + 1); column n is F_n
  double time = 0.0;

  int atom_dim() const { return static_cast<int>(coeffs.rows()); }
  double total_probability() const { return coeffs.squaredNorm(); }
  /// ψ(a,a*) evaluated from the series.
  ComplexVector evaluate(Complex a) const;
};

using SemiclassicalWave = std::variant<GridWave, BargmannWave>;

struct FieldSample {
  Complex a;
  ComplexVector conditional_state;
};

/// ψ0(a,a*) = ψ_ato e^{−|a|²/2}/√π: cavity in vacuum.
GridWave initial_wave(const ComplexVector& psi_atom, const PhaseGrid& grid);
BargmannWave initial_wave(const ComplexVector& psi_atom, const FockBasis& basis);

/// F_n = ⟨n|Ψ⟩ for an arbitrary composite state.
BargmannWave bargmann_from_state(const CompositeState& psi, double time = 0.0);

/// One RK4 step of i dF_n/dt = √n ĵ F_{n−1} + √(n+1) ĵ† F_{n+1}.
/// Throws SolverError when ‖F_{n_max}‖² exceeds 1e-8.
BargmannWave step_bargmann(const RotatedCurrent& current, const BargmannWave& wave, double t, double dt);
BargmannWave step_bargmann(const AtomFieldModel& model, const BargmannWave& wave, double t, double dt);

enum class Derivative { spectral, finite_difference };

struct GridStepOptions {
  Derivative derivative = Derivative::spectral;
  /// Testing hook: drop the ĵ† terms, leaving the pointwise phase rotation.
  bool drop_lowering_terms = false;
};

/// Reusable grid integrator (owns the FFT plans and wavenumbers).
class GridStepper {
 public:
  GridStepper(const AtomFieldModel& model, const PhaseGrid& grid, GridStepOptions options = {});

  /// One RK4 step. Throws InvalidArgument if the incoming boundary mass of
  /// ‖ψ‖² exceeds 1e-8 and SolverError if the step pushes it above 1e-8.
  GridWave step(const GridWave& wave, double t, double dt) const;

  /// ∂ψ/∂a* of one component plane.
  std::vector<Complex> conj_derivative(std::span<const Complex> plane) const;

 private:
  std::vector<Complex> rhs(const GridWave& wave, double t) const;

  RotatedCurrent current_;
  PhaseGrid grid_;
  GridStepOptions options_;
  Fft2d fft_;
  std::vector<Complex> multiplier_;  // ½(i kx − ky) per Fourier mode
  std::vector<Complex> points_;
};

GridWave step_grid(const AtomFieldModel& model, const GridWave& wave, double t, double dt,
                   GridStepOptions options = {});

/// Snapshots at t_start and every sample_stride steps (plus the final step).
std::vector<BargmannWave> evolve_bargmann(const AtomFieldModel& model, const BargmannWave& wave, const TimeGrid& time);
std::vector<GridWave> evolve_grid(const AtomFieldModel& model, const GridWave& wave, const TimeGrid& time,
                                  GridStepOptions options = {});

GridWave evaluate_on_grid(const BargmannWave& wave, const PhaseGrid& grid);

/// F_n = ∫ φ_n(a)* ψ(a) da* da by grid quadrature.
BargmannWave project_to_bargmann(const GridWave& wave, const FockBasis& basis);

/// ρ_t(a,a*) = ‖ψ_t(a,a*)‖², kind husimi.
PhaseFunction field_density(const GridWave& wave);
PhaseFunction field_density(const BargmannWave& wave, const PhaseGrid& grid);

/// ψψ† per node.
OperatorPhaseField wave_density(const GridWave& wave);

/// ψ(a)/‖ψ(a)‖; the grid variant uses the nearest node. Throws InvalidArgument
/// when ‖ψ(a)‖ ≤ 1e-12.
FieldSample conditional_state(const GridWave& wave, Complex a);
FieldSample conditional_state(const BargmannWave& wave, Complex a);

/// ∫ ψ† F ψ da* da by quadrature.
Complex swe_expectation(const GridWave& wave, const SemiclassicalObservable& f);
Complex swe_expectation(const BargmannWave& wave, const SemiclassicalObservable& f, const PhaseGrid& grid);

/// Inverse-CDF sampling of grid nodes from ρ_t: row marginal, then column
/// conditional. Sample k uses std::mt19937_64 seeded with seed + k.
std::vector<FieldSample> sample_field(const GridWave& wave, int count, std::uint64_t seed);

struct MomentComparison {
  Complex swe;
  Complex oracle;
  double delta = 0.0;
};

struct ComparisonReport {
  double linf = 0.0;
  double l2 = 0.0;
  double max_node_value = 0.0;  ///< max |entry| of the oracle Husimi density
  std::map<std::string, MomentComparison> moments;
};

/// Compares ψψ† with the Husimi operator density of Ψ node-wise, and the
/// expectations of F ∈ {1, a, a*, |a|²} against tr(F̄(â_c,â_c†) ρ).
ComparisonReport compare_to_oracle(const SemiclassicalWave& wave, const CompositeState& psi, const PhaseGrid& grid);

}  // namespace sweq
