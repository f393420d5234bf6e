#pragma once

// Interaction-picture Schrödinger dynamics of an atom coupled to one cavity
// mode, H_I(t) = ĵ(t) ⊗ â† + ĵ†(t) ⊗ â. Units ħ = 1.

#include <vector>

#include "sweq/fockspace.hpp"

namespace sweq {

struct AtomFieldModel {
  ComplexMatrix h_atom;   ///< d×d atomic Hamiltonian, Hermitian
  ComplexMatrix current;  ///< d×d current operator J
  double omega = 0.0;     ///< mode angular frequency

  int atom_dim() const { return static_cast<int>(h_atom.rows()); }

  /// Throws InvalidArgument unless shapes agree, entries are finite,
  /// h_atom is Hermitian within 1e-12 and omega >= 0.
  void validate() const;

  /// H_ato = (ω_A/2)σ_z, J = g σ_−, ω = ω_A + detuning.
  /// Basis index 0 is |g⟩, index 1 is |e⟩.
  static AtomFieldModel two_level(double g, double detuning, double atom_frequency = 1.0);
};

/// ĵ(t) = e^{iωt} e^{iH_ato t} J e^{−iH_ato t}, with the eigendecomposition
/// of H_ato computed once.
class RotatedCurrent {
 public:
  explicit RotatedCurrent(const AtomFieldModel& model);

  ComplexMatrix at(double t) const;
  int atom_dim() const { return static_cast<int>(current_eigen_.rows()); }

 private:
  Eigen::VectorXd energies_;
  ComplexMatrix eigenvectors_;
  ComplexMatrix current_eigen_;  // J in the H_ato eigenbasis
  double omega_;
};

ComplexMatrix rotated_current(const AtomFieldModel& model, double t);

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
  int sample_stride = 1;

  /// Number of dt steps; throws InvalidArgument unless the span is an
  /// integer multiple of dt within rounding.
  int steps() const;
  void validate() const;
};

ComplexMatrix interaction_hamiltonian(const AtomFieldModel& model, double t, const CompositeSpace& space);
ComplexMatrix interaction_hamiltonian(const ComplexMatrix& j, const CompositeSpace& space);

/// Ψ0 = ψ_ato ⊗ ψ_rad; both factors must be unit norm within 1e-12.
CompositeState product_initial_state(const ComplexVector& psi_atom, const ComplexVector& field,
                                     const CompositeSpace& space);

ComplexVector fock_amplitudes(int n, const FockBasis& basis);

/// Coherent state amplitudes α^n/√n! truncated at n_max and renormalized.
ComplexVector coherent_amplitudes(Complex alpha, const FockBasis& basis);

struct UnitaryTrajectory {
  std::vector<double> times;
  std::vector<CompositeState> states;  ///< renormalized copies
  double max_norm_drift = 0.0;         ///< max | ‖Ψ‖ − 1 | before renormalization
};

/// Spectral-norm estimate of H_I(t) by 20 power iterations.
double hamiltonian_norm_estimate(const ComplexMatrix& h);

/// Fixed-step RK4 for dΨ/dt = −iH_I(t)Ψ. Returns states at t_start and at
/// every sample_stride steps (and always the final step).
///
/// Throws InvalidArgument if dt·‖H_I(t_start)‖ > 0.05, SolverError if the norm
/// drifts by more than 1e-6.
UnitaryTrajectory evolve_unitary(const AtomFieldModel& model, const CompositeState& psi0, const TimeGrid& grid);

ComplexMatrix density_operator(const CompositeState& psi);

}  // namespace sweq
