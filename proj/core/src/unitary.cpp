#include "sweq/unitary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sweq {

namespace {

constexpr double kMaxStepNorm = 0.05;
constexpr double kMaxNormDrift = 1e-6;

}  // namespace

void AtomFieldModel::validate() const {
  const auto d = h_atom.rows();
  if (d < 1 || h_atom.cols() != d) throw InvalidArgument("AtomFieldModel: h_atom must be square");
  if (current.rows() != d || current.cols() != d) {
    throw InvalidArgument("AtomFieldModel: current must match h_atom dimension");
  }
  if (!h_atom.allFinite() || !current.allFinite() || !std::isfinite(omega)) {
    throw InvalidArgument("AtomFieldModel: non-finite entry");
  }
  if ((h_atom - h_atom.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidArgument("AtomFieldModel: h_atom is not Hermitian");
  }
  if (omega < 0.0) throw InvalidArgument("AtomFieldModel: omega must be >= 0");
}

AtomFieldModel AtomFieldModel::two_level(double g, double detuning, double atom_frequency) {
  AtomFieldModel m;
  m.h_atom = ComplexMatrix::Zero(2, 2);
  m.h_atom(0, 0) = -atom_frequency / 2.0;
  m.h_atom(1, 1) = atom_frequency / 2.0;
  m.current = ComplexMatrix::Zero(2, 2);
  m.current(0, 1) = g;  // g |g⟩⟨e|
  m.omega = atom_frequency + detuning;
  m.validate();
  return m;
}

RotatedCurrent::RotatedCurrent(const AtomFieldModel& model) : omega_(model.omega) {
  model.validate();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(model.h_atom);
  energies_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
  current_eigen_ = eigenvectors_.adjoint() * model.current * eigenvectors_;
}

ComplexMatrix RotatedCurrent::at(double t) const {
  const auto d = current_eigen_.rows();
  ComplexMatrix rotated(d, d);
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index l = 0; l < d; ++l)
      rotated(k, l) = current_eigen_(k, l) * std::polar(1.0, (omega_ + energies_(k) - energies_(l)) * t);
  return eigenvectors_ * rotated * eigenvectors_.adjoint();
}

ComplexMatrix rotated_current(const AtomFieldModel& model, double t) { return RotatedCurrent(model).at(t); }

int TimeGrid::steps() const {
  validate();
  const double ratio = (t_end - t_start) / dt;
  return static_cast<int>(std::llround(ratio));
}

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !(t_end > t_start) || sample_stride < 1) {
    throw InvalidArgument("TimeGrid: need dt > 0, t_end > t_start, sample_stride >= 1");
  }
  const double ratio = (t_end - t_start) / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-6 * std::max(1.0, ratio)) {
    throw InvalidArgument("TimeGrid: (t_end - t_start)/dt is not an integer");
  }
}

ComplexMatrix interaction_hamiltonian(const ComplexMatrix& j, const CompositeSpace& space) {
  if (j.rows() != space.atom_dim() || j.cols() != space.atom_dim()) {
    throw InvalidArgument("interaction_hamiltonian: current does not match atom dimension");
  }
  const ComplexMatrix a = annihilation(space.fock());
  return tensor(j, a.adjoint()) + tensor(j.adjoint(), a);
}

ComplexMatrix interaction_hamiltonian(const AtomFieldModel& model, double t, const CompositeSpace& space) {
  if (model.atom_dim() != space.atom_dim()) {
    throw InvalidArgument("interaction_hamiltonian: model and space atom dimensions differ");
  }
  return interaction_hamiltonian(rotated_current(model, t), space);
}

CompositeState product_initial_state(const ComplexVector& psi_atom, const ComplexVector& field,
                                     const CompositeSpace& space) {
  if (psi_atom.size() != space.atom_dim() || field.size() != space.fock_dim()) {
    throw InvalidArgument("product_initial_state: factor dimensions do not match space");
  }
  if (std::abs(psi_atom.norm() - 1.0) > 1e-12 || std::abs(field.norm() - 1.0) > 1e-12) {
    throw InvalidArgument("product_initial_state: factors must be normalized");
  }
  ComplexVector amps(space.total_dim());
  for (int i = 0; i < space.atom_dim(); ++i)
    for (int n = 0; n < space.fock_dim(); ++n) amps(space.index(i, n)) = psi_atom(i) * field(n);
  amps.normalize();
  return CompositeState(space, std::move(amps));
}

ComplexVector fock_amplitudes(int n, const FockBasis& basis) {
  if (n < 0 || n > basis.n_max()) throw InvalidArgument("fock_amplitudes: occupation outside basis");
  ComplexVector v = ComplexVector::Zero(basis.dim());
  v(n) = 1.0;
  return v;
}

ComplexVector coherent_amplitudes(Complex alpha, const FockBasis& basis) {
  ComplexVector v(basis.dim());
  v(0) = 1.0;
  for (int n = 1; n < basis.dim(); ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  v.normalize();
  return v;
}

double hamiltonian_norm_estimate(const ComplexMatrix& h) {
  const auto n = h.rows();
  ComplexVector v(n);
  // Fixed, non-symmetric start so no eigenvector is missed by construction.
  for (Eigen::Index k = 0; k < n; ++k) v(k) = Complex(1.0 + 0.37 * k, 0.11 * (k % 5));
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < 20; ++it) {
    ComplexVector w = h * v;
    estimate = w.norm();
    if (estimate == 0.0) return 0.0;
    v = w / estimate;
  }
  return estimate;
}

UnitaryTrajectory evolve_unitary(const AtomFieldModel& model, const CompositeState& psi0, const TimeGrid& grid) {
  const int steps = grid.steps();
  const CompositeSpace& space = psi0.space();
  if (model.atom_dim() != space.atom_dim()) {
    throw InvalidArgument("evolve_unitary: model and state atom dimensions differ");
  }
  const RotatedCurrent current(model);
  auto hamiltonian = [&](double t) { return interaction_hamiltonian(current.at(t), space); };

  const double norm_h = hamiltonian_norm_estimate(hamiltonian(grid.t_start));
  if (grid.dt * norm_h > kMaxStepNorm) {
    throw InvalidArgument("evolve_unitary: dt*||H_I|| = " + std::to_string(grid.dt * norm_h) +
                          " exceeds 0.05; reduce dt");
  }

  const Complex minus_i(0.0, -1.0);
  const double dt = grid.dt;
  UnitaryTrajectory out;
  out.times.push_back(grid.t_start);
  out.states.push_back(psi0);

  ComplexVector psi = psi0.amplitudes();
  for (int step = 1; step <= steps; ++step) {
    const double t = grid.t_start + (step - 1) * dt;
    const ComplexMatrix h0 = hamiltonian(t);
    const ComplexMatrix hmid = hamiltonian(t + dt / 2.0);
    const ComplexMatrix h1 = hamiltonian(t + dt);
    const ComplexVector k1 = minus_i * (h0 * psi);
    const ComplexVector k2 = minus_i * (hmid * (psi + 0.5 * dt * k1));
    const ComplexVector k3 = minus_i * (hmid * (psi + 0.5 * dt * k2));
    const ComplexVector k4 = minus_i * (h1 * (psi + dt * k3));
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double drift = std::abs(psi.norm() - 1.0);
    out.max_norm_drift = std::max(out.max_norm_drift, drift);
    if (drift > kMaxNormDrift || !psi.allFinite()) {
      throw SolverError("evolve_unitary: norm drift " + std::to_string(drift) + " at t = " +
                        std::to_string(t + dt));
    }
    if (step % grid.sample_stride == 0 || step == steps) {
      out.times.push_back(grid.t_start + step * dt);
      // Renormalize only the reported copy; the drift guard above bounds the
      // difference at 1e-6.
      out.states.emplace_back(space, psi / psi.norm());
    }
  }
  return out;
}

ComplexMatrix density_operator(const CompositeState& psi) {
  return psi.amplitudes() * psi.amplitudes().adjoint();
}

}  // namespace sweq
