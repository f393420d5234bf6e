#include "sweq/swe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace sweq {

namespace {

constexpr double kMaxBoundaryMass = 1e-8;
constexpr double kMaxEdgeMass = 1e-8;
const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

double wave_boundary_mass(const GridWave& w) {
  double s = 0.0;
  for (int node = 0; node < w.grid.node_count(); ++node) {
    if (!w.grid.on_boundary(node)) continue;
    for (int c = 0; c < w.atom_dim; ++c) s += std::norm(w.at(c, node));
  }
  return s * w.grid.weight();
}

void check_edge(const BargmannWave& w, const char* where) {
  const double edge = w.coeffs.col(w.basis.n_max()).squaredNorm();
  if (edge > kMaxEdgeMass) {
    throw SolverError(std::string(where) + ": coefficient mass " + std::to_string(edge) +
                      " at n_max exceeds 1e-8 (truncation overflow)");
  }
}

ComplexMatrix bargmann_rhs(const ComplexMatrix& j, const ComplexMatrix& f) {
  const ComplexMatrix jd = j.adjoint();
  const int nf = static_cast<int>(f.cols());
  ComplexMatrix out = ComplexMatrix::Zero(f.rows(), nf);
  const Complex minus_i(0.0, -1.0);
  for (int n = 0; n < nf; ++n) {
    if (n > 0) out.col(n) += std::sqrt(static_cast<double>(n)) * (j * f.col(n - 1));
    if (n + 1 < nf) out.col(n) += std::sqrt(static_cast<double>(n + 1)) * (jd * f.col(n + 1));
    out.col(n) *= minus_i;
  }
  return out;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

// ---------------------------------------------------------------------------
// Wave containers

GridWave::GridWave(PhaseGrid g, int d, double t)
    : grid(g), atom_dim(d), values(static_cast<size_t>(d) * g.node_count()), time(t) {
  if (d < 1) throw InvalidArgument("GridWave: atom_dim must be >= 1");
}

ComplexVector GridWave::node_vector(int node) const {
  ComplexVector v(atom_dim);
  for (int c = 0; c < atom_dim; ++c) v(c) = at(c, node);
  return v;
}

double GridWave::total_probability() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s * grid.weight();
}

ComplexVector BargmannWave::evaluate(Complex a) const {
  const Complex ac = std::conj(a);
  ComplexVector psi = ComplexVector::Zero(atom_dim());
  Complex basis_value = std::exp(-std::norm(a) / 2.0) * kInvSqrtPi;
  for (int n = 0; n < coeffs.cols(); ++n) {
    if (n > 0) basis_value *= ac / std::sqrt(static_cast<double>(n));
    psi += basis_value * coeffs.col(n);
  }
  return psi;
}

GridWave initial_wave(const ComplexVector& psi_atom, const PhaseGrid& grid) {
  if (std::abs(psi_atom.norm() - 1.0) > 1e-12) throw InvalidArgument("initial_wave: atomic state must be normalized");
  GridWave w(grid, static_cast<int>(psi_atom.size()));
  for (int node = 0; node < grid.node_count(); ++node) {
    const double g = std::exp(-std::norm(grid.point(node)) / 2.0) * kInvSqrtPi;
    for (int c = 0; c < w.atom_dim; ++c) w.at(c, node) = psi_atom(c) * g;
  }
  return w;
}

BargmannWave initial_wave(const ComplexVector& psi_atom, const FockBasis& basis) {
  if (std::abs(psi_atom.norm() - 1.0) > 1e-12) throw InvalidArgument("initial_wave: atomic state must be normalized");
  BargmannWave w{basis, ComplexMatrix::Zero(psi_atom.size(), basis.dim()), 0.0};
  w.coeffs.col(0) = psi_atom;
  return w;
}

BargmannWave bargmann_from_state(const CompositeState& psi, double time) {
  return {psi.space().fock(), psi.as_matrix(), time};
}

// ---------------------------------------------------------------------------
// Bargmann backend

BargmannWave step_bargmann(const RotatedCurrent& current, const BargmannWave& wave, double t, double dt) {
  if (current.atom_dim() != wave.atom_dim()) throw InvalidArgument("step_bargmann: atom dimensions differ");
  check_edge(wave, "step_bargmann");
  const ComplexMatrix j0 = current.at(t);
  const ComplexMatrix jm = current.at(t + dt / 2.0);
  const ComplexMatrix j1 = current.at(t + dt);
  const ComplexMatrix& f = wave.coeffs;
  const ComplexMatrix k1 = bargmann_rhs(j0, f);
  const ComplexMatrix k2 = bargmann_rhs(jm, f + 0.5 * dt * k1);
  const ComplexMatrix k3 = bargmann_rhs(jm, f + 0.5 * dt * k2);
  const ComplexMatrix k4 = bargmann_rhs(j1, f + dt * k3);
  BargmannWave out{wave.basis, f + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), t + dt};
  check_edge(out, "step_bargmann");
  return out;
}

BargmannWave step_bargmann(const AtomFieldModel& model, const BargmannWave& wave, double t, double dt) {
  return step_bargmann(RotatedCurrent(model), wave, t, dt);
}

std::vector<BargmannWave> evolve_bargmann(const AtomFieldModel& model, const BargmannWave& wave,
                                          const TimeGrid& time) {
  const int steps = time.steps();
  const RotatedCurrent current(model);
  std::vector<BargmannWave> out{wave};
  out.front().time = time.t_start;
  BargmannWave w = out.front();
  for (int step = 1; step <= steps; ++step) {
    w = step_bargmann(current, w, time.t_start + (step - 1) * time.dt, time.dt);
    w.time = time.t_start + step * time.dt;
    if (step % time.sample_stride == 0 || step == steps) out.push_back(w);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Grid backend

GridStepper::GridStepper(const AtomFieldModel& model, const PhaseGrid& grid, GridStepOptions options)
    : current_(model), grid_(grid), options_(options), fft_(grid.points()) {
  const int m = grid.points();
  const double dk = 2.0 * std::numbers::pi / (m * grid.spacing());
  auto wavenumber = [&](int k) {
    if (k == m / 2) return 0.0;  // Nyquist mode carries no odd derivative
    return dk * (k < m / 2 ? k : k - m);
  };
  multiplier_.resize(grid.node_count());
  points_.resize(grid.node_count());
  for (int node = 0; node < grid.node_count(); ++node) points_[node] = grid.point(node);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) multiplier_[r * m + c] = 0.5 * Complex(-wavenumber(c), wavenumber(r));
}

std::vector<Complex> GridStepper::conj_derivative(std::span<const Complex> plane) const {
  const int m = grid_.points();
  std::vector<Complex> out(plane.begin(), plane.end());
  if (options_.derivative == Derivative::spectral) {
    fft_.forward(out);
    const double norm = 1.0 / (static_cast<double>(m) * m);
    for (size_t k = 0; k < out.size(); ++k) out[k] *= multiplier_[k] * norm;
    fft_.backward(out);
    return out;
  }
  const double inv = 1.0 / (4.0 * grid_.spacing());  // ½ · 1/(2h)
  const Complex i(0.0, 1.0);
  for (int r = 0; r < m; ++r) {
    const int rp = (r + 1) % m;
    const int rm = (r + m - 1) % m;
    for (int c = 0; c < m; ++c) {
      const int cp = (c + 1) % m;
      const int cm = (c + m - 1) % m;
      const Complex dx = plane[rp * m + c] - plane[rm * m + c];
      const Complex dy = plane[r * m + cp] - plane[r * m + cm];
      out[r * m + c] = (dx + i * dy) * inv;
    }
  }
  return out;
}

std::vector<Complex> GridStepper::rhs(const GridWave& wave, double t) const {
  const int d = wave.atom_dim;
  const size_t n = static_cast<size_t>(grid_.node_count());
  const ComplexMatrix j = current_.at(t);
  ComplexMatrix jd = j.adjoint();
  if (options_.drop_lowering_terms) jd.setZero();
  const Complex minus_i(0.0, -1.0);

  std::vector<std::vector<Complex>> deriv;
  if (!options_.drop_lowering_terms) {
    for (int c = 0; c < d; ++c) deriv.push_back(conj_derivative({wave.values.data() + c * n, n}));
  }
  // out_c = −i Σ_k [(a* j_ck + (a/2) j†_ck) ψ_k + j†_ck ∂ψ_k/∂a*]
  std::vector<Complex> out(wave.values.size(), Complex(0.0));
  for (int c = 0; c < d; ++c) {
    Complex* o = out.data() + c * n;
    for (int k = 0; k < d; ++k) {
      const Complex jck = minus_i * j(c, k);
      const Complex jdck = minus_i * jd(c, k);
      if (jck == Complex(0.0) && jdck == Complex(0.0)) continue;
      const Complex* psi = wave.values.data() + k * n;
      for (size_t node = 0; node < n; ++node) {
        const Complex a = points_[node];
        o[node] += (std::conj(a) * jck + 0.5 * a * jdck) * psi[node];
      }
      if (!deriv.empty() && jdck != Complex(0.0)) {
        const Complex* dpsi = deriv[k].data();
        for (size_t node = 0; node < n; ++node) o[node] += jdck * dpsi[node];
      }
    }
  }
  return out;
}

GridWave GridStepper::step(const GridWave& wave, double t, double dt) const {
  if (!(wave.grid == grid_)) throw InvalidArgument("GridStepper: wave lives on a different grid");
  if (wave.atom_dim != current_.atom_dim()) throw InvalidArgument("GridStepper: atom dimensions differ");
  if (const double mass = wave_boundary_mass(wave); mass > kMaxBoundaryMass) {
    throw InvalidArgument("step_grid: boundary mass " + std::to_string(mass) + " exceeds 1e-8; enlarge the grid");
  }
  auto axpy = [](const GridWave& base, double s, const std::vector<Complex>& k) {
    GridWave out = base;
    for (size_t i = 0; i < k.size(); ++i) out.values[i] += s * k[i];
    return out;
  };
  const auto k1 = rhs(wave, t);
  const auto k2 = rhs(axpy(wave, dt / 2.0, k1), t + dt / 2.0);
  const auto k3 = rhs(axpy(wave, dt / 2.0, k2), t + dt / 2.0);
  const auto k4 = rhs(axpy(wave, dt, k3), t + dt);
  GridWave out = wave;
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  out.time = t + dt;
  if (const double mass = wave_boundary_mass(out); mass > kMaxBoundaryMass) {
    throw SolverError("step_grid: boundary mass grew to " + std::to_string(mass) + " at t = " + std::to_string(t + dt));
  }
  return out;
}

GridWave step_grid(const AtomFieldModel& model, const GridWave& wave, double t, double dt, GridStepOptions options) {
  return GridStepper(model, wave.grid, options).step(wave, t, dt);
}

std::vector<GridWave> evolve_grid(const AtomFieldModel& model, const GridWave& wave, const TimeGrid& time,
                                  GridStepOptions options) {
  const int steps = time.steps();
  const GridStepper stepper(model, wave.grid, options);
  std::vector<GridWave> out{wave};
  out.front().time = time.t_start;
  GridWave w = out.front();
  for (int step = 1; step <= steps; ++step) {
    w = stepper.step(w, time.t_start + (step - 1) * time.dt, time.dt);
    w.time = time.t_start + step * time.dt;
    if (step % time.sample_stride == 0 || step == steps) out.push_back(w);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conversions and observables

GridWave evaluate_on_grid(const BargmannWave& wave, const PhaseGrid& grid) {
  GridWave out(grid, wave.atom_dim(), wave.time);
  for (int node = 0; node < grid.node_count(); ++node) {
    const ComplexVector psi = wave.evaluate(grid.point(node));
    for (int c = 0; c < out.atom_dim; ++c) out.at(c, node) = psi(c);
  }
  return out;
}

BargmannWave project_to_bargmann(const GridWave& wave, const FockBasis& basis) {
  BargmannWave out{basis, ComplexMatrix::Zero(wave.atom_dim, basis.dim()), wave.time};
  const double w = wave.grid.weight();
  for (int node = 0; node < wave.grid.node_count(); ++node) {
    const Complex a = wave.grid.point(node);
    // conj(φ_n(a)) = e^{−|a|²/2} a^n / √(π n!)
    Complex phi_conj = std::exp(-std::norm(a) / 2.0) * kInvSqrtPi;
    const ComplexVector psi = wave.node_vector(node);
    for (int n = 0; n < basis.dim(); ++n) {
      if (n > 0) phi_conj *= a / std::sqrt(static_cast<double>(n));
      out.coeffs.col(n) += (w * phi_conj) * psi;
    }
  }
  return out;
}

PhaseFunction field_density(const GridWave& wave) {
  std::vector<double> v(wave.grid.node_count(), 0.0);
  for (int c = 0; c < wave.atom_dim; ++c)
    for (int node = 0; node < wave.grid.node_count(); ++node) v[node] += std::norm(wave.at(c, node));
  return PhaseFunction(wave.grid, std::move(v), PhaseKind::husimi);
}

PhaseFunction field_density(const BargmannWave& wave, const PhaseGrid& grid) {
  return field_density(evaluate_on_grid(wave, grid));
}

OperatorPhaseField wave_density(const GridWave& wave) {
  OperatorPhaseField out(wave.grid, wave.atom_dim);
  for (int node = 0; node < wave.grid.node_count(); ++node)
    for (int i = 0; i < wave.atom_dim; ++i)
      for (int j = 0; j < wave.atom_dim; ++j) out.at(i, j, node) = wave.at(i, node) * std::conj(wave.at(j, node));
  return out;
}

namespace {

FieldSample normalized_sample(Complex a, const ComplexVector& psi) {
  const double norm = psi.norm();
  if (norm <= 1e-12) {
    throw InvalidArgument("conditional_state: ψ vanishes at the requested field value");
  }
  return {a, psi / norm};
}

}  // namespace

FieldSample conditional_state(const GridWave& wave, Complex a) {
  const int node = wave.grid.nearest_node(a);
  return normalized_sample(wave.grid.point(node), wave.node_vector(node));
}

FieldSample conditional_state(const BargmannWave& wave, Complex a) { return normalized_sample(a, wave.evaluate(a)); }

Complex swe_expectation(const GridWave& wave, const SemiclassicalObservable& f) {
  if (f.atomic() && f.atomic()->rows() != wave.atom_dim) {
    throw InvalidArgument("swe_expectation: atomic factor does not match wave dimension");
  }
  Complex s{};
  for (int node = 0; node < wave.grid.node_count(); ++node) {
    const ComplexVector psi = wave.node_vector(node);
    const Complex inner = f.atomic() ? psi.dot(*f.atomic() * psi) : Complex(psi.squaredNorm());
    s += f.scalar(wave.grid.point(node)) * inner;
  }
  return s * wave.grid.weight();
}

Complex swe_expectation(const BargmannWave& wave, const SemiclassicalObservable& f, const PhaseGrid& grid) {
  return swe_expectation(evaluate_on_grid(wave, grid), f);
}

std::vector<FieldSample> sample_field(const GridWave& wave, int count, std::uint64_t seed) {
  if (count < 0) throw InvalidArgument("sample_field: count must be >= 0");
  const PhaseGrid& grid = wave.grid;
  const int m = grid.points();
  const PhaseFunction density = field_density(wave);

  std::vector<double> row_cdf(m);
  std::vector<std::vector<double>> col_cdf(m, std::vector<double>(m));
  double total = 0.0;
  for (int r = 0; r < m; ++r) {
    double row = 0.0;
    for (int c = 0; c < m; ++c) {
      row += density.values[r * m + c];
      col_cdf[r][c] = row;
    }
    total += row;
    row_cdf[r] = total;
  }
  if (!(total > 0.0)) throw InvalidArgument("sample_field: density vanishes on the grid");

  std::vector<FieldSample> samples;
  samples.reserve(count);
  for (int k = 0; k < count; ++k) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
    const double u_row = uniform01(rng) * total;
    const int r = static_cast<int>(std::min<std::ptrdiff_t>(
        std::upper_bound(row_cdf.begin(), row_cdf.end(), u_row) - row_cdf.begin(), m - 1));
    const auto& cdf = col_cdf[r];
    const double u_col = uniform01(rng) * cdf.back();
    const int c = static_cast<int>(
        std::min<std::ptrdiff_t>(std::upper_bound(cdf.begin(), cdf.end(), u_col) - cdf.begin(), m - 1));
    const int node = grid.node(r, c);
    samples.push_back(normalized_sample(grid.point(node), wave.node_vector(node)));
  }
  return samples;
}

// ---------------------------------------------------------------------------
// Oracle comparison

ComparisonReport compare_to_oracle(const SemiclassicalWave& wave, const CompositeState& psi, const PhaseGrid& grid) {
  const GridWave on_grid = std::visit(
      [&](const auto& w) -> GridWave {
        if constexpr (std::is_same_v<std::decay_t<decltype(w)>, GridWave>) {
          if (!(w.grid == grid)) throw InvalidArgument("compare_to_oracle: wave grid differs from comparison grid");
          return w;
        } else {
          return evaluate_on_grid(w, grid);
        }
      },
      wave);
  if (on_grid.atom_dim != psi.space().atom_dim()) throw InvalidArgument("compare_to_oracle: atom dimensions differ");

  const ComplexMatrix rho = density_operator(psi);
  const OperatorPhaseField oracle = husimi_density(rho, psi.space(), grid);
  const OperatorPhaseField swe = wave_density(on_grid);

  ComparisonReport report;
  double sum_sq = 0.0;
  for (size_t k = 0; k < oracle.data.size(); ++k) {
    const double diff = std::abs(oracle.data[k] - swe.data[k]);
    report.linf = std::max(report.linf, diff);
    report.max_node_value = std::max(report.max_node_value, std::abs(oracle.data[k]));
    sum_sq += diff * diff;
  }
  report.l2 = std::sqrt(sum_sq * grid.weight());

  const std::vector<std::pair<std::string, SemiclassicalObservable>> observables = {
      {"1", SemiclassicalObservable::constant(1.0)},
      {"a", SemiclassicalObservable::polynomial({{1, 0, 1.0}})},
      {"a*", SemiclassicalObservable::polynomial({{0, 1, 1.0}})},
      {"|a|^2", SemiclassicalObservable::modulus_squared()},
  };
  for (const auto& [name, f] : observables) {
    MomentComparison mc;
    mc.swe = swe_expectation(on_grid, f);
    mc.oracle = symmetric_moment_oracle(coarse_grain(f), rho, psi.space());
    mc.delta = std::abs(mc.swe - mc.oracle);
    report.moments.emplace(name, mc);
  }
  return report;
}

}  // namespace sweq
