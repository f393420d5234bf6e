// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Reference values are closed forms computed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "support.hpp"
#include "sweq/swe.hpp"

using namespace sweq;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ComplexVector excited() { return ComplexVector::Unit(2, 1); }

BargmannWave rabi_exact(double g, double t, const FockBasis& basis) {
  BargmannWave w{basis, ComplexMatrix::Zero(2, basis.dim()), t};
  w.coeffs(1, 0) = std::cos(g * t);
  w.coeffs(0, 1) = Complex(0.0, -std::sin(g * t));
  return w;
}

ComplexMatrix projector(int d, int level) {
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  p(level, level) = 1.0;
  return p;
}

double max_abs_diff(const GridWave& a, const GridWave& b) {
  double err = 0.0;
  for (size_t k = 0; k < a.values.size(); ++k) err = std::max(err, std::abs(a.values[k] - b.values[k]));
  return err;
}

// 1. ‖[â_c, â_c†]Ô‖_max ≤ 1e−10; d = 1, n_max = 16, 50 operators on n ≤ 14.
Outcome superop_commutativity() {
  const CompositeSpace space(1, FockBasis(16));
  std::mt19937_64 rng(101);
  double err = 0.0;
  for (int k = 0; k < 50; ++k) {
    const ComplexMatrix o = sweq::testing::random_operator(rng, space.total_dim(), 15);
    const ComplexMatrix c = superop_annihilation(superop_creation(o, space), space) -
                            superop_creation(superop_annihilation(o, space), space);
    err = std::max(err, c.cwiseAbs().maxCoeff());
  }
  return {err <= 1e-10, fmt("max entry %.3e (tol 1e-10)", err)};
}

// 2. superop vs direct characteristic function, 20 field states, |λ| ≤ 1,
//    n_max = 24, within 1e-8. States live on n ≤ n_max/2: at |λ| = 1 both
//    truncated exponentials lose accuracy within ~10 levels of the edge.
Outcome characteristic_identity() {
  const FockBasis basis(24);
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> r(0.0, 1.0), phi(0.0, 2.0 * pi);
  double err = 0.0;
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix rho = sweq::testing::random_density(rng, basis.dim(), basis.n_max() / 2 + 1);
    const Complex lambda = std::polar(r(rng), phi(rng));
    err = std::max(err, std::abs(characteristic_function(rho, lambda).value -
                                 superop_characteristic_function(rho, lambda, basis).value));
  }
  return {err <= 1e-8, fmt("max |delta| %.3e (tol 1e-8)", err)};
}

// 3. Vacuum Wigner max error ≤ 1e-6; Fock |1> at the origin within 1e-4 of −2/π.
Outcome wigner_correctness() {
  const PhaseGrid grid = PhaseGrid::default_grid();
  ComplexMatrix vac = ComplexMatrix::Zero(9, 9), one = ComplexMatrix::Zero(9, 9);
  vac(0, 0) = 1.0;
  one(1, 1) = 1.0;
  const PhaseFunction w0 = wigner(vac, grid);
  double err = 0.0;
  for (int node = 0; node < grid.node_count(); ++node)
    err = std::max(err, std::abs(w0.values[node] - 2.0 / pi * std::exp(-2.0 * std::norm(grid.point(node)))));
  const PhaseFunction w1 = wigner(one, grid);
  const double origin = w1.values[grid.nearest_node(0.0)];
  const double dev = std::abs(origin + 2.0 / pi);
  return {err <= 1e-6 && dev <= 1e-4,
          fmt("vacuum max error %.3e (tol 1e-6); |1> at origin %.9f, |delta| %.3e (tol 1e-4)", err, origin, dev)};
}

// 4. Husimi via coherent states vs smoothed sharp density, L∞ ≤ 5e-4,
//    default grid, 10 random composite states (d = 2, n_max = 8).
Outcome husimi_two_route() {
  const PhaseGrid grid = PhaseGrid::default_grid();
  const CompositeSpace space(2, FockBasis(8));
  std::mt19937_64 rng(104);
  double err = 0.0;
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix rho = density_operator(sweq::testing::random_composite_state(rng, space, 9));
    const OperatorPhaseField q = husimi_density(rho, space, grid);
    const OperatorPhaseField s = coarse_grain(sharp_density(rho, space, grid));
    for (size_t i = 0; i < q.data.size(); ++i) err = std::max(err, std::abs(q.data[i] - s.data[i]));
  }
  return {err <= 5e-4, fmt("L-inf %.3e (tol 5e-4)", err)};
}

// 5. Operator route vs phase-space quadrature for monomials of degree ≤ 2:
//    sharp density, Husimi density, and the |a|² shift identity, within 1e-5.
Outcome equivalence_identities() {
  const PhaseGrid grid = PhaseGrid::default_grid();
  const CompositeSpace space(2, FockBasis(8));
  std::mt19937_64 rng(105);
  const ComplexMatrix pe = projector(2, 1);
  const ComplexMatrix number = lift_field(number_operator(space.fock()), space);
  double e_sharp = 0.0, e_coarse = 0.0, e_shift = 0.0;
  for (int k = 0; k < 5; ++k) {
    const ComplexMatrix rho = density_operator(sweq::testing::random_composite_state(rng, space, 5));
    const OperatorPhaseField sharp = sharp_density(rho, space, grid);
    const OperatorPhaseField coarse = husimi_density(rho, space, grid);
    for (int p = 0; p <= 2; ++p)
      for (int q = 0; p + q <= 2; ++q)
        for (const auto& f : {SemiclassicalObservable::polynomial({{p, q, 1.0}}),
                              SemiclassicalObservable::polynomial({{p, q, 1.0}}).with_atomic(pe)}) {
          e_sharp = std::max(e_sharp, std::abs(symmetric_moment_oracle(f, rho, space) - semiclassical_expectation(f, sharp)));
          e_coarse = std::max(e_coarse, std::abs(symmetric_moment_oracle(coarse_grain(f), rho, space) -
                                                 semiclassical_expectation(f, coarse)));
        }
    // tr((â_c†â_c + ½)ρ) = ∫|a|²Q = ⟨â†â⟩ + 1
    const double lhs = (number * rho).trace().real() + 1.0;
    e_shift = std::max(e_shift, std::abs(semiclassical_expectation(SemiclassicalObservable::modulus_squared(), coarse) - lhs));
  }
  const bool pass = e_sharp <= 1e-5 && e_coarse <= 1e-5 && e_shift <= 1e-5;
  return {pass, fmt("sharp %.3e, coarse %.3e, shift %.3e (tol 1e-5)", e_sharp, e_coarse, e_shift)};
}

// 6. ∫|a|²Q − 1 = ⟨â†â⟩ within 1e-4: vacuum, |1>, coherent α = 1, and the
//    vacuum-Rabi field at 8 times in [0, 2π/g].
Outcome photon_number_identity() {
  const PhaseGrid grid = PhaseGrid::default_grid();
  double err = 0.0;
  auto check = [&](const ComplexMatrix& rho_field, double n) {
    err = std::max(err, std::abs(photon_number_from_husimi(husimi(rho_field, grid)) - n));
  };
  const FockBasis wide(20);
  const ComplexVector vac = fock_amplitudes(0, wide), one = fock_amplitudes(1, wide);
  const ComplexVector coh = coherent_amplitudes(1.0, wide);
  check(vac * vac.adjoint(), 0.0);
  check(one * one.adjoint(), 1.0);
  check(coh * coh.adjoint(), (number_operator(wide) * coh * coh.adjoint()).trace().real());

  const CompositeSpace space(2, FockBasis(8));
  const AtomFieldModel model = AtomFieldModel::two_level(1.0, 0.0);
  const CompositeState psi0 = product_initial_state(excited(), fock_amplitudes(0, space.fock()), space);
  const UnitaryTrajectory u = evolve_unitary(model, psi0, TimeGrid{0.0, 2.0 * pi, 2.0 * pi / 7000, 1000});
  for (size_t k = 0; k < u.states.size(); ++k) {
    const ComplexMatrix rho = density_operator(u.states[k]);
    check(partial_trace_atom(rho, space), std::pow(std::sin(u.times[k]), 2));
  }
  return {err <= 1e-4, fmt("max |delta| %.3e over %zu states (tol 1e-4)", err, u.states.size() + 3)};
}

// 7. Bargmann backend over one Rabi period: ψψ† vs oracle Husimi L∞ ≤ 1e-7,
//    P_e = cos²(gt) within 1e-6, ∫ψ†|a|²ψ = sin²(gt) + 1 within 1e-5.
Outcome swe_equivalence() {
  const PhaseGrid grid = PhaseGrid::default_grid();
  const CompositeSpace space(2, FockBasis(8));
  const AtomFieldModel model = AtomFieldModel::two_level(1.0, 0.0);
  const CompositeState psi0 = product_initial_state(excited(), fock_amplitudes(0, space.fock()), space);
  const TimeGrid time{0.0, 2.0 * pi, 2.0 * pi / 6284, 100};
  const UnitaryTrajectory u = evolve_unitary(model, psi0, time);
  const auto waves = evolve_bargmann(model, bargmann_from_state(psi0), time);
  const auto pe = SemiclassicalObservable::constant(1.0).with_atomic(projector(2, 1));
  const auto mod2 = SemiclassicalObservable::modulus_squared();
  double linf = 0.0, e_pe = 0.0, e_mod = 0.0;
  for (size_t k = 0; k < waves.size(); ++k) {
    const double t = waves[k].time;
    linf = std::max(linf, compare_to_oracle(waves[k], u.states[k], grid).linf);
    e_pe = std::max(e_pe, std::abs(swe_expectation(waves[k], pe, grid) - std::pow(std::cos(t), 2)));
    e_mod = std::max(e_mod, std::abs(swe_expectation(waves[k], mod2, grid) - (std::pow(std::sin(t), 2) + 1.0)));
  }
  const bool pass = linf <= 1e-7 && e_pe <= 1e-6 && e_mod <= 1e-5;
  return {pass, fmt("%zu snapshots: L-inf %.3e (tol 1e-7), P_e %.3e (tol 1e-6), |a|^2 %.3e (tol 1e-5)", waves.size(),
                    linf, e_pe, e_mod)};
}

// 8. Grid backend vs oracle Husimi at gt = π, M = 128, dt ≤ 1e-3/g:
//    L∞ ≤ 1e-3·max node value.
Outcome grid_backend() {
  const PhaseGrid grid(8.0, 128);
  const CompositeSpace space(2, FockBasis(8));
  const AtomFieldModel model = AtomFieldModel::two_level(1.0, 0.0);
  const CompositeState psi0 = product_initial_state(excited(), fock_amplitudes(0, space.fock()), space);
  const TimeGrid time{0.0, pi, pi / 3142, 3142};
  const CompositeState psi = evolve_unitary(model, psi0, time).states.back();
  const GridWave w = evolve_grid(model, initial_wave(excited(), grid), time).back();
  const ComparisonReport r = compare_to_oracle(w, psi, grid);
  return {r.linf <= 1e-3 * r.max_node_value,
          fmt("L=8 M=128 dt=pi/3142: L-inf %.3e, max node %.3e, ratio %.3e (tol 1e-3)", r.linf, r.max_node_value,
              r.linf / r.max_node_value)};
}

// 9. 10^5 samples at gt = π/4 estimate ∫ψ†|a|²ψ within 3 standard errors;
//    a fixed seed reproduces byte-identical samples.
Outcome monte_carlo() {
  const PhaseGrid grid = PhaseGrid::default_grid();
  const AtomFieldModel model = AtomFieldModel::two_level(1.0, 0.0);
  const TimeGrid time{0.0, pi / 4, pi / 4000, 1000};
  const BargmannWave b = evolve_bargmann(model, initial_wave(excited(), FockBasis(8)), time).back();
  const GridWave w = evaluate_on_grid(b, grid);
  const double exact = swe_expectation(w, SemiclassicalObservable::modulus_squared()).real();
  const int n = 100000;
  const auto s1 = sample_field(w, n, 2024);
  const auto s2 = sample_field(w, n, 2024);
  bool identical = s1.size() == s2.size();
  double sum = 0.0, sum2 = 0.0;
  for (size_t k = 0; k < s1.size() && identical; ++k) {
    identical = std::memcmp(&s1[k].a, &s2[k].a, sizeof(Complex)) == 0 &&
                std::memcmp(s1[k].conditional_state.data(), s2[k].conditional_state.data(), 2 * sizeof(Complex)) == 0;
    sum += std::norm(s1[k].a);
    sum2 += std::pow(std::norm(s1[k].a), 2);
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  const double z = std::abs(mean - exact) / se;
  return {identical && z <= 3.0,
          fmt("estimate %.5f vs quadrature %.5f, %.2f standard errors (tol 3); reproducible: %s", mean, exact, z,
              identical ? "yes" : "no")};
}

// 10. RK4 error ratio ≥ 12 under dt halving (oracle and Bargmann); grid error
//     decreases under M doubling.
Outcome convergence_orders() {
  const AtomFieldModel model = AtomFieldModel::two_level(1.0, 0.0);
  const CompositeSpace space(2, FockBasis(2));
  const CompositeState psi0 = product_initial_state(excited(), fock_amplitudes(0, space.fock()), space);
  const double t_end = 6.4;
  auto oracle_error = [&](double dt) {
    const auto u = evolve_unitary(model, psi0, TimeGrid{0.0, t_end, dt, 1000000});
    const ComplexMatrix rho = density_operator(u.states.back());
    return std::abs(rho(space.index(1, 0), space.index(1, 0)).real() - std::pow(std::cos(t_end), 2));
  };
  auto bargmann_error = [&](double dt) {
    const auto w = evolve_bargmann(model, initial_wave(excited(), space.fock()), TimeGrid{0.0, t_end, dt, 1000000}).back();
    return (w.coeffs - rabi_exact(1.0, t_end, space.fock()).coeffs).cwiseAbs().maxCoeff();
  };
  const double o_ratio = oracle_error(0.032) / oracle_error(0.016);
  const double b_ratio = bargmann_error(0.032) / bargmann_error(0.016);

  auto grid_error = [&](const PhaseGrid& grid, Derivative d) {
    const double t = pi / 4;
    const auto w = evolve_grid(model, initial_wave(excited(), grid), TimeGrid{0.0, t, t / 200, 200}, {d, false}).back();
    return max_abs_diff(w, evaluate_on_grid(rabi_exact(1.0, t, FockBasis(8)), grid));
  };
  const double sp32 = grid_error(PhaseGrid(12.0, 32), Derivative::spectral);
  const double sp64 = grid_error(PhaseGrid(12.0, 64), Derivative::spectral);
  const double fd64 = grid_error(PhaseGrid(5.0, 64), Derivative::finite_difference);
  const double fd128 = grid_error(PhaseGrid(5.0, 128), Derivative::finite_difference);
  const bool pass = o_ratio >= 12.0 && b_ratio >= 12.0 && sp64 < sp32 && fd128 < fd64;
  return {pass, fmt("RK4 ratio oracle %.2f, bargmann %.2f (tol >= 12); grid spectral %.2e -> %.2e, "
                    "finite difference %.2e -> %.2e",
                    o_ratio, b_ratio, sp32, sp64, fd64, fd128)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "superoperator commutativity", 1.0, superop_commutativity},
      {2, "characteristic-function identity", 5.0, characteristic_identity},
      {3, "Wigner correctness", 5.0, wigner_correctness},
      {4, "Husimi two-route consistency", 20.0, husimi_two_route},
      {5, "equivalence identities", 10.0, equivalence_identities},
      {6, "photon-number identity", 10.0, photon_number_identity},
      {7, "SWE equivalence (bargmann)", 30.0, swe_equivalence},
      {8, "grid backend discretization", 120.0, grid_backend},
      {9, "Monte-Carlo consistency", 30.0, monte_carlo},
      {10, "convergence orders", 120.0, convergence_orders},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s %2d  %-34s %s; %.2f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                seconds, c.limit_seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
