#include "sweq/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "sweq/io.hpp"

namespace sweq::cli {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// JSON helpers

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InvalidArgument("config: expected a number or [re, im], got " + j.dump());
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

ComplexMatrix matrix_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("config: " + name + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      throw InvalidArgument("config: " + name + " must be square");
    }
    for (Eigen::Index c = 0; c < rows; ++c) m(r, c) = complex_from_json(row[c]);
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw InvalidArgument("config: " + where + " must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!keys.contains(key)) throw InvalidArgument("config: unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  return out;
}

// ---------------------------------------------------------------------------
// Scenario helpers

ComplexMatrix excited_projector(int d) {
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  p(d - 1, d - 1) = 1.0;
  return p;
}

double excited_population(const ComplexMatrix& rho, const CompositeSpace& space) {
  const int d = space.atom_dim();
  return partial_trace_field(rho, space)(d - 1, d - 1).real();
}

double photon_number(const ComplexMatrix& rho, const CompositeSpace& space) {
  return (lift_field(number_operator(space.fock()), space) * rho).trace().real();
}

GridWave as_grid(const SemiclassicalWave& wave, const PhaseGrid& grid) {
  if (const auto* g = std::get_if<GridWave>(&wave)) return *g;
  return evaluate_on_grid(std::get<BargmannWave>(wave), grid);
}

double total_probability(const SemiclassicalWave& wave) {
  return std::visit([](const auto& w) { return w.total_probability(); }, wave);
}

std::vector<SemiclassicalWave> evolve_swe_snapshots(const ScenarioConfig& c, const TimeGrid& time) {
  const BargmannWave b0 = bargmann_from_state(c.initial_state());
  std::vector<SemiclassicalWave> out;
  if (c.backend == "bargmann") {
    for (auto& w : evolve_bargmann(c.model, b0, time)) out.emplace_back(std::move(w));
  } else {
    for (auto& w : evolve_grid(c.model, evaluate_on_grid(b0, c.grid()), time)) out.emplace_back(std::move(w));
  }
  return out;
}

// random generators for the identity checks
Complex gaussian_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

ComplexMatrix random_operator(std::mt19937_64& rng, int dim, int support) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < support; ++i)
    for (int j = 0; j < support; ++j) m(i, j) = gaussian_complex(rng);
  return m;
}

ComplexMatrix random_field_density(std::mt19937_64& rng, int dim, int support) {
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  for (int r = 0; r < 2; ++r) {
    ComplexVector v = ComplexVector::Zero(dim);
    for (int k = 0; k < support; ++k) v(k) = gaussian_complex(rng);
    rho += v * v.adjoint();
  }
  return rho / rho.trace();
}

CompositeState random_composite_state(std::mt19937_64& rng, const CompositeSpace& space, int fock_support) {
  ComplexVector amps = ComplexVector::Zero(space.total_dim());
  for (int i = 0; i < space.atom_dim(); ++i)
    for (int n = 0; n < fock_support; ++n) amps(space.index(i, n)) = gaussian_complex(rng);
  amps.normalize();
  return CompositeState(space, amps);
}

double max_abs_diff(const OperatorPhaseField& a, const OperatorPhaseField& b) {
  double err = 0.0;
  for (size_t k = 0; k < a.data.size(); ++k) err = std::max(err, std::abs(a.data[k] - b.data[k]));
  return err;
}

class IdentityLog {
 public:
  void add(const std::string& name, double error, double threshold, json detail = json::object()) {
    const bool pass = std::isfinite(error) && error <= threshold;
    all_pass_ = all_pass_ && pass;
    json entry = {{"name", name}, {"error", error}, {"threshold", threshold}, {"pass", pass}};
    if (!detail.empty()) entry["detail"] = std::move(detail);
    entries_.push_back(std::move(entry));
  }
  void fail(const std::string& name, const std::string& message) {
    all_pass_ = false;
    entries_.push_back({{"name", name}, {"error", nullptr}, {"threshold", nullptr}, {"pass", false}, {"message", message}});
  }
  bool passed() const { return all_pass_; }
  const json& entries() const { return entries_; }

 private:
  json entries_ = json::array();
  bool all_pass_ = true;
};

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

TimeGrid ScenarioConfig::default_time() { return TimeGrid{0.0, 2.0 * kPi, kPi / 1000.0, 100}; }

CompositeState ScenarioConfig::initial_state() const {
  const CompositeSpace s = space();
  ComplexVector field;
  if (initial_field.kind == "vacuum") {
    field = fock_amplitudes(0, s.fock());
  } else if (initial_field.kind == "fock") {
    field = fock_amplitudes(initial_field.n, s.fock());
  } else {
    field = coherent_amplitudes(initial_field.alpha, s.fock());
  }
  return product_initial_state(initial_atom, field, s);
}

void ScenarioConfig::validate() const {
  model.validate();
  if (n_max < 2) throw InvalidArgument("config: fock.n_max must be >= 2");
  (void)grid();
  time.validate();
  if (time.t_start != 0.0) throw InvalidArgument("config: time starts at 0");
  if (backend != "bargmann" && backend != "grid") throw InvalidArgument("config: swe_backend must be bargmann or grid");
  if (initial_atom.size() != model.h_atom.rows()) throw InvalidArgument("config: initial.atom has wrong dimension");
  if (!initial_atom.allFinite() || std::abs(initial_atom.norm() - 1.0) > 1e-12) {
    throw InvalidArgument("config: initial.atom must be a unit vector");
  }
  if (initial_field.kind == "fock") {
    if (initial_field.n < 0 || initial_field.n > n_max) throw InvalidArgument("config: initial.field.n outside basis");
  } else if (initial_field.kind == "coherent") {
    if (!std::isfinite(initial_field.alpha.real()) || !std::isfinite(initial_field.alpha.imag())) {
      throw InvalidArgument("config: initial.field.alpha must be finite");
    }
  } else if (initial_field.kind != "vacuum") {
    throw InvalidArgument("config: initial.field.kind must be vacuum, fock or coherent");
  }
  if (sample_count < 0) throw InvalidArgument("config: sampling.count must be >= 0");
  if (!(kernel_variance > 0.0) || !std::isfinite(kernel_variance)) {
    throw InvalidArgument("config: testing.kernel_variance must be > 0");
  }
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  return a.model.h_atom == b.model.h_atom && a.model.current == b.model.current && a.model.omega == b.model.omega &&
         a.n_max == b.n_max && a.extent == b.extent && a.points == b.points && a.time.t_start == b.time.t_start &&
         a.time.t_end == b.time.t_end && a.time.dt == b.time.dt && a.time.sample_stride == b.time.sample_stride &&
         a.backend == b.backend && a.initial_atom == b.initial_atom && a.initial_field == b.initial_field &&
         a.sample_count == b.sample_count && a.seed == b.seed && a.output_dir == b.output_dir &&
         a.kernel_variance == b.kernel_variance;
}

ScenarioConfig parse_config(const json& j) {
  check_keys(j, "config", {"model", "fock", "grid", "time", "swe_backend", "initial", "sampling", "output_dir", "testing"});
  ScenarioConfig c;
  try {
    if (j.contains("model")) {
      const json& m = j.at("model");
      if (m.contains("preset")) {
        check_keys(m, "model", {"preset", "g", "detuning", "atom_frequency"});
        if (m.at("preset") != "two-level") throw InvalidArgument("config: unknown model preset " + m.at("preset").dump());
        c.model = AtomFieldModel::two_level(get_or(m, "g", 1.0), get_or(m, "detuning", 0.0), get_or(m, "atom_frequency", 1.0));
      } else {
        check_keys(m, "model", {"h_atom", "current", "omega"});
        c.model.h_atom = matrix_from_json(m.at("h_atom"), "model.h_atom");
        c.model.current = matrix_from_json(m.at("current"), "model.current");
        c.model.omega = m.at("omega").get<double>();
      }
      const auto d = c.model.h_atom.rows();
      c.initial_atom = ComplexVector::Unit(d, d - 1);
    }
    if (j.contains("fock")) {
      check_keys(j.at("fock"), "fock", {"n_max"});
      c.n_max = get_or(j.at("fock"), "n_max", c.n_max);
    }
    if (j.contains("grid")) {
      check_keys(j.at("grid"), "grid", {"extent", "points"});
      c.extent = get_or(j.at("grid"), "extent", c.extent);
      c.points = get_or(j.at("grid"), "points", c.points);
    }
    if (j.contains("time")) {
      const json& t = j.at("time");
      check_keys(t, "time", {"t_end", "dt", "sample_stride"});
      c.time.t_end = get_or(t, "t_end", c.time.t_end);
      c.time.dt = get_or(t, "dt", c.time.dt);
      c.time.sample_stride = get_or(t, "sample_stride", c.time.sample_stride);
    }
    c.backend = get_or(j, "swe_backend", c.backend);
    if (j.contains("initial")) {
      const json& init = j.at("initial");
      check_keys(init, "initial", {"atom", "field"});
      if (init.contains("atom")) {
        const json& a = init.at("atom");
        if (!a.is_array()) throw InvalidArgument("config: initial.atom must be an array");
        c.initial_atom = ComplexVector(static_cast<Eigen::Index>(a.size()));
        for (size_t k = 0; k < a.size(); ++k) c.initial_atom(static_cast<Eigen::Index>(k)) = complex_from_json(a[k]);
      }
      if (init.contains("field")) {
        const json& f = init.at("field");
        check_keys(f, "initial.field", {"kind", "n", "alpha"});
        c.initial_field.kind = get_or<std::string>(f, "kind", "vacuum");
        c.initial_field.n = get_or(f, "n", 0);
        if (f.contains("alpha")) c.initial_field.alpha = complex_from_json(f.at("alpha"));
      }
    }
    if (j.contains("sampling")) {
      check_keys(j.at("sampling"), "sampling", {"count", "seed"});
      c.sample_count = get_or(j.at("sampling"), "count", c.sample_count);
      c.seed = get_or(j.at("sampling"), "seed", c.seed);
    }
    c.output_dir = get_or(j, "output_dir", c.output_dir);
    if (j.contains("testing")) {
      check_keys(j.at("testing"), "testing", {"kernel_variance"});
      c.kernel_variance = get_or(j.at("testing"), "kernel_variance", c.kernel_variance);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const ScenarioConfig& c) {
  json atom = json::array();
  for (Eigen::Index k = 0; k < c.initial_atom.size(); ++k) atom.push_back(complex_to_json(c.initial_atom(k)));
  json field = {{"kind", c.initial_field.kind}};
  if (c.initial_field.kind == "fock") field["n"] = c.initial_field.n;
  if (c.initial_field.kind == "coherent") field["alpha"] = complex_to_json(c.initial_field.alpha);
  return {
      {"model", {{"h_atom", matrix_to_json(c.model.h_atom)}, {"current", matrix_to_json(c.model.current)}, {"omega", c.model.omega}}},
      {"fock", {{"n_max", c.n_max}}},
      {"grid", {{"extent", c.extent}, {"points", c.points}}},
      {"time", {{"t_end", c.time.t_end}, {"dt", c.time.dt}, {"sample_stride", c.time.sample_stride}}},
      {"swe_backend", c.backend},
      {"initial", {{"atom", atom}, {"field", field}}},
      {"sampling", {{"count", c.sample_count}, {"seed", c.seed}}},
      {"output_dir", c.output_dir},
      {"testing", {{"kernel_variance", c.kernel_variance}}},
  };
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

TimeGrid horizon(const ScenarioConfig& c, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be finite and > 0");
  const int steps = std::max(1, static_cast<int>(std::ceil(t / c.time.dt - 1e-9)));
  return TimeGrid{0.0, t, t / steps, steps};
}

SemiclassicalWave evolve_swe(const ScenarioConfig& c, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("time must be >= 0");
  if (t == 0.0) {
    const BargmannWave b0 = bargmann_from_state(c.initial_state());
    if (c.backend == "bargmann") return b0;
    return evaluate_on_grid(b0, c.grid());
  }
  return evolve_swe_snapshots(c, horizon(c, t)).back();
}

// ---------------------------------------------------------------------------
// rabi

json run_rabi(const ScenarioConfig& c, const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  const CompositeSpace space = c.space();
  const PhaseGrid grid = c.grid();
  const int d = space.atom_dim();

  const UnitaryTrajectory oracle = evolve_unitary(c.model, c.initial_state(), c.time);
  const std::vector<SemiclassicalWave> waves = evolve_swe_snapshots(c, c.time);
  if (waves.size() != oracle.states.size()) throw SolverError("rabi: oracle and SWE snapshot counts differ");

  const auto mod2 = SemiclassicalObservable::modulus_squared();
  const auto pe = SemiclassicalObservable::constant(1.0).with_atomic(excited_projector(d));

  std::ofstream csv = open_output(out / "rabi_timeseries.csv");
  csv << "t,P_e_oracle,P_e_swe,n_oracle,n_swe,linf_husimi\n";
  json records = json::array();
  double max_pe = 0.0, max_n = 0.0, max_linf = 0.0, max_rel = 0.0;
  for (size_t k = 0; k < waves.size(); ++k) {
    const double t = oracle.times[k];
    const ComplexMatrix rho = density_operator(oracle.states[k]);
    const ComplexMatrix rho_atom = partial_trace_field(rho, space);
    const GridWave w = as_grid(waves[k], grid);
    const double pe_oracle = excited_population(rho, space);
    const double pe_swe = swe_expectation(w, pe).real();
    const double n_oracle = photon_number(rho, space);
    const double n_swe = swe_expectation(w, mod2).real() - 1.0;
    const ComparisonReport cmp = compare_to_oracle(waves[k], oracle.states[k], grid);

    csv << format_double(t) << ',' << format_double(pe_oracle) << ',' << format_double(pe_swe) << ','
        << format_double(n_oracle) << ',' << format_double(n_swe) << ',' << format_double(cmp.linf) << '\n';

    json levels_oracle = json::array(), levels_swe = json::array();
    for (int i = 0; i < d; ++i) {
      ComplexMatrix p = ComplexMatrix::Zero(d, d);
      p(i, i) = 1.0;
      levels_oracle.push_back(rho_atom(i, i).real());
      levels_swe.push_back(swe_expectation(w, SemiclassicalObservable::constant(1.0).with_atomic(p)).real());
    }
    records.push_back({{"t", t},
                       {"levels_oracle", levels_oracle},
                       {"levels_swe", levels_swe},
                       {"n_oracle", n_oracle},
                       {"n_swe", n_swe},
                       {"total_probability", total_probability(waves[k])},
                       {"comparison", to_json(cmp)}});
    max_pe = std::max(max_pe, std::abs(pe_oracle - pe_swe));
    max_n = std::max(max_n, std::abs(n_oracle - n_swe));
    max_linf = std::max(max_linf, cmp.linf);
    max_rel = std::max(max_rel, cmp.linf / cmp.max_node_value);
  }

  const json report = {{"config", to_json(c)},
                       {"summary",
                        {{"backend", c.backend},
                         {"samples", records.size()},
                         {"max_abs_delta_P_e", max_pe},
                         {"max_abs_delta_n", max_n},
                         {"max_linf_husimi", max_linf},
                         {"max_relative_linf_husimi", max_rel},
                         {"oracle_max_norm_drift", oracle.max_norm_drift}}},
                       {"records", records}};
  write_json(out / "report.json", report);
  return report;
}

// ---------------------------------------------------------------------------
// phasespace

std::filesystem::path run_phasespace(const ScenarioConfig& c, double t, const std::string& kind,
                                     const std::filesystem::path& out) {
  if (kind != "wigner" && kind != "husimi" && kind != "swe-density") {
    throw InvalidArgument("phasespace: kind must be wigner, husimi or swe-density");
  }
  std::filesystem::create_directories(out);
  const CompositeSpace space = c.space();
  const PhaseGrid grid = c.grid();

  PhaseFunction field(grid, std::vector<double>(grid.node_count(), 0.0), PhaseKind::generic);
  if (kind == "swe-density") {
    field = field_density(as_grid(evolve_swe(c, t), grid));
  } else {
    const CompositeState psi =
        t == 0.0 ? c.initial_state() : evolve_unitary(c.model, c.initial_state(), horizon(c, t)).states.back();
    const ComplexMatrix rho_field = partial_trace_atom(density_operator(psi), space);
    field = kind == "wigner" ? wigner(rho_field, grid) : husimi(rho_field, grid);
  }
  const auto path = out / ("field_" + kind + "_t" + format_double(t) + ".csv");
  std::ofstream csv = open_output(path);
  write_csv(csv, field, t);
  return path;
}

// ---------------------------------------------------------------------------
// verify

VerifyResult run_verify(const ScenarioConfig& c, const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  IdentityLog log;
  std::mt19937_64 rng(c.seed);
  const PhaseGrid grid = c.grid();
  const CompositeSpace space = c.space();
  const GaussianKernel kernel{c.kernel_variance};
  const double tol = grid.tol_grid();
  const FockBasis& basis = space.fock();
  const CompositeSpace field_space(1, basis);
  const int field_support = std::min(basis.dim(), 5);

  auto guarded = [&](const std::string& name, const auto& body) {
    try {
      body();
    } catch (const std::exception& e) {
      log.fail(name, e.what());
    }
  };

  guarded("superop_commutativity", [&] {
    double err = 0.0;
    for (int k = 0; k < 20; ++k) {
      const ComplexMatrix o = random_operator(rng, basis.dim(), basis.n_max() - 1);
      const ComplexMatrix lhs = superop_annihilation(superop_creation(o, field_space), field_space);
      const ComplexMatrix rhs = superop_creation(superop_annihilation(o, field_space), field_space);
      err = std::max(err, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    log.add("superop_commutativity", err, 1e-10);
  });

  guarded("characteristic_function_routes", [&] {
    const FockBasis big(std::max(24, basis.n_max()));
    std::uniform_real_distribution<double> r(0.0, 1.0), phi(0.0, 2.0 * kPi);
    double err = 0.0;
    for (int k = 0; k < 20; ++k) {
      const ComplexMatrix rho = random_field_density(rng, big.dim(), std::min(basis.dim(), 8));
      const Complex lambda = std::polar(r(rng), phi(rng));
      err = std::max(err, std::abs(characteristic_function(rho, lambda).value -
                                   superop_characteristic_function(rho, lambda, big).value));
    }
    log.add("characteristic_function_routes", err, 1e-8);
  });

  guarded("wigner_vacuum", [&] {
    ComplexMatrix vac = ComplexMatrix::Zero(basis.dim(), basis.dim());
    vac(0, 0) = 1.0;
    const PhaseFunction w = wigner(vac, grid);
    double err = 0.0;
    for (int node = 0; node < grid.node_count(); ++node)
      err = std::max(err, std::abs(w.values[node] - 2.0 / kPi * std::exp(-2.0 * std::norm(grid.point(node)))));
    log.add("wigner_vacuum", err, 1e-6);
  });

  guarded("wigner_fock1_origin", [&] {
    ComplexMatrix one = ComplexMatrix::Zero(basis.dim(), basis.dim());
    one(1, 1) = 1.0;
    const PhaseFunction w = wigner(one, grid);
    const int origin = grid.nearest_node(0.0);
    const double expected = -2.0 / kPi * std::exp(-2.0 * std::norm(grid.point(origin))) *
                            (1.0 - 4.0 * std::norm(grid.point(origin)));
    log.add("wigner_fock1_origin", std::abs(w.values[origin] - expected), 1e-4, {{"value", w.values[origin]}});
  });

  guarded("kernel_moments", [&] {
    const auto w = kernel.sampled(grid);
    const int m = grid.points();
    double mass = 0.0, second = 0.0;
    for (int r = 0; r < m; ++r)
      for (int col = 0; col < m; ++col) {
        const double x = (r < m / 2 ? r : r - m) * grid.spacing();
        const double y = (col < m / 2 ? col : col - m) * grid.spacing();
        mass += w[r * m + col] * grid.weight();
        second += (x * x + y * y) * w[r * m + col] * grid.weight();
      }
    log.add("kernel_moments", std::max(std::abs(mass - 1.0), std::abs(second - 0.5)), tol,
            {{"mass", mass}, {"second_moment", second}});
  });

  guarded("husimi_two_route", [&] {
    double err = 0.0, min_eig = 0.0;
    for (int k = 0; k < 5; ++k) {
      const ComplexMatrix rho = density_operator(random_composite_state(rng, space, std::min(basis.dim(), 9)));
      const OperatorPhaseField q = husimi_density(rho, space, grid);
      err = std::max(err, max_abs_diff(q, coarse_grain(sharp_density(rho, space, grid), kernel)));
      for (int node = 0; node < grid.node_count(); node += 5) {
        min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<ComplexMatrix>(q.node_matrix(node)).eigenvalues().minCoeff());
      }
    }
    log.add("husimi_two_route", err, 5.0 * tol);
    log.add("husimi_positivity", -min_eig, 1e-10);
  });

  guarded("symmetric_moments", [&] {
    double err_sharp = 0.0, err_coarse = 0.0, err_shift = 0.0;
    const ComplexMatrix proj = excited_projector(space.atom_dim());
    const auto shifted = SemiclassicalObservable::polynomial({{1, 1, 1.0}, {0, 0, 0.5}});
    for (int k = 0; k < 3; ++k) {
      const ComplexMatrix rho = density_operator(random_composite_state(rng, space, field_support));
      const OperatorPhaseField sharp = sharp_density(rho, space, grid);
      const OperatorPhaseField coarse = husimi_density(rho, space, grid);
      for (int p = 0; p <= 2; ++p)
        for (int q = 0; p + q <= 2; ++q)
          for (const auto& f : {SemiclassicalObservable::polynomial({{p, q, 1.0}}),
                                SemiclassicalObservable::polynomial({{p, q, 1.0}}).with_atomic(proj)}) {
            err_sharp = std::max(err_sharp, std::abs(symmetric_moment_oracle(f, rho, space) - semiclassical_expectation(f, sharp)));
            err_coarse = std::max(err_coarse, std::abs(symmetric_moment_oracle(coarse_grain(f, kernel), rho, space) -
                                                       semiclassical_expectation(f, coarse)));
          }
      err_shift = std::max(err_shift, std::abs(symmetric_moment_oracle(shifted, rho, space) -
                                               semiclassical_expectation(SemiclassicalObservable::modulus_squared(), coarse)));
    }
    log.add("symmetric_moments_sharp", err_sharp, 1e-5);
    log.add("symmetric_moments_coarse", err_coarse, 1e-5);
    log.add("number_operator_shift", err_shift, 1e-5);
  });

  guarded("photon_number_identity", [&] {
    double err = 0.0;
    auto check = [&](const ComplexMatrix& rho_field) {
      const double n = (number_operator(basis) * rho_field).trace().real();
      err = std::max(err, std::abs(photon_number_from_husimi(husimi(rho_field, grid)) - n));
    };
    for (const ComplexVector& v :
         {fock_amplitudes(0, basis), fock_amplitudes(1, basis), coherent_amplitudes(1.0, basis)})
      check(v * v.adjoint());
    const TimeGrid h{0.0, c.time.t_end, c.time.dt, std::max(1, c.time.steps() / 8)};
    const UnitaryTrajectory u = evolve_unitary(c.model, c.initial_state(), h);
    for (const auto& s : u.states) check(partial_trace_atom(density_operator(s), space));
    log.add("photon_number_identity", err, 1e-4);
  });

  std::optional<GridWave> final_wave;
  guarded("swe_equivalence", [&] {
    const UnitaryTrajectory oracle = evolve_unitary(c.model, c.initial_state(), c.time);
    const std::vector<SemiclassicalWave> waves = evolve_swe_snapshots(c, c.time);
    const bool bargmann = c.backend == "bargmann";
    double linf = 0.0, peak = 0.0, prob = 0.0, moment = 0.0, marginal = 0.0;
    for (size_t k = 0; k < waves.size(); ++k) {
      const ComplexMatrix rho = density_operator(oracle.states[k]);
      const ComparisonReport cmp = compare_to_oracle(waves[k], oracle.states[k], grid);
      linf = std::max(linf, cmp.linf);
      peak = std::max(peak, cmp.max_node_value);
      prob = std::max(prob, std::abs(total_probability(waves[k]) - 1.0));
      const GridWave w = as_grid(waves[k], grid);
      moment = std::max(moment, std::abs(swe_expectation(w, SemiclassicalObservable::modulus_squared()).real() - 1.0 -
                                         photon_number(rho, space)));
      marginal = std::max(marginal, (wave_density(w).integral() - partial_trace_field(rho, space)).cwiseAbs().maxCoeff());
      if (k + 1 == waves.size()) final_wave = w;
    }
    log.add("swe_husimi_equivalence", linf, bargmann ? 1e-7 : 1e-3 * peak, {{"backend", c.backend}});
    log.add("swe_total_probability", prob, bargmann ? 1e-10 : tol);
    log.add("swe_number_moment", moment, bargmann ? 1e-5 : 1e-3);
    log.add("swe_atomic_marginal", marginal, bargmann ? 1e-6 : 1e-3);
  });

  if (c.sample_count > 1) {
    guarded("sampling_consistency", [&] {
      const GridWave w = final_wave ? *final_wave : as_grid(evolve_swe(c, c.time.t_end), grid);
      const auto samples = sample_field(w, c.sample_count, c.seed);
      double s = 0.0, s2 = 0.0;
      for (const auto& x : samples) {
        s += std::norm(x.a);
        s2 += std::pow(std::norm(x.a), 2);
      }
      const double n = static_cast<double>(samples.size());
      const double mean = s / n;
      const double se = std::sqrt(std::max(0.0, s2 / n - mean * mean) / n);
      const double exact = swe_expectation(w, SemiclassicalObservable::modulus_squared()).real();
      log.add("sampling_consistency", std::abs(mean - exact), 3.0 * se, {{"estimate", mean}, {"quadrature", exact}});
    });
  }

  VerifyResult result;
  result.passed = log.passed();
  result.report = {{"config", to_json(c)}, {"passed", result.passed}, {"identities", log.entries()}};
  write_json(out / "verify.json", result.report);
  return result;
}

// ---------------------------------------------------------------------------
// sample

json run_sample(const ScenarioConfig& c, double t, const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  const GridWave w = as_grid(evolve_swe(c, t), c.grid());
  const auto samples = sample_field(w, c.sample_count, c.seed);

  std::ofstream csv = open_output(out / "samples.csv");
  csv << "index,x,y";
  for (int i = 0; i < w.atom_dim; ++i) csv << ",re_" << i << ",im_" << i;
  csv << '\n';
  double s = 0.0, s2 = 0.0;
  for (size_t k = 0; k < samples.size(); ++k) {
    const auto& x = samples[k];
    csv << k << ',' << format_double(x.a.real()) << ',' << format_double(x.a.imag());
    for (int i = 0; i < w.atom_dim; ++i) {
      csv << ',' << format_double(x.conditional_state(i).real()) << ',' << format_double(x.conditional_state(i).imag());
    }
    csv << '\n';
    s += std::norm(x.a);
    s2 += std::pow(std::norm(x.a), 2);
  }
  const double n = static_cast<double>(samples.size());
  const double mean = n > 0 ? s / n : 0.0;
  const double se = n > 1 ? std::sqrt(std::max(0.0, s2 / n - mean * mean) / n) : 0.0;
  const double exact = swe_expectation(w, SemiclassicalObservable::modulus_squared()).real();
  const json summary = {{"config", to_json(c)},
                        {"time", t},
                        {"count", samples.size()},
                        {"seed", c.seed},
                        {"mean_abs_a_squared", mean},
                        {"standard_error", se},
                        {"quadrature_abs_a_squared", exact},
                        {"within_3_standard_errors", std::abs(mean - exact) <= 3.0 * se}};
  write_json(out / "sample_summary.json", summary);
  return summary;
}

}  // namespace sweq::cli
