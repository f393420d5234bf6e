#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "sweq/scenario.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<double> time;
  std::string kind = "husimi";
  std::optional<std::string> backend;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

sweq::cli::ScenarioConfig resolve(const Options& o) {
  sweq::cli::ScenarioConfig c = o.config.empty() ? sweq::cli::ScenarioConfig{} : sweq::cli::load_config(o.config);
  if (o.backend) c.backend = *o.backend;
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.output_dir = *o.out;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical wave-equation simulator for an atom coupled to one cavity mode"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Scenario JSON (defaults to the resonant two-level preset)")
        ->check(CLI::ExistingFile);
    sub->add_option("--backend", o.backend, "SWE backend")->check(CLI::IsMember({"bargmann", "grid"}));
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--out", o.out, "Output directory");
  };

  auto* rabi = app.add_subcommand("rabi", "Oracle and SWE side by side; writes rabi_timeseries.csv and report.json");
  add_common(rabi);
  auto* phasespace = app.add_subcommand("phasespace", "Write one phase-space field at a given time");
  add_common(phasespace);
  phasespace->add_option("--time", o.time, "Time (defaults to t_end)");
  phasespace->add_option("--kind", o.kind, "Field kind")->check(CLI::IsMember({"wigner", "husimi", "swe-density"}));
  auto* verify = app.add_subcommand("verify", "Check the phase-space and SWE identities; writes verify.json");
  add_common(verify);
  auto* sample = app.add_subcommand("sample", "Sample the field density; writes samples.csv and sample_summary.json");
  add_common(sample);
  sample->add_option("--time", o.time, "Time (defaults to t_end)");

  CLI11_PARSE(app, argc, argv);

  try {
    const sweq::cli::ScenarioConfig c = resolve(o);
    const std::filesystem::path out = c.output_dir;
    const double t = o.time.value_or(c.time.t_end);
    if (rabi->parsed()) {
      const auto report = sweq::cli::run_rabi(c, out);
      std::cout << report.at("summary").dump(2) << '\n';
    } else if (phasespace->parsed()) {
      std::cout << sweq::cli::run_phasespace(c, t, o.kind, out).string() << '\n';
    } else if (verify->parsed()) {
      const auto result = sweq::cli::run_verify(c, out);
      for (const auto& e : result.report.at("identities")) {
        std::cout << (e.at("pass").get<bool>() ? "PASS " : "FAIL ") << e.at("name").get<std::string>();
        if (e.contains("message")) {
          std::cout << "  " << e.at("message").get<std::string>();
        } else {
          std::cout << "  error=" << e.at("error").dump() << " threshold=" << e.at("threshold").dump();
        }
        std::cout << '\n';
      }
      return result.passed ? 0 : 1;
    } else if (sample->parsed()) {
      std::cout << sweq::cli::run_sample(c, t, out).dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "sweq: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
