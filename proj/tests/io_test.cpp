#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "support.hpp"
#include "sweq/io.hpp"

using namespace sweq;

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1e3);
  for (int k = 0; k < 1000; ++k) {
    const double v = n(rng) * std::pow(10.0, static_cast<int>(k % 40) - 20);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-2.0) == "-2");
}

TEST_CASE("PhaseFunction CSV round trip") {
  const PhaseGrid grid(3.0, 32);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> values(grid.node_count());
  for (auto& v : values) v = u(rng);
  const PhaseFunction f(grid, values, PhaseKind::wigner);

  std::stringstream ss;
  write_csv(ss, f, 0.785);
  const std::string text = ss.str();
  CHECK(text.rfind("# kind=wigner\n", 0) == 0);
  CHECK(text.find("x,y,value\n") != std::string::npos);

  const LoadedPhaseFunction loaded = read_phase_function_csv(ss);
  CHECK(loaded.time == 0.785);
  CHECK(loaded.field.kind == PhaseKind::wigner);
  CHECK(loaded.field.grid == grid);
  CHECK(loaded.field.values == values);
}

TEST_CASE("GridWave CSV round trip") {
  const PhaseGrid grid(4.0, 32);
  std::mt19937_64 rng(3);
  GridWave w(grid, 3, 1.25);
  for (auto& v : w.values) v = sweq::testing::gaussian_complex(rng);
  std::stringstream ss;
  write_csv(ss, w);
  CHECK(ss.str().find("x,y,re_0,im_0,re_1,im_1,re_2,im_2\n") != std::string::npos);
  const GridWave back = read_wave_csv(ss);
  CHECK(back.grid == grid);
  CHECK(back.atom_dim == 3);
  CHECK(back.time == 1.25);
  CHECK(back.values == w.values);
}

TEST_CASE("OperatorPhaseField CSV layout") {
  const PhaseGrid grid(3.0, 32);
  OperatorPhaseField f(grid, 2);
  f.at(0, 1, 5) = Complex(0.25, -0.5);
  std::stringstream ss;
  write_csv(ss, f, 0.0);
  std::string line;
  int data_lines = 0;
  bool header_seen = false;
  while (std::getline(ss, line)) {
    if (line.starts_with("#")) continue;
    if (!header_seen) {
      CHECK(line == "x,y,re_00,im_00,re_01,im_01,re_10,im_10,re_11,im_11");
      header_seen = true;
      continue;
    }
    if (data_lines == 5) CHECK(line.find(",0.25,-0.5,") != std::string::npos);
    ++data_lines;
  }
  CHECK(data_lines == grid.node_count());
}

TEST_CASE("malformed CSV") {
  std::stringstream empty;
  CHECK_THROWS_AS(read_phase_function_csv(empty), InvalidArgument);
  std::stringstream truncated("# kind=husimi\n# extent=3\n# points=32\n# time=0\nx,y,value\n-3,-3,1\n");
  CHECK_THROWS_AS(read_phase_function_csv(truncated), InvalidArgument);
}

TEST_CASE("ComparisonReport JSON") {
  ComparisonReport r;
  r.linf = 1e-9;
  r.l2 = 2e-10;
  r.max_node_value = 0.3;
  r.moments["|a|^2"] = {Complex(1.5, 0.0), Complex(1.5, 1e-12), 1e-12};
  const nlohmann::json j = to_json(r);
  CHECK(j.at("linf").get<double>() == 1e-9);
  CHECK(j.at("l2").get<double>() == 2e-10);
  CHECK(j.at("max_node_value").get<double>() == 0.3);
  const auto& m = j.at("moments").at("|a|^2");
  CHECK(m.at("swe").at(0).get<double>() == 1.5);
  CHECK(m.at("oracle").at(1).get<double>() == 1e-12);
  CHECK(m.at("delta").get<double>() == 1e-12);
}
