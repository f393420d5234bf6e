#include "sweq/io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace sweq {

namespace {

void write_header(std::ostream& out, const std::string& kind, const PhaseGrid& grid, int dim, double time) {
  out << "# kind=" << kind << '\n'
      << "# extent=" << format_double(grid.extent()) << '\n'
      << "# points=" << grid.points() << '\n'
      << "# dim=" << dim << '\n'
      << "# time=" << format_double(time) << '\n';
}

struct Header {
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
};

Header read_header(std::istream& in) {
  Header h;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw InvalidArgument("csv: malformed metadata line: " + line);
      h.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) h.columns.push_back(col);
    return h;
  }
  throw InvalidArgument("csv: missing column header");
}

const std::string& meta(const Header& h, const std::string& key) {
  const auto it = h.meta.find(key);
  if (it == h.meta.end()) throw InvalidArgument("csv: missing metadata key '" + key + "'");
  return it->second;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InvalidArgument("csv: bad number '" + s + "'");
  return v;
}

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) row.push_back(parse_double(cell));
  return row;
}

PhaseGrid grid_from(const Header& h) {
  return PhaseGrid(parse_double(meta(h, "extent")), std::stoi(meta(h, "points")));
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void write_csv(std::ostream& out, const PhaseFunction& f, double time) {
  write_header(out, to_string(f.kind), f.grid, 1, time);
  out << "x,y,value\n";
  for (int node = 0; node < f.grid.node_count(); ++node) {
    const Complex a = f.grid.point(node);
    out << format_double(a.real()) << ',' << format_double(a.imag()) << ',' << format_double(f.values[node]) << '\n';
  }
}

void write_csv(std::ostream& out, const OperatorPhaseField& f, double time) {
  write_header(out, "operator", f.grid, f.dim, time);
  out << "x,y";
  for (int i = 0; i < f.dim; ++i)
    for (int j = 0; j < f.dim; ++j) out << ",re_" << i << j << ",im_" << i << j;
  out << '\n';
  for (int node = 0; node < f.grid.node_count(); ++node) {
    const Complex a = f.grid.point(node);
    out << format_double(a.real()) << ',' << format_double(a.imag());
    for (int i = 0; i < f.dim; ++i)
      for (int j = 0; j < f.dim; ++j) {
        const Complex v = f.at(i, j, node);
        out << ',' << format_double(v.real()) << ',' << format_double(v.imag());
      }
    out << '\n';
  }
}

void write_csv(std::ostream& out, const GridWave& w) {
  write_header(out, "wave", w.grid, w.atom_dim, w.time);
  out << "x,y";
  for (int c = 0; c < w.atom_dim; ++c) out << ",re_" << c << ",im_" << c;
  out << '\n';
  for (int node = 0; node < w.grid.node_count(); ++node) {
    const Complex a = w.grid.point(node);
    out << format_double(a.real()) << ',' << format_double(a.imag());
    for (int c = 0; c < w.atom_dim; ++c) {
      const Complex v = w.at(c, node);
      out << ',' << format_double(v.real()) << ',' << format_double(v.imag());
    }
    out << '\n';
  }
}

LoadedPhaseFunction read_phase_function_csv(std::istream& in) {
  const Header h = read_header(in);
  const PhaseGrid grid = grid_from(h);
  const PhaseKind kind = phase_kind_from_string(meta(h, "kind"));
  if (h.columns.size() != 3) throw InvalidArgument("csv: expected columns x,y,value");
  std::vector<double> values;
  values.reserve(grid.node_count());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto row = parse_row(line);
    if (row.size() != 3) throw InvalidArgument("csv: row has wrong column count");
    values.push_back(row[2]);
  }
  return {PhaseFunction(grid, std::move(values), kind), parse_double(meta(h, "time"))};
}

GridWave read_wave_csv(std::istream& in) {
  const Header h = read_header(in);
  if (meta(h, "kind") != "wave") throw InvalidArgument("csv: not a wave file");
  const PhaseGrid grid = grid_from(h);
  const int dim = std::stoi(meta(h, "dim"));
  GridWave w(grid, dim, parse_double(meta(h, "time")));
  std::string line;
  int node = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto row = parse_row(line);
    if (row.size() != static_cast<size_t>(2 + 2 * dim) || node >= grid.node_count()) {
      throw InvalidArgument("csv: wave row does not match metadata");
    }
    for (int c = 0; c < dim; ++c) w.at(c, node) = Complex(row[2 + 2 * c], row[3 + 2 * c]);
    ++node;
  }
  if (node != grid.node_count()) throw InvalidArgument("csv: wave file is truncated");
  return w;
}

nlohmann::json to_json(const ComparisonReport& report) {
  nlohmann::json moments = nlohmann::json::object();
  for (const auto& [name, m] : report.moments) {
    moments[name] = {{"swe", {m.swe.real(), m.swe.imag()}},
                     {"oracle", {m.oracle.real(), m.oracle.imag()}},
                     {"delta", m.delta}};
  }
  return {{"linf", report.linf}, {"l2", report.l2}, {"max_node_value", report.max_node_value}, {"moments", moments}};
}

}  // namespace sweq
