#include "sweq/phasespace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sweq/fft.hpp"

namespace sweq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxBoundaryMass = 1e-8;

int signed_index(int k, int m) { return k < m / 2 ? k : k - m; }

double parity(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// Fourier inversion of characteristic-function planes sampled on the λ grid
// conjugate to `grid`. chi(λ) receives one λ and returns one value per plane.
std::vector<std::vector<Complex>> invert_characteristic(
    const PhaseGrid& grid, int planes, const std::function<void(Complex, std::span<Complex>)>& chi) {
  const int m = grid.points();
  const double delta = kPi / (m * grid.spacing());
  std::vector<std::vector<Complex>> out(planes, std::vector<Complex>(grid.node_count()));
  std::vector<Complex> values(planes);
  for (int r = 0; r < m; ++r) {
    const int q = signed_index(r, m);
    for (int c = 0; c < m; ++c) {
      const int p = -signed_index(c, m);
      chi(Complex(p * delta, q * delta), values);
      const double sign = parity(std::abs(p + q));
      for (int b = 0; b < planes; ++b) out[b][r * m + c] = sign * values[b];
    }
  }
  const Fft2d fft(m);
  const double scale = delta * delta / (kPi * kPi);
  for (auto& plane : out) {
    fft.forward(plane);
    for (auto& v : plane) v *= scale;
  }
  return out;
}

void convolve_planes(const PhaseGrid& grid, const GaussianKernel& kernel, std::vector<std::span<Complex>> planes) {
  const int m = grid.points();
  const Fft2d fft(m);
  std::vector<double> w = kernel.sampled(grid);
  std::vector<Complex> w_hat(w.begin(), w.end());
  fft.forward(w_hat);
  const double scale = grid.weight() / (static_cast<double>(m) * m);
  for (auto plane : planes) {
    fft.forward(plane);
    for (size_t k = 0; k < plane.size(); ++k) plane[k] *= w_hat[k] * scale;
    fft.backward(plane);
  }
}

ComplexVector coherent_vector(Complex a, int dim) {
  ComplexVector c(dim);
  c(0) = std::exp(-std::norm(a) / 2.0);
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * a / std::sqrt(static_cast<double>(n));
  return c;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// PhaseGrid

PhaseGrid::PhaseGrid(double extent, int points_per_axis) : extent_(extent), points_(points_per_axis) {
  if (!(extent > 0.0) || !std::isfinite(extent)) throw InvalidArgument("PhaseGrid: extent must be > 0");
  if (points_per_axis < 32 || !std::has_single_bit(static_cast<unsigned>(points_per_axis))) {
    throw InvalidArgument("PhaseGrid: points_per_axis must be a power of two >= 32");
  }
}

bool PhaseGrid::on_boundary(int node) const {
  const int ix = node / points_;
  const int iy = node % points_;
  return ix == 0 || iy == 0 || ix == points_ - 1 || iy == points_ - 1;
}

int PhaseGrid::nearest_node(Complex a) const {
  auto index = [&](double v) {
    const long k = std::lround((v + extent_) / spacing());
    return static_cast<int>(std::clamp<long>(k, 0, points_ - 1));
  };
  return node(index(a.real()), index(a.imag()));
}

double PhaseGrid::tol_grid() const {
  const double h_default = 2.0 * kDefaultExtent / kDefaultPoints;
  const double ratio = spacing() / h_default;
  return 1e-4 * ratio * ratio;
}

const char* to_string(PhaseKind kind) {
  switch (kind) {
    case PhaseKind::wigner: return "wigner";
    case PhaseKind::husimi: return "husimi";
    case PhaseKind::generic: return "generic";
  }
  return "generic";
}

PhaseKind phase_kind_from_string(const std::string& name) {
  if (name == "wigner") return PhaseKind::wigner;
  if (name == "husimi") return PhaseKind::husimi;
  if (name == "generic") return PhaseKind::generic;
  throw InvalidArgument("unknown phase-function kind: " + name);
}

// ---------------------------------------------------------------------------
// Fields

PhaseFunction::PhaseFunction(PhaseGrid g, std::vector<double> v, PhaseKind k)
    : grid(g), values(std::move(v)), kind(k) {
  if (values.size() != static_cast<size_t>(grid.node_count())) {
    throw InvalidArgument("PhaseFunction: value count does not match grid");
  }
}

double PhaseFunction::integral() const {
  return std::accumulate(values.begin(), values.end(), 0.0) * grid.weight();
}

double PhaseFunction::min() const { return *std::min_element(values.begin(), values.end()); }
double PhaseFunction::max() const { return *std::max_element(values.begin(), values.end()); }

OperatorPhaseField::OperatorPhaseField(PhaseGrid g, int d)
    : grid(g), dim(d), data(static_cast<size_t>(d) * d * g.node_count()) {
  if (d < 1) throw InvalidArgument("OperatorPhaseField: dimension must be >= 1");
}

ComplexMatrix OperatorPhaseField::node_matrix(int node) const {
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = at(i, j, node);
  return m;
}

ComplexMatrix OperatorPhaseField::integral() const {
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const auto p = plane(i, j);
      m(i, j) = std::accumulate(p.begin(), p.end(), Complex{}) * grid.weight();
    }
  return m;
}

PhaseFunction OperatorPhaseField::trace_atom(PhaseKind kind) const {
  std::vector<double> v(grid.node_count(), 0.0);
  for (int i = 0; i < dim; ++i) {
    const auto p = plane(i, i);
    for (size_t k = 0; k < v.size(); ++k) v[k] += p[k].real();
  }
  return PhaseFunction(grid, std::move(v), kind);
}

double boundary_mass(const PhaseFunction& f) {
  double s = 0.0;
  for (int k = 0; k < f.grid.node_count(); ++k)
    if (f.grid.on_boundary(k)) s += std::abs(f.values[k]);
  return s * f.grid.weight();
}

double boundary_mass(const OperatorPhaseField& f) {
  double s = 0.0;
  for (int k = 0; k < f.grid.node_count(); ++k) {
    if (!f.grid.on_boundary(k)) continue;
    for (int i = 0; i < f.dim; ++i)
      for (int j = 0; j < f.dim; ++j) s += std::abs(f.at(i, j, k));
  }
  return s * f.grid.weight();
}

// ---------------------------------------------------------------------------
// Characteristic functions

CharacteristicSample characteristic_function(const ComplexMatrix& rho_field, Complex lambda) {
  if (rho_field.rows() != rho_field.cols()) throw InvalidArgument("characteristic_function: ρ must be square");
  const FockBasis basis(static_cast<int>(rho_field.rows()) - 1);
  const ComplexMatrix a = annihilation(basis);
  const ComplexMatrix generator = lambda * a.adjoint() - std::conj(lambda) * a;
  return {lambda, (expm(generator) * rho_field).trace()};
}

CharacteristicSample superop_characteristic_function(const ComplexMatrix& rho, Complex lambda,
                                                     const FockBasis& basis) {
  return {lambda, superop_weyl_apply(lambda, rho, basis).trace()};
}

ComplexMatrix displacement_matrix(Complex alpha, int dim) {
  ComplexMatrix d(dim, dim);
  const Complex alpha_conj = std::conj(alpha);
  d(0, 0) = std::exp(-std::norm(alpha) / 2.0);
  for (int m = 1; m < dim; ++m) d(m, 0) = d(m - 1, 0) * alpha / std::sqrt(static_cast<double>(m));
  // â†D = D(â† + α*)  ⇒  D[m][n+1] = (√m D[m−1][n] − α* D[m][n]) / √(n+1)
  for (int n = 0; n + 1 < dim; ++n) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(n + 1));
    d(0, n + 1) = -alpha_conj * d(0, n) * inv;
    for (int m = 1; m < dim; ++m)
      d(m, n + 1) = (std::sqrt(static_cast<double>(m)) * d(m - 1, n) - alpha_conj * d(m, n)) * inv;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Wigner / sharp density

OperatorPhaseField sharp_density(const ComplexMatrix& rho, const CompositeSpace& space, const PhaseGrid& grid) {
  if (rho.rows() != space.total_dim() || rho.cols() != space.total_dim()) {
    throw InvalidArgument("sharp_density: operator does not match composite space");
  }
  const int d = space.atom_dim();
  const int nf = space.fock_dim();
  // χ_ij(λ) = tr(D(λ) ρ_ij) = Σ_{m,n} D[m][n] ρ_ij[n][m]
  std::vector<ComplexMatrix> blocks_t;
  blocks_t.reserve(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) blocks_t.push_back(rho.block(i * nf, j * nf, nf, nf).transpose());

  auto planes = invert_characteristic(grid, d * d, [&](Complex lambda, std::span<Complex> out) {
    const ComplexMatrix disp = displacement_matrix(lambda, nf);
    for (size_t b = 0; b < blocks_t.size(); ++b) out[b] = disp.cwiseProduct(blocks_t[b]).sum();
  });

  OperatorPhaseField field(grid, d);
  for (int b = 0; b < d * d; ++b) std::copy(planes[b].begin(), planes[b].end(), field.plane(b / d, b % d).begin());

  const double norm = field.integral().trace().real();
  if (norm < 0.99 || norm > 1.01) {
    throw SolverError("sharp_density: quadrature normalization " + std::to_string(norm) +
                      " outside [0.99, 1.01]; grid too small for this state");
  }
  return field;
}

PhaseFunction wigner(const ComplexMatrix& rho_field, const PhaseGrid& grid) {
  if (rho_field.rows() != rho_field.cols()) throw InvalidArgument("wigner: ρ must be square");
  const CompositeSpace space(1, FockBasis(static_cast<int>(rho_field.rows()) - 1));
  return sharp_density(rho_field, space, grid).trace_atom(PhaseKind::wigner);
}

// ---------------------------------------------------------------------------
// Coarse-graining

double GaussianKernel::operator()(Complex a0) const {
  return std::exp(-std::norm(a0) / variance) / (kPi * variance);
}

std::vector<double> GaussianKernel::sampled(const PhaseGrid& grid) const {
  const int m = grid.points();
  const double h = grid.spacing();
  std::vector<double> w(grid.node_count());
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) w[r * m + c] = (*this)(Complex(signed_index(r, m) * h, signed_index(c, m) * h));
  return w;
}

PhaseFunction coarse_grain(const PhaseFunction& f, const GaussianKernel& kernel) {
  if (const double mass = boundary_mass(f); mass > kMaxBoundaryMass) {
    throw SolverError("coarse_grain: boundary mass " + std::to_string(mass) + " exceeds 1e-8");
  }
  std::vector<Complex> plane(f.values.begin(), f.values.end());
  convolve_planes(f.grid, kernel, {std::span<Complex>(plane)});
  std::vector<double> out(plane.size());
  std::transform(plane.begin(), plane.end(), out.begin(), [](Complex v) { return v.real(); });
  const PhaseKind kind = f.kind == PhaseKind::generic ? PhaseKind::generic : PhaseKind::husimi;
  return PhaseFunction(f.grid, std::move(out), kind);
}

OperatorPhaseField coarse_grain(const OperatorPhaseField& f, const GaussianKernel& kernel) {
  if (const double mass = boundary_mass(f); mass > kMaxBoundaryMass) {
    throw SolverError("coarse_grain: boundary mass " + std::to_string(mass) + " exceeds 1e-8");
  }
  OperatorPhaseField out = f;
  out.flagged_nodes.clear();
  std::vector<std::span<Complex>> planes;
  for (int i = 0; i < f.dim; ++i)
    for (int j = 0; j < f.dim; ++j) planes.push_back(out.plane(i, j));
  convolve_planes(f.grid, kernel, planes);
  return out;
}

SemiclassicalObservable coarse_grain(const SemiclassicalObservable& f, const GaussianKernel& kernel) {
  SemiclassicalObservable out = [&] {
    if (f.is_polynomial()) {
      // E[(a+z)^p (a*+z*)^q] = Σ_k C(p,k) C(q,k) k! v^k a^{p−k} (a*)^{q−k}
      std::vector<Monomial> terms;
      for (const auto& t : f.terms()) {
        double factorial = 1.0;
        for (int k = 0; k <= std::min(t.a_power, t.conj_power); ++k) {
          if (k > 0) factorial *= k;
          const double w = binomial(t.a_power, k) * binomial(t.conj_power, k) * factorial *
                           std::pow(kernel.variance, k);
          terms.push_back({t.a_power - k, t.conj_power - k, t.coeff * w});
        }
      }
      return SemiclassicalObservable::polynomial(std::move(terms));
    }
    // Patch quadrature over |a0| ≤ 8σ with spacing ≤ σ/4.
    const double sigma = std::sqrt(kernel.variance / 2.0);
    const double step = sigma / 4.0;
    const int half = static_cast<int>(std::ceil(8.0 * sigma / step));
    std::vector<std::pair<Complex, double>> patch;
    double total = 0.0;
    for (int r = -half; r <= half; ++r)
      for (int c = -half; c <= half; ++c) {
        const Complex a0(r * step, c * step);
        const double w = kernel(a0) * step * step;
        patch.emplace_back(a0, w);
        total += w;
      }
    for (auto& p : patch) p.second /= total;
    return SemiclassicalObservable::from_symbol([f, patch = std::move(patch)](Complex a) {
      Complex s{};
      for (const auto& [a0, w] : patch) s += w * f.scalar(a + a0);
      return s;
    });
  }();
  return f.atomic() ? out.with_atomic(*f.atomic()) : out;
}

// ---------------------------------------------------------------------------
// Husimi

OperatorPhaseField husimi_density(const ComplexMatrix& rho, const CompositeSpace& space, const PhaseGrid& grid) {
  if (rho.rows() != space.total_dim() || rho.cols() != space.total_dim()) {
    throw InvalidArgument("husimi_density: operator does not match composite space");
  }
  const int d = space.atom_dim();
  const int nf = space.fock_dim();
  const double radius = std::sqrt(static_cast<double>(space.fock().n_max())) / 2.0;
  OperatorPhaseField field(grid, d);
  ComplexMatrix lifted = ComplexMatrix::Zero(space.total_dim(), d);
  for (int node = 0; node < grid.node_count(); ++node) {
    const Complex a = grid.point(node);
    const ComplexVector c = coherent_vector(a, nf);
    if (std::abs(a) > radius && 1.0 - c.squaredNorm() > 1e-10) field.flagged_nodes.push_back(node);
    for (int i = 0; i < d; ++i) lifted.block(i * nf, i, nf, 1) = c;
    const ComplexMatrix q = lifted.adjoint() * rho * lifted / kPi;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) field.at(i, j, node) = q(i, j);
  }
  return field;
}

PhaseFunction husimi(const ComplexMatrix& rho_field, const PhaseGrid& grid) {
  if (rho_field.rows() != rho_field.cols()) throw InvalidArgument("husimi: ρ must be square");
  const CompositeSpace space(1, FockBasis(static_cast<int>(rho_field.rows()) - 1));
  return husimi_density(rho_field, space, grid).trace_atom(PhaseKind::husimi);
}

// ---------------------------------------------------------------------------
// Observables

SemiclassicalObservable SemiclassicalObservable::polynomial(std::vector<Monomial> terms) {
  for (const auto& t : terms)
    if (t.a_power < 0 || t.conj_power < 0) throw InvalidArgument("polynomial: negative power");
  SemiclassicalObservable o;
  o.symbol_ = [terms](Complex a) {
    Complex s{};
    for (const auto& t : terms) s += t.coeff * std::pow(a, t.a_power) * std::pow(std::conj(a), t.conj_power);
    return s;
  };
  o.terms_ = std::move(terms);
  return o;
}

SemiclassicalObservable SemiclassicalObservable::from_symbol(Symbol f) {
  if (!f) throw InvalidArgument("from_symbol: empty symbol");
  SemiclassicalObservable o;
  o.symbol_ = std::move(f);
  return o;
}

SemiclassicalObservable SemiclassicalObservable::with_atomic(ComplexMatrix atomic) const {
  if (atomic.rows() != atomic.cols()) throw InvalidArgument("with_atomic: atomic factor must be square");
  SemiclassicalObservable o = *this;
  o.atomic_ = std::move(atomic);
  return o;
}

const std::vector<Monomial>& SemiclassicalObservable::terms() const {
  if (!terms_) throw InvalidArgument("observable has no polynomial form");
  return *terms_;
}

int SemiclassicalObservable::degree() const {
  int deg = 0;
  for (const auto& t : terms()) deg = std::max(deg, t.a_power + t.conj_power);
  return deg;
}

Complex SemiclassicalObservable::trace_with(Complex a, const ComplexMatrix& m) const {
  const Complex f = symbol_(a);
  if (!atomic_) return f * m.trace();
  if (atomic_->rows() != m.rows()) throw InvalidArgument("observable atomic factor does not match field dimension");
  return f * atomic_->cwiseProduct(m.transpose()).sum();
}

Complex semiclassical_expectation(const SemiclassicalObservable& f, const OperatorPhaseField& field) {
  if (f.atomic() && f.atomic()->rows() != field.dim) {
    throw InvalidArgument("semiclassical_expectation: atomic factor does not match field dimension");
  }
  Complex s{};
  for (int node = 0; node < field.grid.node_count(); ++node) {
    const Complex a = field.grid.point(node);
    Complex tr{};
    if (f.atomic()) {
      for (int i = 0; i < field.dim; ++i)
        for (int j = 0; j < field.dim; ++j) tr += (*f.atomic())(i, j) * field.at(j, i, node);
    } else {
      for (int i = 0; i < field.dim; ++i) tr += field.at(i, i, node);
    }
    s += f.scalar(a) * tr;
  }
  return s * field.grid.weight();
}

Complex semiclassical_expectation(const SemiclassicalObservable& f, const PhaseFunction& field) {
  if (f.atomic()) throw InvalidArgument("semiclassical_expectation: scalar field needs a scalar observable");
  Complex s{};
  for (int node = 0; node < field.grid.node_count(); ++node) s += f.scalar(field.grid.point(node)) * field.values[node];
  return s * field.grid.weight();
}

double photon_number_from_husimi(const PhaseFunction& q) {
  if (q.kind != PhaseKind::husimi) throw InvalidArgument("photon_number_from_husimi: expects a Husimi function");
  return semiclassical_expectation(SemiclassicalObservable::modulus_squared(), q).real() - 1.0;
}

Complex symmetric_moment_oracle(const SemiclassicalObservable& f, const ComplexMatrix& rho,
                                const CompositeSpace& space) {
  if (!f.is_polynomial()) throw InvalidArgument("symmetric_moment_oracle: observable must be polynomial");
  const int degree = f.degree();
  const CompositeSpace padded(space.atom_dim(), FockBasis(space.fock().n_max() + degree));
  const ComplexMatrix rho_padded = embed(rho, space, padded);
  const ComplexMatrix a = lift_field(annihilation(padded.fock()), padded);
  const ComplexMatrix ad = a.adjoint();
  const ComplexMatrix atomic =
      f.atomic() ? lift_atom(*f.atomic(), padded) : ComplexMatrix::Identity(padded.total_dim(), padded.total_dim());
  if (atomic.rows() != padded.total_dim()) {
    throw InvalidArgument("symmetric_moment_oracle: atomic factor does not match space");
  }
  Complex total{};
  for (const auto& t : f.terms()) {
    ComplexMatrix o = rho_padded;
    for (int k = 0; k < t.a_power; ++k) o = symmetric_product(a, o);
    for (int k = 0; k < t.conj_power; ++k) o = symmetric_product(ad, o);
    total += t.coeff * (atomic * o).trace();
  }
  return total;
}

Complex symmetric_moment_oracle(const SemiclassicalObservable& f, const ComplexMatrix& rho_field,
                                const FockBasis& basis) {
  return symmetric_moment_oracle(f, rho_field, CompositeSpace(1, basis));
}

}  // namespace sweq
