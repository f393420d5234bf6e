#include "sweq/fockspace.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace sweq {

namespace {

void require_square_same(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw InvalidArgument(std::string(what) + ": operands must be square and of equal dimension");
  }
}

}  // namespace

FockBasis::FockBasis(int n_max) : n_max_(n_max) {
  if (n_max < 2) throw InvalidArgument("FockBasis: n_max must be >= 2");
}

CompositeSpace::CompositeSpace(int atom_dim, FockBasis fock) : atom_dim_(atom_dim), fock_(fock) {
  if (atom_dim < 1) throw InvalidArgument("CompositeSpace: atom_dim must be >= 1");
}

CompositeState::CompositeState(CompositeSpace space, ComplexVector amplitudes)
    : space_(space), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != space_.total_dim()) {
    throw InvalidArgument("CompositeState: amplitude count does not match total_dim");
  }
  if (!amplitudes_.allFinite()) throw InvalidArgument("CompositeState: non-finite amplitude");
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
    throw InvalidArgument("CompositeState: state is not normalized");
  }
}

ComplexMatrix CompositeState::as_matrix() const {
  const int d = space_.atom_dim();
  const int nf = space_.fock_dim();
  ComplexMatrix m(d, nf);
  for (int i = 0; i < d; ++i)
    for (int n = 0; n < nf; ++n) m(i, n) = amplitudes_(space_.index(i, n));
  return m;
}

ComplexMatrix annihilation(const FockBasis& basis) {
  ComplexMatrix a = ComplexMatrix::Zero(basis.dim(), basis.dim());
  for (int n = 1; n <= basis.n_max(); ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

ComplexMatrix creation(const FockBasis& basis) { return annihilation(basis).adjoint(); }

ComplexMatrix number_operator(const FockBasis& basis) {
  ComplexMatrix n = ComplexMatrix::Zero(basis.dim(), basis.dim());
  for (int k = 0; k <= basis.n_max(); ++k) n(k, k) = static_cast<double>(k);
  return n;
}

ComplexMatrix symmetric_product(const ComplexMatrix& a, const ComplexMatrix& o) {
  require_square_same(a, o, "symmetric_product");
  return 0.5 * (a * o + o * a);
}

ComplexMatrix superop_annihilation(const ComplexMatrix& o, const CompositeSpace& space) {
  return symmetric_product(lift_field(annihilation(space.fock()), space), o);
}

ComplexMatrix superop_creation(const ComplexMatrix& o, const CompositeSpace& space) {
  return symmetric_product(lift_field(creation(space.fock()), space), o);
}

ComplexMatrix superop_weyl_apply(Complex lambda, const ComplexMatrix& rho, const FockBasis& basis) {
  const int nf = basis.dim();
  if (rho.rows() != rho.cols() || rho.rows() % nf != 0) {
    throw InvalidArgument("superop_weyl_apply: operator dimension is not a multiple of the Fock dimension");
  }
  const ComplexMatrix a = annihilation(basis);
  const ComplexMatrix ad = creation(basis);
  const ComplexMatrix lower = expm(-std::conj(lambda) * a / 2.0);
  const ComplexMatrix raise = expm(lambda * ad / 2.0);
  ComplexMatrix left = lower * raise;
  ComplexMatrix right = raise * lower;
  if (rho.rows() != nf) {
    const CompositeSpace space(static_cast<int>(rho.rows() / nf), basis);
    left = lift_field(left, space);
    right = lift_field(right, space);
  }
  return left * rho * right;
}

ComplexMatrix partial_trace_field(const ComplexMatrix& o, const CompositeSpace& space) {
  if (o.rows() != space.total_dim() || o.cols() != space.total_dim()) {
    throw InvalidArgument("partial_trace_field: operator does not match composite space");
  }
  const int d = space.atom_dim();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int n = 0; n < space.fock_dim(); ++n) out(i, j) += o(space.index(i, n), space.index(j, n));
  return out;
}

ComplexMatrix partial_trace_atom(const ComplexMatrix& o, const CompositeSpace& space) {
  if (o.rows() != space.total_dim() || o.cols() != space.total_dim()) {
    throw InvalidArgument("partial_trace_atom: operator does not match composite space");
  }
  const int nf = space.fock_dim();
  ComplexMatrix out = ComplexMatrix::Zero(nf, nf);
  for (int i = 0; i < space.atom_dim(); ++i) out += o.block(i * nf, i * nf, nf, nf);
  return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix lift_field(const ComplexMatrix& field_op, const CompositeSpace& space) {
  return tensor(ComplexMatrix::Identity(space.atom_dim(), space.atom_dim()), field_op);
}

ComplexMatrix lift_atom(const ComplexMatrix& atom_op, const CompositeSpace& space) {
  return tensor(atom_op, ComplexMatrix::Identity(space.fock_dim(), space.fock_dim()));
}

ComplexMatrix expm(const ComplexMatrix& m) { return m.exp(); }

ComplexMatrix embed(const ComplexMatrix& o, const CompositeSpace& from, const CompositeSpace& to) {
  if (from.atom_dim() != to.atom_dim() || to.fock_dim() < from.fock_dim()) {
    throw InvalidArgument("embed: target space must share atom_dim and have a larger Fock cutoff");
  }
  if (o.rows() != from.total_dim() || o.cols() != from.total_dim()) {
    throw InvalidArgument("embed: operator does not match source space");
  }
  ComplexMatrix out = ComplexMatrix::Zero(to.total_dim(), to.total_dim());
  const int d = from.atom_dim();
  const int nf = from.fock_dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out.block(to.index(i, 0), to.index(j, 0), nf, nf) = o.block(from.index(i, 0), from.index(j, 0), nf, nf);
  return out;
}

}  // namespace sweq
