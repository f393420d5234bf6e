#pragma once

// Truncated Fock-space and composite atom ⊗ mode operator algebra.
//
// Composite index convention: index = atom_index * (n_max + 1) + fock_index.
// Operators on the field factor are lifted with tensor(identity(d), op).

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace sweq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Precondition violations (shape mismatch, unnormalized input, bad config).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical guard failures during a computation (norm drift, truncation
/// overflow, grid too small).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FockBasis {
 public:
  explicit FockBasis(int n_max);

  int n_max() const { return n_max_; }
  int dim() const { return n_max_ + 1; }

  friend bool operator==(const FockBasis&, const FockBasis&) = default;

 private:
  int n_max_;
};

class CompositeSpace {
 public:
  CompositeSpace(int atom_dim, FockBasis fock);

  int atom_dim() const { return atom_dim_; }
  const FockBasis& fock() const { return fock_; }
  int fock_dim() const { return fock_.dim(); }
  int total_dim() const { return atom_dim_ * fock_.dim(); }
  int index(int atom, int n) const { return atom * fock_.dim() + n; }

  friend bool operator==(const CompositeSpace&, const CompositeSpace&) = default;

 private:
  int atom_dim_;
  FockBasis fock_;
};

/// Unit-norm joint pure state of atom ⊗ truncated mode.
class CompositeState {
 public:
  CompositeState(CompositeSpace space, ComplexVector amplitudes);

  const CompositeSpace& space() const { return space_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }

  /// Amplitudes reshaped as atom_dim × fock_dim; column n is the atomic
  /// vector multiplying |n⟩.
  ComplexMatrix as_matrix() const;

 private:
  CompositeSpace space_;
  ComplexVector amplitudes_;
};

ComplexMatrix annihilation(const FockBasis& basis);
ComplexMatrix creation(const FockBasis& basis);
ComplexMatrix number_operator(const FockBasis& basis);

/// {A, O} = ½(AO + OA).
ComplexMatrix symmetric_product(const ComplexMatrix& a, const ComplexMatrix& o);

/// Superoperators â_c and â_c† acting on an operator of the composite space.
ComplexMatrix superop_annihilation(const ComplexMatrix& o, const CompositeSpace& space);
ComplexMatrix superop_creation(const ComplexMatrix& o, const CompositeSpace& space);

/// exp(−λ*â/2) exp(λâ†/2) ρ exp(λâ†/2) exp(−λ*â/2), i.e. the product form of
/// exp(−λ*â_c + λâ_c†)ρ. ρ is either a field operator or a composite operator
/// whose field blocks are transformed (dimension a multiple of basis.dim()).
ComplexMatrix superop_weyl_apply(Complex lambda, const ComplexMatrix& rho, const FockBasis& basis);

/// tr_rad: d×d matrix with entries Σ_n O[(i,n),(j,n)].
ComplexMatrix partial_trace_field(const ComplexMatrix& o, const CompositeSpace& space);

/// tr_ato: fock_dim × fock_dim matrix with entries Σ_i O[(i,m),(i,n)].
ComplexMatrix partial_trace_atom(const ComplexMatrix& o, const CompositeSpace& space);

/// Kronecker product A ⊗ B, consistent with the composite index convention.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// identity(atom_dim) ⊗ op.
ComplexMatrix lift_field(const ComplexMatrix& field_op, const CompositeSpace& space);

/// op ⊗ identity(fock_dim).
ComplexMatrix lift_atom(const ComplexMatrix& atom_op, const CompositeSpace& space);

/// Matrix exponential (Padé scaling-and-squaring).
ComplexMatrix expm(const ComplexMatrix& m);

/// Re-embed a composite operator into a space with a larger Fock cutoff,
/// zero-padding the new occupation levels.
ComplexMatrix embed(const ComplexMatrix& o, const CompositeSpace& from, const CompositeSpace& to);

}  // namespace sweq
