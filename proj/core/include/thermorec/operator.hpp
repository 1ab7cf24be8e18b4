#pragma once

// Dense complex-matrix foundation: validated Hermitian operators and density
// matrices, Kronecker products, partial traces over composite spaces and
// spectral calculus.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "thermorec/config.hpp"

namespace thermorec {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Eigenvalues in descending order with matching eigenvector columns.
struct EigenSystem {
  RealVector values;
  ComplexMatrix vectors;
};

class HermitianOperator {
 public:
  /// Validates ||M - M^dag||_max and stores the symmetrized (M + M^dag)/2.
  explicit HermitianOperator(const ComplexMatrix& m);

  static HermitianOperator diagonal(std::span<const double> entries);
  static HermitianOperator identity(Index dim);
  static HermitianOperator zero(Index dim);

  Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  double trace() const { return matrix_.trace().real(); }

  /// Recomputed on each call; DensityMatrix keeps a cached copy.
  EigenSystem eigen() const;

 private:
  ComplexMatrix matrix_;
};

class DensityMatrix {
 public:
  /// Hermitian, eigenvalues >= -eps_psd and |Tr - 1| <= eps_tr.
  explicit DensityMatrix(const ComplexMatrix& m);
  explicit DensityMatrix(const HermitianOperator& h);

  /// Symmetrizes, clamps negative eigenvalues and renormalizes before
  /// validating. Use for states produced by long numerical pipelines.
  static DensityMatrix normalized(const ComplexMatrix& m);

  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix basis_state(Index dim, Index level);
  static DensityMatrix diagonal(std::span<const double> probabilities);
  static DensityMatrix maximally_mixed(Index dim);

  Index dim() const { return op_.dim(); }
  const ComplexMatrix& matrix() const { return op_.matrix(); }
  const HermitianOperator& op() const { return op_; }

  /// Cached spectrum, descending, with negative eigenvalues clamped to 0.
  const EigenSystem& eigen() const { return *eigen_; }

  /// Number of eigenvalues above the relative rank tolerance.
  Index rank() const;
  bool full_rank() const { return rank() == dim(); }

 private:
  HermitianOperator op_;
  std::shared_ptr<const EigenSystem> eigen_;
};

/// Ordered tensor factors. Global index = sum_i s_i * prod_{j>i} d_j, i.e.
/// the leftmost factor varies slowest (the Kronecker convention).
class CompositeSpace {
 public:
  explicit CompositeSpace(std::vector<Index> factor_dims);

  const std::vector<Index>& factor_dims() const { return dims_; }
  std::size_t factors() const { return dims_.size(); }
  Index total_dim() const { return total_; }

  Index global_index(std::span<const Index> digits) const;
  std::vector<Index> digits(Index global) const;

 private:
  std::vector<Index> dims_;
  Index total_ = 1;
};

// ---- basic matrix helpers ---------------------------------------------------

double max_abs(const ComplexMatrix& m);
bool is_unitary(const ComplexMatrix& u, double tol);
/// Sum of singular values.
double trace_norm(const ComplexMatrix& m);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// dim * lambda_max * rank_relative, lambda_max taken over |eigenvalues|.
double rank_tolerance(const RealVector& eigenvalues);

// ---- operations -------------------------------------------------------------

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix tensor(std::span<const DensityMatrix> factors);

/// Reduced operator on the factors listed in `keep` (kept in their original
/// relative order).
ComplexMatrix partial_trace(const ComplexMatrix& m, const CompositeSpace& space,
                            std::vector<std::size_t> keep);
HermitianOperator partial_trace(const HermitianOperator& m, const CompositeSpace& space,
                                std::vector<std::size_t> keep);
DensityMatrix partial_trace(const DensityMatrix& m, const CompositeSpace& space,
                            std::vector<std::size_t> keep);

/// sum_i f(lambda_i) |v_i><v_i|. With `support_only`, eigenvalues whose
/// magnitude is below the rank tolerance are dropped from the sum. Throws
/// DomainError when f is not finite at a retained eigenvalue.
HermitianOperator matrix_function(const HermitianOperator& m, const std::function<double(double)>& f,
                                  bool support_only);
HermitianOperator matrix_function(const EigenSystem& eig, const std::function<double(double)>& f,
                                  bool support_only);

/// Complex-valued spectral calculus, e.g. imaginary powers theta^{it}.
ComplexMatrix spectral_map(const EigenSystem& eig, const std::function<Complex(double)>& f,
                           bool support_only);

/// rho^p on the support of rho (p may be negative).
HermitianOperator support_power(const DensityMatrix& rho, double p);
/// Orthogonal projector onto the support.
HermitianOperator support_projector(const DensityMatrix& rho);

/// U m U^dag; throws ValidationError when U is not unitary.
HermitianOperator conjugate(const HermitianOperator& m, const ComplexMatrix& u);
DensityMatrix conjugate(const DensityMatrix& m, const ComplexMatrix& u);

}  // namespace thermorec
