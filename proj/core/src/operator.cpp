#include "thermorec/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace thermorec {
namespace {

void require_finite(const ComplexMatrix& m) {
  if (!m.allFinite()) throw ValidationError("matrix has non-finite entries");
}

void require_square(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ValidationError("expected a non-empty square matrix, got " + std::to_string(m.rows()) +
                          "x" + std::to_string(m.cols()));
  }
}

bool is_exactly_diagonal(const ComplexMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
    }
  }
  return true;
}

// Diagonal inputs (Gibbs states, diagonal Hamiltonians) get an exact
// permutation eigenbasis instead of an iterative solve.
EigenSystem hermitian_eigen(const ComplexMatrix& m) {
  const Index n = m.rows();
  EigenSystem out;
  if (is_exactly_diagonal(m)) {
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return m(a, a).real() > m(b, b).real(); });
    out.values.resize(n);
    out.vectors = ComplexMatrix::Zero(n, n);
    for (Index k = 0; k < n; ++k) {
      const Index src = order[static_cast<std::size_t>(k)];
      out.values(k) = m(src, src).real();
      out.vectors(src, k) = 1.0;
    }
    return out;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) throw DomainError("Hermitian eigensolver did not converge");
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

ComplexMatrix reconstruct(const ComplexMatrix& vectors, const RealVector& values) {
  return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

}  // namespace

// ---- HermitianOperator ------------------------------------------------------

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
  require_square(m);
  require_finite(m);
  check_dimension(static_cast<std::size_t>(m.rows()));
  const double scale = std::max(1.0, max_abs(m));
  const double asym = max_abs(m - m.adjoint());
  if (asym > tolerances().hermitian * scale) {
    throw ValidationError("matrix is not Hermitian: ||M - M^dag||_max = " + std::to_string(asym));
  }
  matrix_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> entries) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(entries.size()),
                                        static_cast<Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    m(static_cast<Index>(i), static_cast<Index>(i)) = entries[i];
  }
  return HermitianOperator(m);
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(ComplexMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(Index dim) {
  return HermitianOperator(ComplexMatrix::Zero(dim, dim));
}

EigenSystem HermitianOperator::eigen() const { return hermitian_eigen(matrix_); }

// ---- DensityMatrix ----------------------------------------------------------

DensityMatrix::DensityMatrix(const ComplexMatrix& m) : DensityMatrix(HermitianOperator(m)) {}

DensityMatrix::DensityMatrix(const HermitianOperator& h) : op_(h) {
  EigenSystem eig = op_.eigen();
  const Tolerances& tol = tolerances();
  const double smallest = eig.values(eig.values.size() - 1);
  if (smallest < -tol.psd) {
    throw ValidationError("density matrix has negative eigenvalue " + std::to_string(smallest));
  }
  const double tr = op_.trace();
  if (std::abs(tr - 1.0) > tol.trace) {
    throw ValidationError("density matrix trace is " + std::to_string(tr) + ", expected 1");
  }
  eig.values = eig.values.cwiseMax(0.0);
  eigen_ = std::make_shared<const EigenSystem>(std::move(eig));
}

DensityMatrix DensityMatrix::normalized(const ComplexMatrix& m) {
  require_square(m);
  require_finite(m);
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  EigenSystem eig = hermitian_eigen(herm);
  eig.values = eig.values.cwiseMax(0.0);
  const double total = eig.values.sum();
  if (!(total > 0.0)) throw ValidationError("cannot normalize a matrix with no positive part");
  eig.values /= total;
  return DensityMatrix(reconstruct(eig.vectors, eig.values));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw ValidationError("pure state vector has zero norm");
  const ComplexVector unit = psi / norm;
  return DensityMatrix(ComplexMatrix(unit * unit.adjoint()));
}

DensityMatrix DensityMatrix::basis_state(Index dim, Index level) {
  if (level < 0 || level >= dim) throw ValidationError("basis level out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(level, level) = 1.0;
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities) {
  return DensityMatrix(HermitianOperator::diagonal(probabilities));
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(ComplexMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim)));
}

Index DensityMatrix::rank() const {
  const double tol = rank_tolerance(eigen_->values);
  return static_cast<Index>((eigen_->values.array() > tol).count());
}

// ---- CompositeSpace ---------------------------------------------------------

CompositeSpace::CompositeSpace(std::vector<Index> factor_dims) : dims_(std::move(factor_dims)) {
  if (dims_.empty()) throw ValidationError("composite space needs at least one factor");
  for (Index d : dims_) {
    if (d <= 0) throw ValidationError("factor dimensions must be positive");
    total_ *= d;
  }
  check_dimension(static_cast<std::size_t>(total_));
}

Index CompositeSpace::global_index(std::span<const Index> digits) const {
  if (digits.size() != dims_.size()) throw ValidationError("digit count does not match factors");
  Index g = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= dims_[i]) throw ValidationError("digit out of range");
    g = g * dims_[i] + digits[i];
  }
  return g;
}

std::vector<Index> CompositeSpace::digits(Index global) const {
  if (global < 0 || global >= total_) throw ValidationError("global index out of range");
  std::vector<Index> out(dims_.size());
  for (std::size_t i = dims_.size(); i-- > 0;) {
    out[i] = global % dims_[i];
    global /= dims_[i];
  }
  return out;
}

// ---- helpers ----------------------------------------------------------------

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())) <= tol;
}

double trace_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

double rank_tolerance(const RealVector& eigenvalues) {
  if (eigenvalues.size() == 0) return 0.0;
  return static_cast<double>(eigenvalues.size()) * eigenvalues.cwiseAbs().maxCoeff() *
         tolerances().rank_relative;
}

// ---- operations -------------------------------------------------------------

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()));
}

DensityMatrix tensor(std::span<const DensityMatrix> factors) {
  if (factors.empty()) throw ValidationError("tensor of an empty list");
  ComplexMatrix acc = factors[0].matrix();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = kron(acc, factors[i].matrix());
  return DensityMatrix(acc);
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const CompositeSpace& space,
                            std::vector<std::size_t> keep) {
  if (m.rows() != space.total_dim() || m.cols() != space.total_dim()) {
    throw ValidationError("partial_trace: matrix dimension " + std::to_string(m.rows()) +
                          " does not match composite dimension " +
                          std::to_string(space.total_dim()));
  }
  if (keep.empty()) throw ValidationError("partial_trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.back() >= space.factors()) throw ValidationError("partial_trace: factor index out of range");

  const auto& dims = space.factor_dims();
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) kept[k] = true;

  // Split every global index into (kept index, traced index).
  const Index total = space.total_dim();
  std::vector<Index> kept_idx(static_cast<std::size_t>(total));
  std::vector<Index> traced_idx(static_cast<std::size_t>(total));
  Index kept_dim = 1;
  for (std::size_t f = 0; f < dims.size(); ++f) {
    if (kept[f]) kept_dim *= dims[f];
  }
  std::vector<Index> digit(dims.size(), 0);
  for (Index g = 0; g < total; ++g) {
    Index k = 0;
    Index t = 0;
    for (std::size_t f = 0; f < dims.size(); ++f) {
      if (kept[f]) {
        k = k * dims[f] + digit[f];
      } else {
        t = t * dims[f] + digit[f];
      }
    }
    kept_idx[static_cast<std::size_t>(g)] = k;
    traced_idx[static_cast<std::size_t>(g)] = t;
    for (std::size_t f = dims.size(); f-- > 0;) {
      if (++digit[f] < dims[f]) break;
      digit[f] = 0;
    }
  }

  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (Index j = 0; j < total; ++j) {
    const Index tj = traced_idx[static_cast<std::size_t>(j)];
    const Index kj = kept_idx[static_cast<std::size_t>(j)];
    for (Index i = 0; i < total; ++i) {
      if (traced_idx[static_cast<std::size_t>(i)] == tj) {
        out(kept_idx[static_cast<std::size_t>(i)], kj) += m(i, j);
      }
    }
  }
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& m, const CompositeSpace& space,
                                std::vector<std::size_t> keep) {
  return HermitianOperator(partial_trace(m.matrix(), space, std::move(keep)));
}

DensityMatrix partial_trace(const DensityMatrix& m, const CompositeSpace& space,
                            std::vector<std::size_t> keep) {
  return DensityMatrix(partial_trace(m.matrix(), space, std::move(keep)));
}

HermitianOperator matrix_function(const EigenSystem& eig, const std::function<double(double)>& f,
                                  bool support_only) {
  const double tol = support_only ? rank_tolerance(eig.values) : -1.0;
  const Index n = eig.values.size();
  RealVector mapped = RealVector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const double lambda = eig.values(i);
    if (support_only && std::abs(lambda) <= tol) continue;
    const double v = f(lambda);
    if (!std::isfinite(v)) {
      throw DomainError("matrix function undefined at eigenvalue " + std::to_string(lambda));
    }
    mapped(i) = v;
  }
  return HermitianOperator(reconstruct(eig.vectors, mapped));
}

HermitianOperator matrix_function(const HermitianOperator& m, const std::function<double(double)>& f,
                                  bool support_only) {
  return matrix_function(m.eigen(), f, support_only);
}

ComplexMatrix spectral_map(const EigenSystem& eig, const std::function<Complex(double)>& f,
                           bool support_only) {
  const double tol = support_only ? rank_tolerance(eig.values) : -1.0;
  const Index n = eig.values.size();
  ComplexVector mapped = ComplexVector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const double lambda = eig.values(i);
    if (support_only && std::abs(lambda) <= tol) continue;
    const Complex v = f(lambda);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("spectral map undefined at eigenvalue " + std::to_string(lambda));
    }
    mapped(i) = v;
  }
  return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

HermitianOperator support_power(const DensityMatrix& rho, double p) {
  return matrix_function(rho.eigen(), [p](double x) { return std::pow(x, p); }, true);
}

HermitianOperator support_projector(const DensityMatrix& rho) {
  return matrix_function(rho.eigen(), [](double) { return 1.0; }, true);
}

HermitianOperator conjugate(const HermitianOperator& m, const ComplexMatrix& u) {
  if (u.rows() != m.dim() || u.cols() != m.dim()) throw ValidationError("conjugate: dimension mismatch");
  if (!is_unitary(u, tolerances().unitary)) throw ValidationError("conjugate: matrix is not unitary");
  return HermitianOperator(u * m.matrix() * u.adjoint());
}

DensityMatrix conjugate(const DensityMatrix& m, const ComplexMatrix& u) {
  return DensityMatrix(conjugate(m.op(), u));
}

}  // namespace thermorec
