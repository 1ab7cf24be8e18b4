#include "thermorec/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "thermorec/quadrature.hpp"

namespace thermorec {
namespace {

ComplexMatrix local_sum_matrix(const std::vector<const HamiltonianSpec*>& parts) {
  Index total = 1;
  for (const auto* p : parts) total *= p->dim();
  ComplexMatrix acc = ComplexMatrix::Zero(total, total);
  Index left = 1;
  for (const auto* p : parts) {
    const Index right = total / (left * p->dim());
    acc += kron(kron(ComplexMatrix::Identity(left, left), p->op().matrix()),
                ComplexMatrix::Identity(right, right));
    left *= p->dim();
  }
  return acc;
}

ComplexMatrix unvec(const ComplexVector& v, Index d) {
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

Index root_of_square(Index n) {
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n) throw ValidationError("superoperator size " + std::to_string(n) + " is not a square");
  return d;
}

ComplexMatrix haar_unitary(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(k) *= d / mag;
  }
  return q;
}

}  // namespace

// ---- EnergyConservingUnitary ------------------------------------------------

EnergyConservingUnitary::EnergyConservingUnitary(ComplexMatrix v, HamiltonianSpec h)
    : EnergyConservingUnitary(std::move(v), std::move(h), true) {}

EnergyConservingUnitary EnergyConservingUnitary::unchecked(ComplexMatrix v, HamiltonianSpec h) {
  return EnergyConservingUnitary(std::move(v), std::move(h), false);
}

EnergyConservingUnitary::EnergyConservingUnitary(ComplexMatrix v, HamiltonianSpec h, bool validate)
    : v_(std::move(v)), h_(std::move(h)), validated_(validate) {
  if (v_.rows() != h_.dim() || v_.cols() != h_.dim()) {
    throw ValidationError("unitary is " + std::to_string(v_.rows()) + "x" + std::to_string(v_.cols()) +
                          " but the Hamiltonian has dimension " + std::to_string(h_.dim()));
  }
  if (!v_.allFinite()) throw ValidationError("unitary has non-finite entries");
  if (!is_unitary(v_, tolerances().unitary)) throw ValidationError("matrix is not unitary");
  if (!validate) return;
  const double comm = commutator_residual();
  if (comm > tolerances().commutator) {
    throw ValidationError("unitary does not conserve energy: ||[V,H]||_max = " + std::to_string(comm));
  }
  const double leak = block_leakage();
  if (leak > tolerances().commutator) {
    throw ValidationError("unitary couples distinct energy blocks: leakage " + std::to_string(leak));
  }
}

double EnergyConservingUnitary::commutator_residual() const {
  return max_abs(commutator(v_, h_.op().matrix() / h_.spectral_radius()));
}

double EnergyConservingUnitary::block_leakage() const {
  const ComplexMatrix w = h_.eigenbasis().adjoint() * v_ * h_.eigenbasis();
  std::vector<std::size_t> block_of(static_cast<std::size_t>(h_.dim()));
  for (std::size_t b = 0; b < h_.blocks().size(); ++b) {
    for (Index i : h_.blocks()[b]) block_of[static_cast<std::size_t>(i)] = b;
  }
  double leak = 0.0;
  for (Index j = 0; j < w.cols(); ++j) {
    for (Index i = 0; i < w.rows(); ++i) {
      if (block_of[static_cast<std::size_t>(i)] != block_of[static_cast<std::size_t>(j)]) {
        leak = std::max(leak, std::abs(w(i, j)));
      }
    }
  }
  return leak;
}

EnergyConservingUnitary EnergyConservingUnitary::adjoint() const {
  // V^dag commutes with H whenever V does; no need to re-run the checks.
  EnergyConservingUnitary out(v_.adjoint(), h_, false);
  out.validated_ = validated_;
  return out;
}

// ---- Superoperator ----------------------------------------------------------

Superoperator::Superoperator(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ValidationError("superoperator matrix must be square");
  dim_ = root_of_square(m_.rows());
}

Superoperator Superoperator::identity(Index d) {
  return Superoperator(ComplexMatrix::Identity(d * d, d * d));
}

Superoperator Superoperator::from_map(Index d,
                                      const std::function<ComplexMatrix(const ComplexMatrix&)>& f) {
  ComplexMatrix m(d * d, d * d);
  ComplexMatrix unit = ComplexMatrix::Zero(d, d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      unit(i, j) = 1.0;
      const ComplexMatrix out = f(unit);
      if (out.rows() != d || out.cols() != d) throw ValidationError("map changes dimension");
      m.col(i + j * d) = vec(out);
      unit(i, j) = 0.0;
    }
  }
  return Superoperator(std::move(m));
}

Superoperator Superoperator::sandwich(const ComplexMatrix& a, const ComplexMatrix& b) {
  // vec(A X B) = (B^T (x) A) vec(X) for column stacking.
  return Superoperator(kron(b.transpose(), a));
}

Superoperator Superoperator::mixture(std::span<const double> weights,
                                     std::span<const Superoperator> maps) {
  if (weights.size() != maps.size() || maps.empty()) {
    throw ValidationError("mixture needs one weight per map");
  }
  double total = 0.0;
  ComplexMatrix acc = ComplexMatrix::Zero(maps[0].matrix().rows(), maps[0].matrix().cols());
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (weights[k] < 0.0) throw ValidationError("mixture weights must be nonnegative");
    if (maps[k].dim() != maps[0].dim()) throw ValidationError("mixture of maps on different dimensions");
    acc += weights[k] * maps[k].matrix();
    total += weights[k];
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("mixture weights must sum to 1");
  return Superoperator(std::move(acc));
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw ValidationError("superoperator input has wrong dimension");
  return unvec(m_ * vec(x), dim_);
}

DensityMatrix Superoperator::apply(const DensityMatrix& rho) const {
  return DensityMatrix(apply(rho.matrix()));
}

Superoperator Superoperator::adjoint() const { return Superoperator(m_.adjoint()); }

Superoperator Superoperator::then(const Superoperator& next) const {
  if (next.dim_ != dim_) throw ValidationError("cannot compose maps on different dimensions");
  return Superoperator(next.m_ * m_);
}

ComplexMatrix Superoperator::choi() const {
  const Index d = dim_;
  ComplexMatrix j = ComplexMatrix::Zero(d * d, d * d);
  for (Index b = 0; b < d; ++b) {
    for (Index a = 0; a < d; ++a) {
      j.block(a * d, b * d, d, d) = unvec(m_.col(a + b * d), d);
    }
  }
  return j;
}

double Superoperator::trace_preservation_residual() const {
  const Index d = dim_;
  double worst = 0.0;
  for (Index k = 0; k < d * d; ++k) {
    Complex tr = 0.0;
    for (Index i = 0; i < d; ++i) tr += m_(i + i * d, k);
    const double expected = (k % (d + 1) == 0) ? 1.0 : 0.0;
    worst = std::max(worst, std::abs(tr - expected));
  }
  return worst;
}

double Superoperator::min_choi_eigenvalue() const {
  const ComplexMatrix j = choi();
  const ComplexMatrix herm = 0.5 * (j + j.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// ---- ThermalOperation -------------------------------------------------------

ThermalOperation::ThermalOperation(EnergyConservingUnitary v, HamiltonianSpec system_h,
                                   HamiltonianSpec bath_h, double beta,
                                   std::vector<EnvironmentFactor> extra)
    : v_(std::move(v)),
      system_h_(std::move(system_h)),
      bath_h_(std::move(bath_h)),
      beta_(beta),
      extra_(std::move(extra)),
      bath_(gibbs_state(bath_h_, beta)),
      system_gibbs_(gibbs_state(system_h_, beta)),
      env_state_(bath_.state) {
  std::vector<const HamiltonianSpec*> parts{&system_h_, &bath_h_};
  ComplexMatrix env = bath_.state.matrix();
  for (const auto& f : extra_) {
    if (f.state.dim() != f.hamiltonian.dim()) {
      throw ValidationError("environment factor state and Hamiltonian differ in dimension");
    }
    parts.push_back(&f.hamiltonian);
    env = kron(env, f.state.matrix());
  }
  env_state_ = DensityMatrix(env);

  const ComplexMatrix total = local_sum_matrix(parts);
  if (total.rows() != v_.matrix().rows()) {
    throw ValidationError("unitary dimension " + std::to_string(v_.matrix().rows()) +
                          " does not match S (x) E dimension " + std::to_string(total.rows()));
  }
  const double scale = std::max(1.0, max_abs(total));
  if (max_abs(total - v_.hamiltonian().op().matrix()) > 1e-12 * scale) {
    throw ValidationError("unitary was validated against a different total Hamiltonian");
  }
}

std::vector<Index> ThermalOperation::env_dims() const {
  std::vector<Index> dims{bath_h_.dim()};
  for (const auto& f : extra_) dims.push_back(f.state.dim());
  return dims;
}

CompositeSpace ThermalOperation::space() const {
  std::vector<Index> dims{system_h_.dim()};
  for (Index d : env_dims()) dims.push_back(d);
  return CompositeSpace(std::move(dims));
}

ComplexMatrix ThermalOperation::dilate(const ComplexMatrix& x) const {
  if (x.rows() != system_dim() || x.cols() != system_dim()) {
    throw ValidationError("input has dimension " + std::to_string(x.rows()) + ", system dimension is " +
                          std::to_string(system_dim()));
  }
  const ComplexMatrix& v = v_.matrix();
  return v * kron(x, env_state_.matrix()) * v.adjoint();
}

ComplexMatrix ThermalOperation::apply_raw(const ComplexMatrix& x) const {
  return partial_trace(dilate(x), CompositeSpace({system_dim(), env_state_.dim()}), {0});
}

DensityMatrix apply(const ThermalOperation& t, const DensityMatrix& rho) {
  return DensityMatrix(t.apply_raw(rho.matrix()));
}

ThermalOperation reversal(const ThermalOperation& t) {
  return ThermalOperation(t.unitary().adjoint(), t.system_hamiltonian(), t.bath_hamiltonian(), t.beta(),
                          t.extra_factors());
}

Superoperator superoperator(const ThermalOperation& t) {
  return Superoperator::from_map(t.system_dim(), [&](const ComplexMatrix& x) { return t.apply_raw(x); });
}

Superoperator adjoint(const ThermalOperation& t) {
  const Index ds = t.system_dim();
  const Index de = t.env_state().dim();
  const ComplexMatrix root_env = support_power(t.env_state(), 0.5).matrix();
  const ComplexMatrix k = kron(ComplexMatrix::Identity(ds, ds), root_env);
  const ComplexMatrix& v = t.unitary().matrix();
  const CompositeSpace space({ds, de});
  return Superoperator::from_map(ds, [&](const ComplexMatrix& x) {
    const ComplexMatrix lifted = kron(x, ComplexMatrix::Identity(de, de));
    return partial_trace(ComplexMatrix(k * v.adjoint() * lifted * v * k), space, {0});
  });
}

// ---- Petz recovery ----------------------------------------------------------

PetzRecovery petz_recovery(const Superoperator& n, const Superoperator& n_adjoint,
                           const DensityMatrix& reference) {
  if (reference.dim() != n.dim() || n_adjoint.dim() != n.dim()) {
    throw ValidationError("Petz reference dimension does not match the channel");
  }
  const DensityMatrix image = DensityMatrix::normalized(n.apply(reference.matrix()));
  const ComplexMatrix root_ref = support_power(reference, 0.5).matrix();
  const ComplexMatrix inv_root_image = support_power(image, -0.5).matrix();
  const Superoperator pre = Superoperator::sandwich(inv_root_image, inv_root_image);
  const Superoperator post = Superoperator::sandwich(root_ref, root_ref);
  return {pre.then(n_adjoint).then(post), !reference.full_rank() || !image.full_rank()};
}

PetzRecovery petz_recovery(const Superoperator& n, const DensityMatrix& reference) {
  return petz_recovery(n, n.adjoint(), reference);
}

PetzRecovery petz_recovery(const ThermalOperation& t, const DensityMatrix& reference) {
  return petz_recovery(superoperator(t), adjoint(t), reference);
}

// ---- rotated recovery -------------------------------------------------------

double rotation_density(double t) {
  return 0.5 * std::numbers::pi / (std::cosh(std::numbers::pi * t) + 1.0);
}

RotatedRecovery::RotatedRecovery(const Superoperator& n, const DensityMatrix& reference)
    : petz_(petz_recovery(n, reference)),
      reference_eig_(reference.eigen()),
      image_eig_(DensityMatrix::normalized(n.apply(reference.matrix())).eigen()) {}

ComplexMatrix RotatedRecovery::apply(const ComplexMatrix& x, double t) const {
  const auto phase = [](double s) {
    return [s](double lambda) { return std::exp(Complex(0.0, s * std::log(lambda))); };
  };
  // N(theta)^{-it/2} and theta^{it/2}
  const ComplexMatrix a = spectral_map(image_eig_, phase(-0.5 * t), true);
  const ComplexMatrix b = spectral_map(reference_eig_, phase(0.5 * t), true);
  const ComplexMatrix inner = petz_.map.apply(ComplexMatrix(a * x * a.adjoint()));
  return b * inner * b.adjoint();
}

ComplexMatrix RotatedRecovery::average_raw(const ComplexMatrix& x, QuadratureSpec q) const {
  const QuadratureRule rule = gauss_legendre(q.nodes);
  ComplexMatrix acc = ComplexMatrix::Zero(x.rows(), x.cols());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double t = (2.0 / std::numbers::pi) * std::atanh(rule.nodes[k]);
    acc += 0.5 * rule.weights[k] * apply(x, t);
  }
  return acc;
}

DensityMatrix RotatedRecovery::average(const DensityMatrix& sigma, QuadratureSpec q) const {
  const ComplexMatrix raw = average_raw(sigma.matrix(), q);
  const ComplexMatrix herm = 0.5 * (raw + raw.adjoint());
  const double drift = std::abs(herm.trace().real() - 1.0);
  if (drift > 1e-8) {
    throw std::logic_error("rotated recovery average drifted from unit trace by " + std::to_string(drift));
  }
  return DensityMatrix::normalized(herm);
}

DensityMatrix rotated_recovery_average(const Superoperator& n, const DensityMatrix& tau,
                                       const DensityMatrix& sigma, QuadratureSpec q) {
  if (!is_gibbs_preserving(n, tau)) throw ValidationError("map does not preserve the reference state");
  return RotatedRecovery(n, tau).average(sigma, q);
}

// ---- sampling and checks ----------------------------------------------------

EnergyConservingUnitary sample_energy_conserving_unitary(const HamiltonianSpec& h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Index n = h.dim();
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  for (const auto& block : h.blocks()) {
    const auto k = static_cast<Index>(block.size());
    const ComplexMatrix u = haar_unitary(k, rng);
    for (Index a = 0; a < k; ++a) {
      for (Index b = 0; b < k; ++b) w(block[a], block[b]) = u(a, b);
    }
  }
  const ComplexMatrix& e = h.eigenbasis();
  return EnergyConservingUnitary(e * w * e.adjoint(), h);
}

bool is_gibbs_preserving(const Superoperator& s, const DensityMatrix& tau) {
  if (!s.is_trace_preserving()) throw ValidationError("Gibbs-preservation check needs a trace-preserving map");
  return trace_norm(s.apply(tau.matrix()) - tau.matrix()) <= tolerances().gibbs_preserving;
}

}  // namespace thermorec
