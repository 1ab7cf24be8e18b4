#include "thermorec/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace thermorec {
namespace {

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("divergence arguments differ in dimension: " + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()));
  }
}

// Weight of rho outside supp(sigma): Tr[rho (I - P_sigma)].
bool support_contained(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const EigenSystem& es = sigma.eigen();
  const double tol = rank_tolerance(es.values);
  double inside = 0.0;
  for (Index j = 0; j < es.values.size(); ++j) {
    if (es.values(j) <= tol) continue;
    const ComplexVector w = es.vectors.col(j);
    inside += (w.adjoint() * rho.matrix() * w)(0, 0).real();
  }
  const double outside = rho.matrix().trace().real() - inside;
  return outside <= std::max(tolerances().psd, rank_tolerance(rho.eigen().values));
}

double entropy_sum(const RealVector& values) {
  const double tol = rank_tolerance(values);
  double s = 0.0;
  for (Index i = 0; i < values.size(); ++i) {
    const double l = values(i);
    if (l > tol) s -= l * std::log(l);
  }
  return s;
}

DivergenceResult from_quasi(double q, double alpha, bool support_ok) {
  if (!(q > 0.0)) return DivergenceResult::infinite();
  return {std::log(q) / (alpha - 1.0), true, support_ok};
}

}  // namespace

AlphaFamilySpec::AlphaFamilySpec(double alpha) : alpha_(alpha) {
  if (std::isnan(alpha) || alpha < 0.0) {
    throw ValidationError("Renyi order must be >= 0 or +inf, got " + std::to_string(alpha));
  }
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return std::max(0.0, entropy_sum(rho.eigen().values));
}

DivergenceResult relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  if (!support_contained(rho, sigma)) return DivergenceResult::infinite();

  const EigenSystem& es = sigma.eigen();
  const double tol = rank_tolerance(es.values);
  double cross = 0.0;  // Tr[rho log sigma] on supp(sigma)
  for (Index j = 0; j < es.values.size(); ++j) {
    if (es.values(j) <= tol) continue;
    const ComplexVector w = es.vectors.col(j);
    cross += std::log(es.values(j)) * (w.adjoint() * rho.matrix() * w)(0, 0).real();
  }
  const double value = -entropy_sum(rho.eigen().values) - cross;
  return DivergenceResult::of(std::max(0.0, value));
}

DivergenceResult max_divergence(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  if (!support_contained(rho, sigma)) return DivergenceResult::infinite();
  const ComplexMatrix inv_sqrt = support_power(sigma, -0.5).matrix();
  const HermitianOperator ratio(ComplexMatrix(inv_sqrt * rho.matrix() * inv_sqrt));
  const double top = ratio.eigen().values(0);
  if (!(top > 0.0)) return DivergenceResult::infinite();
  return DivergenceResult::of(std::log(top));
}

DivergenceResult renyi_divergence(const DensityMatrix& rho, const DensityMatrix& sigma,
                                  const AlphaFamilySpec& spec) {
  require_same_dim(rho, sigma);
  const double alpha = spec.alpha();
  if (spec.is_infinite()) return max_divergence(rho, sigma);
  if (std::abs(alpha - 1.0) < kAlphaOneWindow) return relative_entropy(rho, sigma);

  if (spec.variant() == RenyiVariant::Petz) {
    // rho^0 is the support projector.
    const ComplexMatrix rho_pow = support_power(rho, alpha).matrix();
    const ComplexMatrix sigma_pow = support_power(sigma, 1.0 - alpha).matrix();
    const double q = (rho_pow * sigma_pow).trace().real();
    return from_quasi(q, alpha, q > 0.0);
  }

  const bool contained = support_contained(rho, sigma);
  if (alpha > 1.0 && !contained) return DivergenceResult::infinite();
  const double gamma = (1.0 - alpha) / (2.0 * alpha);
  const ComplexMatrix s = support_power(sigma, gamma).matrix();
  const HermitianOperator sandwich(ComplexMatrix(s * rho.matrix() * s));
  const RealVector lambdas = sandwich.eigen().values.cwiseMax(0.0);
  double q = 0.0;
  for (Index i = 0; i < lambdas.size(); ++i) {
    if (lambdas(i) > 0.0) q += std::pow(lambdas(i), alpha);
  }
  return from_quasi(q, alpha, alpha > 1.0 ? contained : q > 0.0);
}

Fidelity fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  const ComplexMatrix sqrt_rho = support_power(rho, 0.5).matrix();
  const HermitianOperator inner(ComplexMatrix(sqrt_rho * sigma.matrix() * sqrt_rho));
  const RealVector lambdas = inner.eigen().values.cwiseMax(0.0);
  double root = lambdas.cwiseSqrt().sum();
  root = std::clamp(root, 0.0, 1.0);
  return {root, root * root};
}

double divergence_drop_trace_form(const DensityMatrix& eta_cd, const DensityMatrix& theta_cd,
                                  const CompositeSpace& space) {
  require_same_dim(eta_cd, theta_cd);
  if (space.factors() != 2 || space.total_dim() != eta_cd.dim()) {
    throw ValidationError("divergence_drop_trace_form expects a two-factor space matching the states");
  }
  const DensityMatrix eta_d = partial_trace(eta_cd, space, {1});
  const DensityMatrix theta_d = partial_trace(theta_cd, space, {1});
  const auto log_fn = [](double x) { return std::log(x); };
  const ComplexMatrix id_c = ComplexMatrix::Identity(space.factor_dims()[0], space.factor_dims()[0]);

  const ComplexMatrix op = matrix_function(eta_cd.eigen(), log_fn, true).matrix() -
                           matrix_function(theta_cd.eigen(), log_fn, true).matrix() -
                           kron(id_c, matrix_function(eta_d.eigen(), log_fn, true).matrix()) +
                           kron(id_c, matrix_function(theta_d.eigen(), log_fn, true).matrix());
  return (eta_cd.matrix() * op).trace().real();
}

}  // namespace thermorec
