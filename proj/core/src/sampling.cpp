#include "thermorec/sampling.hpp"

#include <algorithm>
#include <array>

namespace thermorec {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ComplexMatrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  return g;
}

}  // namespace

Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return Rng(splitmix64(splitmix64(seed) ^ (trial * 0xd1b54a32d192ed03ULL)));
}

ComplexMatrix haar_random_unitary(Index dim, Rng& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(dim, dim, rng));
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    const Complex d = qr.matrixQR()(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

HermitianOperator random_hermitian(Index dim, Rng& rng) {
  const ComplexMatrix g = ginibre(dim, dim, rng);
  return HermitianOperator(ComplexMatrix(0.5 * (g + g.adjoint())));
}

DensityMatrix random_density_matrix(Index dim, Rng& rng, double floor) {
  const ComplexMatrix g = ginibre(dim, dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (1.0 - floor) * rho + floor * ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
  return DensityMatrix::normalized(rho);
}

DensityMatrix random_pure_state(Index dim, Rng& rng) {
  return DensityMatrix::pure(ginibre(dim, 1, rng).col(0));
}

DensityMatrix random_diagonal_state(Index dim, Rng& rng, double floor) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(static_cast<std::size_t>(dim));
  double total = 0.0;
  for (auto& x : p) total += (x = expo(rng));
  for (auto& x : p) x = (1.0 - floor) * x / total + floor / static_cast<double>(dim);
  return DensityMatrix::diagonal(p);
}

HamiltonianSpec random_integer_hamiltonian(Index dim, int max_level, Rng& rng) {
  std::uniform_int_distribution<int> level(0, max_level);
  std::vector<double> e(static_cast<std::size_t>(dim), 0.0);
  for (std::size_t i = 1; i < e.size(); ++i) e[i] = level(rng);
  std::sort(e.begin(), e.end());
  return HamiltonianSpec::diagonal(e);
}

ThermalInstance sample_thermal_instance(Index system_dim, Index bath_dim, Rng& rng) {
  HamiltonianSpec hs = random_integer_hamiltonian(system_dim, 2, rng);
  HamiltonianSpec hb = random_integer_hamiltonian(bath_dim, 3, rng);
  std::uniform_real_distribution<double> beta_dist(0.3, 1.5);
  const double beta = beta_dist(rng);
  const std::array<HamiltonianSpec, 2> parts{hs, hb};
  const HamiltonianSpec total = HamiltonianSpec::local_sum(parts);
  EnergyConservingUnitary v = sample_energy_conserving_unitary(total, rng());
  ThermalOperation op(std::move(v), std::move(hs), std::move(hb), beta);
  DensityMatrix rho = random_density_matrix(system_dim, rng);
  return {std::move(op), std::move(rho)};
}

}  // namespace thermorec
