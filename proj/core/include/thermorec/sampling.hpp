#pragma once

// Seeded random instances for property sweeps. Every generator draws from a
// caller-owned engine so that results depend only on (seed, trial).

#include <cstdint>
#include <random>

#include "thermorec/channel.hpp"

namespace thermorec {

using Rng = std::mt19937_64;

/// Independent engine for trial `trial` of a run seeded with `seed`.
Rng trial_rng(std::uint64_t seed, std::uint64_t trial);

ComplexMatrix haar_random_unitary(Index dim, Rng& rng);
HermitianOperator random_hermitian(Index dim, Rng& rng);

/// Ginibre state mixed with `floor` of the maximally mixed state, so the
/// smallest eigenvalue is at least floor/dim.
DensityMatrix random_density_matrix(Index dim, Rng& rng, double floor = 0.01);
DensityMatrix random_pure_state(Index dim, Rng& rng);
/// Diagonal state with Dirichlet(1, ..., 1) populations mixed with `floor`.
DensityMatrix random_diagonal_state(Index dim, Rng& rng, double floor = 0.01);

/// Diagonal Hamiltonian with ground energy 0 and the remaining levels drawn
/// from {0, 1, ..., max_level}; integer spacing makes composite degeneracies
/// common so that energy-conserving unitaries are nontrivial.
HamiltonianSpec random_integer_hamiltonian(Index dim, int max_level, Rng& rng);

struct ThermalInstance {
  ThermalOperation op;
  DensityMatrix rho;
};

/// Random system/bath Hamiltonians, beta in [0.3, 1.5], a sampled
/// energy-conserving V and a random full-rank input.
ThermalInstance sample_thermal_instance(Index system_dim, Index bath_dim, Rng& rng);

}  // namespace thermorec
