#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "test_support.hpp"
#include "thermorec/divergence.hpp"
#include "thermorec/sampling.hpp"
#include "thermorec/thermo.hpp"

using namespace thermorec;
using thermorec::testing::diag;
using thermorec::testing::max_diff;

TEST_CASE("Gibbs state examples") {
  const double e = 2.0;
  const auto h = HamiltonianSpec::diagonal({0.0, e});
  const auto g = gibbs_state(h, std::log(2.0) / e);
  CHECK(max_diff(g.state.matrix(), diag({2.0 / 3.0, 1.0 / 3.0})) < 1e-15);
  CHECK(g.log_partition == doctest::Approx(std::log(1.5)).epsilon(1e-15));

  const auto flat = gibbs_state(HamiltonianSpec::diagonal({0.0, 1.0, 5.0}), 0.0);
  CHECK(max_diff(flat.state.matrix(), DensityMatrix::maximally_mixed(3).matrix()) < 1e-15);
  CHECK(flat.log_partition == doctest::Approx(std::log(3.0)).epsilon(1e-15));

  CHECK_THROWS_AS(gibbs_state(h, -1.0), ValidationError);
  CHECK_THROWS_AS(gibbs_state(h, std::nan("")), ValidationError);
}

TEST_CASE("two-level log partition at beta E = 1") {
  const auto g = gibbs_state(HamiltonianSpec::diagonal({0.0, 1.0}), 1.0);
  CHECK(g.log_partition == doctest::Approx(0.3132616875182228).epsilon(1e-15));
}

TEST_CASE("Gibbs state is fixed by energy-conserving unitaries and commutes with H") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = random_integer_hamiltonian(5, 2, rng);
    const auto g = gibbs_state(h, 0.7);
    const auto v = sample_energy_conserving_unitary(h, rng());
    CHECK(max_diff(conjugate(g.state, v.matrix()).matrix(), g.state.matrix()) < 1e-12);
    CHECK(max_abs(commutator(g.state.matrix(), h.op().matrix())) <= 1e-12);
  }
}

TEST_CASE("log partition against a dense matrix exponential") {
  Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = HamiltonianSpec(random_hermitian(4, rng));
    const double beta = 0.4 + 0.1 * (trial % 5);
    const ComplexMatrix ex = (-beta * h.op().matrix()).exp();
    const double oracle = std::log(ex.trace().real());
    CHECK(std::abs(gibbs_state(h, beta).log_partition - oracle) <= 1e-12);
    CHECK(max_diff(gibbs_state(h, beta).state.matrix(), ex / ex.trace()) <= 1e-12);
  }
}

TEST_CASE("log partition stays finite for large beta E") {
  const auto g = gibbs_state(HamiltonianSpec::diagonal({1000.0, 1001.0}), 50.0);
  CHECK(std::isfinite(g.log_partition));
  CHECK(g.log_partition == doctest::Approx(-50000.0 + std::log1p(std::exp(-50.0))));
}

TEST_CASE("free energy examples") {
  const auto h = HamiltonianSpec::diagonal({0.0, 1.0});
  const double beta = 1.0;
  const auto tau = gibbs_state(h, beta);
  CHECK(free_energy(tau.state, h, beta) == doctest::Approx(-tau.log_partition / beta).epsilon(1e-14));

  const auto ground = DensityMatrix::basis_state(2, 0);
  CHECK(std::abs(free_energy(ground, h, beta)) < 1e-15);
  // D(|0><0| || tau) = log Z here, so the relative form also vanishes.
  CHECK(relative_entropy(ground, tau.state).value == doctest::Approx(std::log1p(std::exp(-1.0))).epsilon(1e-14));
  CHECK(std::abs(free_energy_relative_form(ground, h, beta)) < 1e-14);

  CHECK_THROWS_AS(free_energy(ground, h, 0.0), ValidationError);
}

TEST_CASE("free energy is minimized by the Gibbs state") {
  Rng rng(23);
  const auto h = random_integer_hamiltonian(3, 2, rng);
  const double beta = 0.8;
  const double f_tau = free_energy(gibbs_state(h, beta).state, h, beta);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rho = random_density_matrix(3, rng);
    const double f = free_energy(rho, h, beta);
    CHECK(f >= f_tau - 1e-12);
    CHECK(std::abs(f - free_energy_relative_form(rho, h, beta)) <= 1e-9);
  }
}

TEST_CASE("wit battery") {
  const WitBattery wit(0.7);
  CHECK(wit.hamiltonian().energies()(0) == 0.0);
  CHECK_THROWS_AS(WitBattery(std::nan("")), ValidationError);

  Rng rng(24);
  const auto h = random_integer_hamiltonian(3, 2, rng);
  const auto hw = with_wit(h, wit);
  const double beta = 1.3;
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = random_density_matrix(3, rng);
    const auto up = augment_with_wit(rho, wit, 1);
    const auto down = augment_with_wit(rho, wit, 0);
    CHECK(max_diff(partial_trace(down, CompositeSpace({3, 2}), {0}).matrix(), rho.matrix()) < 1e-15);
    CHECK(free_energy(up, hw, beta) - free_energy(down, hw, beta) == doctest::Approx(wit.gap()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(augment_with_wit(DensityMatrix::basis_state(2, 0), wit, 2), ValidationError);
}

TEST_CASE("work upper bound as a free-energy comparison") {
  Rng rng(25);
  const auto h = random_integer_hamiltonian(3, 2, rng);
  const double beta = 0.9;
  for (int trial = 0; trial < 100; ++trial) {
    const auto rho = random_density_matrix(3, rng);
    const auto sigma = random_density_matrix(3, rng);
    const double df = free_energy(rho, h, beta) - free_energy(sigma, h, beta);
    for (double w : {0.05, 0.3, 1.0}) {
      const WitBattery wit(w);
      const auto hw = with_wit(h, wit);
      const bool allowed =
          free_energy(augment_with_wit(rho, wit, 0), hw, beta) >= free_energy(augment_with_wit(sigma, wit, 1), hw, beta);
      if (std::abs(df - w) > 1e-9) CHECK(allowed == (w <= df));
    }
  }
}

TEST_CASE("degenerate blocks") {
  const auto h = HamiltonianSpec::diagonal({0.0, 1.0, 1.0 + 1e-12, 2.0, 0.0});
  const auto& blocks = h.blocks();
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0].size() == 2);
  CHECK(blocks[1].size() == 2);
  CHECK(blocks[2].size() == 1);
  std::size_t covered = 0;
  for (const auto& b : blocks) {
    covered += b.size();
    CHECK(h.energies()(b.back()) - h.energies()(b.front()) <= h.degeneracy_tolerance());
  }
  CHECK(covered == 5);

  // local_sum of two gapped qubits has the middle level doubly degenerate.
  const std::array<HamiltonianSpec, 2> parts{HamiltonianSpec::diagonal({0.0, 1.0}), HamiltonianSpec::diagonal({0.0, 1.0})};
  const auto total = HamiltonianSpec::local_sum(parts);
  CHECK(max_diff(total.op().matrix(), diag({0.0, 1.0, 1.0, 2.0})) == 0.0);
  CHECK(total.blocks().size() == 3);
}
