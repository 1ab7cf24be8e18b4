#include <array>
#include <cmath>

#include "test_support.hpp"
#include "thermorec/channel.hpp"
#include "thermorec/divergence.hpp"
#include "thermorec/sampling.hpp"

using namespace thermorec;
using thermorec::testing::diag;
using thermorec::testing::max_diff;

namespace {

HamiltonianSpec qubit(double gap) { return HamiltonianSpec::diagonal({0.0, gap}); }

HamiltonianSpec total_of(const HamiltonianSpec& a, const HamiltonianSpec& b) {
  const std::array<HamiltonianSpec, 2> parts{a, b};
  return HamiltonianSpec::local_sum(parts);
}

ThermalOperation identity_operation(const HamiltonianSpec& hs, const HamiltonianSpec& hb, double beta) {
  const Index d = hs.dim() * hb.dim();
  return ThermalOperation(EnergyConservingUnitary(ComplexMatrix::Identity(d, d), total_of(hs, hb)), hs, hb, beta);
}

// Swaps |0,1> and |1,0> of two equal-gap qubits: a classical energy-conserving
// permutation.
ThermalOperation swap_operation(double beta) {
  ComplexMatrix p = ComplexMatrix::Zero(4, 4);
  p(0, 0) = p(3, 3) = 1.0;
  p(1, 2) = p(2, 1) = 1.0;
  return ThermalOperation(EnergyConservingUnitary(p, total_of(qubit(1.0), qubit(1.0))), qubit(1.0), qubit(1.0), beta);
}

}  // namespace

TEST_CASE("Gibbs state is a fixed point of every thermal operation") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = sample_thermal_instance(2 + trial % 2, 2 + trial % 3, rng);
    const auto& tau = inst.op.system_gibbs().state;
    CHECK(max_diff(apply(inst.op, tau).matrix(), tau.matrix()) < 1e-12);
    const auto out = apply(inst.op, inst.rho);
    CHECK(std::abs(out.matrix().trace().real() - 1.0) < 1e-10);
  }
}

TEST_CASE("identity unitary gives the identity channel and its own reversal") {
  const auto t = identity_operation(qubit(1.0), HamiltonianSpec::diagonal({0.0, 1.0, 2.0}), 0.8);
  Rng rng(32);
  const auto rho = random_density_matrix(2, rng);
  CHECK(max_diff(apply(t, rho).matrix(), rho.matrix()) < 1e-15);
  CHECK(max_diff(superoperator(reversal(t)).matrix(), Superoperator::identity(2).matrix()) < 1e-15);
  CHECK(max_diff(adjoint(t).matrix(), Superoperator::identity(2).matrix()) < 1e-14);
}

TEST_CASE("reversal is an involution on the unitary") {
  Rng rng(33);
  const auto inst = sample_thermal_instance(2, 3, rng);
  const auto twice = reversal(reversal(inst.op));
  CHECK(max_diff(twice.unitary().matrix(), inst.op.unitary().matrix()) == 0.0);
  CHECK(twice.beta() == inst.op.beta());
  CHECK(max_diff(twice.env_state().matrix(), inst.op.env_state().matrix()) == 0.0);
}

TEST_CASE("energy-conservation validation") {
  const auto h = total_of(qubit(1.0), qubit(1.0));
  ComplexMatrix hadamard_i = ComplexMatrix::Zero(4, 4);
  const double s = 1.0 / std::sqrt(2.0);
  // H (x) I mixes energies 0 and 1.
  hadamard_i << s, 0, s, 0, 0, s, 0, s, s, 0, -s, 0, 0, s, 0, -s;
  CHECK_THROWS_AS(EnergyConservingUnitary(hadamard_i, h), ValidationError);
  const auto raw = EnergyConservingUnitary::unchecked(hadamard_i, h);
  CHECK_FALSE(raw.validated());
  CHECK(raw.block_leakage() > 0.1);
  CHECK_FALSE(raw.adjoint().validated());

  ComplexMatrix not_unitary = ComplexMatrix::Identity(4, 4);
  not_unitary(0, 0) = 2.0;
  CHECK_THROWS_AS(EnergyConservingUnitary::unchecked(not_unitary, h), ValidationError);

  // The commutator check is scale free: the same V is accepted at any energy unit.
  CHECK_NOTHROW(swap_operation(1.0));
  ComplexMatrix p = ComplexMatrix::Zero(4, 4);
  p(0, 0) = p(3, 3) = 1.0;
  p(1, 2) = p(2, 1) = 1.0;
  CHECK_NOTHROW(EnergyConservingUnitary(p, total_of(qubit(1e6), qubit(1e6))));

  // A unitary validated against a different total Hamiltonian is rejected.
  CHECK_THROWS_AS(ThermalOperation(EnergyConservingUnitary(p, h), qubit(2.0), qubit(2.0), 1.0), ValidationError);
}

TEST_CASE("Petz map with the Gibbs reference is the reversal") {
  Rng rng(34);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = sample_thermal_instance(2 + trial % 2, 2 + trial % 3, rng);
    const auto petz = petz_recovery(inst.op, inst.op.system_gibbs().state);
    CHECK_FALSE(petz.support_restricted);
    CHECK(max_diff(petz.map.matrix(), superoperator(reversal(inst.op)).matrix()) <= 1e-10);
  }
}

TEST_CASE("Petz map recovers its reference") {
  Rng rng(35);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = sample_thermal_instance(3, 3, rng);
    const auto n = superoperator(inst.op);
    const auto theta = random_density_matrix(3, rng);
    const auto petz = petz_recovery(n, theta);
    CHECK(max_diff(petz.map.apply(n.apply(theta.matrix())), theta.matrix()) < 1e-9);
    CHECK(petz.map.is_completely_positive());
  }
  const auto theta = random_density_matrix(3, rng);
  CHECK(max_diff(petz_recovery(Superoperator::identity(3), theta).map.matrix(),
                 Superoperator::identity(3).matrix()) < 1e-12);
}

TEST_CASE("rank-deficient references are flagged") {
  const auto petz = petz_recovery(Superoperator::identity(2), DensityMatrix::basis_state(2, 0));
  CHECK(petz.support_restricted);
}

TEST_CASE("adjoint duality and unitality") {
  Rng rng(36);
  const auto inst = sample_thermal_instance(3, 4, rng);
  const auto n = superoperator(inst.op);
  const auto n_adj = adjoint(inst.op);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix a = random_hermitian(3, rng).matrix() + Complex(0, 1) * random_hermitian(3, rng).matrix();
    const ComplexMatrix b = random_hermitian(3, rng).matrix();
    const Complex lhs = (a * n.apply(b)).trace();
    const Complex rhs = (n_adj.apply(a) * b).trace();
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
  CHECK(max_diff(n_adj.apply(ComplexMatrix::Identity(3, 3)), ComplexMatrix::Identity(3, 3)) <= 1e-10);
  // The dilation-built adjoint agrees with the Hilbert-Schmidt adjoint of the matrix form.
  CHECK(max_diff(n_adj.matrix(), n.adjoint().matrix()) <= 1e-12);
}

TEST_CASE("superoperator conventions") {
  Rng rng(37);
  const ComplexMatrix a = haar_random_unitary(3, rng);
  const ComplexMatrix b = haar_random_unitary(3, rng);
  const ComplexMatrix x = random_hermitian(3, rng).matrix();
  const auto s = Superoperator::sandwich(a, b);
  CHECK(max_diff(s.apply(x), a * x * b) < 1e-14);
  const auto f = Superoperator::from_map(3, [&](const ComplexMatrix& m) { return ComplexMatrix(a * m * b); });
  CHECK(max_diff(f.matrix(), s.matrix()) < 1e-14);
  // then(): this first, next second.
  const auto t = Superoperator::sandwich(b, a);
  CHECK(max_diff(s.then(t).apply(x), b * (a * x * b) * a) < 1e-13);

  const auto inst = sample_thermal_instance(2, 3, rng);
  const auto n = superoperator(inst.op);
  CHECK(n.is_trace_preserving());
  CHECK(n.is_completely_positive());
  CHECK(n.trace_preservation_residual() < 1e-12);
  CHECK_FALSE(Superoperator::sandwich(2.0 * ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)).is_trace_preserving());
}

TEST_CASE("rotated recovery fixes the reference") {
  Rng rng(38);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = sample_thermal_instance(2 + trial % 2, 3, rng);
    const auto& tau = inst.op.system_gibbs().state;
    const auto out = rotated_recovery_average(superoperator(inst.op), tau, tau);
    CHECK(max_diff(out.matrix(), tau.matrix()) < 1e-10);
  }
}

TEST_CASE("rotated recovery is t-independent for classical instances") {
  const auto t = swap_operation(0.9);
  const auto n = superoperator(t);
  const auto& tau = t.system_gibbs().state;
  const RotatedRecovery rot(n, tau);
  const auto sigma = apply(t, DensityMatrix(diag({0.85, 0.15})));
  const ComplexMatrix plain = rot.petz().map.apply(sigma.matrix());
  for (double s : {-3.0, -0.7, 0.0, 0.4, 2.5}) CHECK(max_diff(rot.apply(sigma.matrix(), s), plain) < 1e-12);
  CHECK(max_diff(rot.average(sigma).matrix(), plain) < 1e-12);
}

TEST_CASE("rotated recovery quadrature converges") {
  Rng rng(39);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = sample_thermal_instance(3, 3, rng);
    const auto n = superoperator(inst.op);
    const auto& tau = inst.op.system_gibbs().state;
    const auto sigma = apply(inst.op, inst.rho);
    const auto a = rotated_recovery_average(n, tau, sigma, {64});
    const auto b = rotated_recovery_average(n, tau, sigma, {128});
    CHECK(max_diff(a.matrix(), b.matrix()) <= 1e-9);
  }
}

TEST_CASE("rotation density integrates to one") {
  // Trapezoid on a wide window; the tails decay like e^{-pi |t|}.
  double sum = 0.0;
  const double h = 1e-3;
  for (double t = -20.0; t <= 20.0; t += h) sum += rotation_density(t) * h;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rotation_density(0.0) == doctest::Approx(std::numbers::pi / 4.0));
}

TEST_CASE("rotated recovery bound on Gibbs-preserving mixtures") {
  Rng rng(40);
  for (int trial = 0; trial < 20; ++trial) {
    const Index ds = 2 + trial % 2;
    const auto hs = random_integer_hamiltonian(ds, 2, rng);
    std::uniform_real_distribution<double> u(0.3, 1.5);
    const double beta = u(rng);
    std::vector<Superoperator> maps;
    for (int k = 0; k < 2; ++k) {
      const auto hb = random_integer_hamiltonian(3, 3, rng);
      const auto v = sample_energy_conserving_unitary(total_of(hs, hb), rng());
      maps.push_back(superoperator(ThermalOperation(v, hs, hb, beta)));
    }
    std::uniform_real_distribution<double> w(0.1, 0.9);
    const double p = w(rng);
    const std::array<double, 2> weights{p, 1.0 - p};
    const auto n = Superoperator::mixture(weights, maps);
    const auto tau = gibbs_state(hs, beta).state;
    CHECK(is_gibbs_preserving(n, tau));

    const auto rho = random_density_matrix(ds, rng);
    const auto sigma = n.apply(rho);
    const double d = relative_entropy(rho, tau).value - relative_entropy(sigma, tau).value;
    const auto recovered = rotated_recovery_average(n, tau, sigma);
    CHECK(d >= -2.0 * std::log(fidelity(rho, recovered).root) - 1e-10);
  }
}

TEST_CASE("energy-conserving unitary sampler") {
  SUBCASE("nondegenerate H gives a diagonal unitary") {
    const auto h = HamiltonianSpec::diagonal({0.0, 0.3, 1.1, 2.7});
    const auto v = sample_energy_conserving_unitary(h, 5);
    ComplexMatrix off = v.matrix();
    off.diagonal().setZero();
    CHECK(max_abs(off) == 0.0);
  }
  SUBCASE("commutator residual over many seeds") {
    const auto h = total_of(HamiltonianSpec::diagonal({0.0, 1.0, 2.0}), HamiltonianSpec::diagonal({0.0, 1.0, 1.0, 2.0}));
    const auto tau = gibbs_state(h, 0.6).state;
    double worst = 0.0;
    double worst_fix = 0.0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const auto v = sample_energy_conserving_unitary(h, seed);
      worst = std::max(worst, max_abs(commutator(v.matrix(), h.op().matrix())));
      worst_fix = std::max(worst_fix, max_diff(conjugate(tau, v.matrix()).matrix(), tau.matrix()));
    }
    CHECK(worst <= 1e-10);
    CHECK(worst_fix <= 1e-12);
  }
  SUBCASE("deterministic in the seed") {
    const auto h = total_of(qubit(1.0), qubit(1.0));
    CHECK(max_diff(sample_energy_conserving_unitary(h, 9).matrix(), sample_energy_conserving_unitary(h, 9).matrix()) == 0.0);
    CHECK(max_diff(sample_energy_conserving_unitary(h, 9).matrix(), sample_energy_conserving_unitary(h, 10).matrix()) > 0.0);
  }
}

TEST_CASE("Gibbs-preservation check") {
  Rng rng(41);
  const auto inst = sample_thermal_instance(3, 2, rng);
  const auto& tau = inst.op.system_gibbs().state;
  CHECK(is_gibbs_preserving(superoperator(inst.op), tau));

  const auto reset = Superoperator::from_map(3, [](const ComplexMatrix& x) {
    ComplexMatrix out = ComplexMatrix::Zero(3, 3);
    out(0, 0) = x.trace();
    return out;
  });
  CHECK(reset.is_trace_preserving());
  CHECK_FALSE(is_gibbs_preserving(reset, tau));
  CHECK_THROWS_AS(is_gibbs_preserving(Superoperator::sandwich(2.0 * ComplexMatrix::Identity(3, 3), ComplexMatrix::Identity(3, 3)), tau),
                  ValidationError);
  CHECK_THROWS_AS(rotated_recovery_average(reset, tau, tau), ValidationError);
}

TEST_CASE("relative-entropy drop is a single joint divergence") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = sample_thermal_instance(2 + trial % 2, 2 + trial % 3, rng);
    const auto& t = inst.op;
    const auto& tau = t.system_gibbs().state;
    const auto sigma = apply(t, inst.rho);
    const double d = relative_entropy(inst.rho, tau).value - relative_entropy(sigma, tau).value;
    const ComplexMatrix& v = t.unitary().matrix();
    const DensityMatrix lhs(kron(inst.rho.matrix(), t.env_state().matrix()));
    const DensityMatrix rhs(ComplexMatrix(v.adjoint() * kron(sigma.matrix(), t.env_state().matrix()) * v));
    CHECK(std::abs(d - relative_entropy(lhs, rhs).value) <= 1e-9);

    const auto recovered = apply(reversal(t), sigma);
    const double d_rec = relative_entropy(inst.rho, recovered).value;
    const double neg_log_f = -std::log(fidelity(inst.rho, recovered).squared);
    CHECK(d >= d_rec - 1e-10);
    CHECK(d_rec >= neg_log_f - 1e-10);
  }
}

TEST_CASE("mixture rejects bad weights") {
  const std::array<Superoperator, 2> maps{Superoperator::identity(2), Superoperator::identity(2)};
  const std::array<double, 2> bad{0.5, 0.6};
  CHECK_THROWS_AS(Superoperator::mixture(bad, maps), ValidationError);
  const std::array<double, 2> negative{1.5, -0.5};
  CHECK_THROWS_AS(Superoperator::mixture(negative, maps), ValidationError);
}
