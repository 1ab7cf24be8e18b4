#include <cmath>

#include "test_support.hpp"
#include "thermorec/oscillator.hpp"
#include "thermorec/workbounds.hpp"

using namespace thermorec;
using thermorec::testing::diag;
using thermorec::testing::max_diff;

TEST_CASE("admissible p0 interval and mixing parameter") {
  CHECK_THROWS_AS(OscillatorInstance::create(1.0, 0.5), ValidationError);
  CHECK_THROWS_AS(OscillatorInstance::create(1.0, 1.01), ValidationError);
  CHECK_THROWS_AS(OscillatorInstance::create(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(OscillatorInstance::create(1.0, 0.9, 0), ValidationError);

  const auto pure = OscillatorInstance::create(1.0, 1.0);
  CHECK(pure.b() == doctest::Approx(1.0).epsilon(1e-15));
  const auto lowest = OscillatorInstance::create(1.0, 1.0 - std::exp(-1.0));
  CHECK(std::abs(lowest.b()) < 1e-15);
  CHECK(lowest.b() >= 0.0);
}

TEST_CASE("automatic truncation meets the tail bound") {
  for (double be : {0.5, 1.0, 2.0, 5.0}) {
    const auto inst = OscillatorInstance::create(be, 1.0);
    CHECK(inst.truncation_tail() <= 1e-12);
    const double q = std::exp(-be);
    CHECK(std::pow(q, inst.n_max()) / (1.0 - q) > 1e-12);
  }
  CHECK(auto_truncation(1.0) == 28);
}

TEST_CASE("unitary structure") {
  for (double p0 : {1.0, 0.8, 0.7}) {
    const auto inst = OscillatorInstance::create(1.0, p0);
    const auto u = build_unitary(inst);
    const ComplexMatrix& m = u.matrix();
    const Index n = m.rows();
    CHECK(max_diff(m * m, ComplexMatrix::Identity(n, n)) < 1e-14);
    CHECK(max_diff(m, m.adjoint()) == 0.0);
    CHECK(u.commutator_residual() <= 1e-10);
  }
  const auto pure = build_unitary(OscillatorInstance::create(1.0, 1.0)).matrix();
  ComplexMatrix off = pure;
  off.diagonal().setZero();
  CHECK(max_abs(off) < 1e-15);
}

TEST_CASE("forward state") {
  CHECK(max_diff(forward_state(OscillatorInstance::create(1.0, 1.0)).matrix(), diag({1.0, 0.0})) < 1e-12);
  CHECK(max_diff(forward_state(OscillatorInstance::create(1.0, 0.8)).matrix(), diag({0.8, 0.2})) <= 1e-10);

  for (double p0 : {0.65, 0.8, 0.95}) {
    const auto a = OscillatorInstance::create(1.0, p0);
    const auto b = OscillatorInstance::create(1.0, p0, a.n_max() + 10);
    CHECK(max_diff(forward_state(a).matrix(), forward_state(b).matrix()) <= 1e-10);
  }
}

TEST_CASE("reversal populations") {
  const auto pure = reversal_populations(OscillatorInstance::create(1.0, 1.0));
  CHECK(pure.p0_closed == 1.0);
  CHECK(std::abs(pure.p0_matrix - 1.0) < 1e-12);

  const auto z_b = OscillatorInstance::create(1.0, 1.0 - std::exp(-1.0));
  const auto r = reversal_populations(z_b);
  CHECK(r.p0_closed == doctest::Approx(0.7674558420651704).epsilon(1e-14));
  CHECK(r.residual <= 1e-9);

  for (double be : {0.5, 1.0, 2.0}) {
    const double lo = 1.0 - std::exp(-be);
    for (int k = 0; k <= 10; ++k) {
      const double p0 = lo + (1.0 - lo) * k / 10.0;
      const auto rp = reversal_populations(OscillatorInstance::create(be, p0));
      CHECK(rp.residual <= 1e-9);
      CHECK(rp.p0_closed >= p0 * p0);
    }
  }
}

TEST_CASE("invest bound special cases") {
  for (double be : {0.5, 1.0, 2.0}) {
    CHECK(std::abs(invest_bound(OscillatorInstance::create(be, 1.0))) <= 1e-12);

    const double z_s = 1.0 + std::exp(-be);
    CHECK(invest_bound(OscillatorInstance::create(be, 1.0 / z_s)) == doctest::Approx(std::log(z_s)).epsilon(1e-12));

    const double z_b = 1.0 / (1.0 - std::exp(-be));
    const double expected = -std::log(1.0 + std::exp(-2.0 * be) - std::exp(-be));
    CHECK(std::abs(invest_bound(OscillatorInstance::create(be, 1.0 / z_b)) - expected) <= 1e-9);
  }
  CHECK(invest_bound(OscillatorInstance::create(1.0, 1.0 / (1.0 + std::exp(-1.0)))) ==
        doctest::Approx(0.3132616875182228).epsilon(1e-13));
  CHECK(invest_bound(OscillatorInstance::create(1.0, 1.0 - std::exp(-1.0))) ==
        doctest::Approx(0.2646743359444808).epsilon(1e-13));
}

TEST_CASE("closed form matches the matrix pipeline") {
  for (double be : {0.5, 1.0, 2.0}) {
    const double lo = 1.0 - std::exp(-be);
    for (int k = 0; k <= 8; ++k) {
      const auto check = invest_bound_check(OscillatorInstance::create(be, lo + (1.0 - lo) * k / 8.0));
      CHECK(check.residual <= 1e-8);
    }
  }
}

TEST_CASE("special case 2 is tight against the nano invest bound") {
  for (double be : {0.5, 1.0, 2.0}) {
    const auto inst = OscillatorInstance::create(be, 1.0 / (1.0 + std::exp(-be)));
    const auto tau = gibbs_state(inst.system_hamiltonian(), be).state;
    const double nano = nano_invest_bound(tau, DensityMatrix::basis_state(2, 0), tau).value;
    CHECK(std::abs(nano - invest_bound(inst)) <= 1e-9);
  }
}

TEST_CASE("invest bound decreases towards pure targets") {
  for (double be : {0.5, 1.0, 2.0}) {
    const double start = 1.0 / (1.0 + std::exp(-be));
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 40; ++k) {
      const double b = invest_bound(OscillatorInstance::create(be, start + (1.0 - start) * k / 40.0));
      CHECK(b <= prev + 1e-15);
      prev = b;
    }
  }
}

TEST_CASE("the operation is its own reversal") {
  const auto t = thermal_operation(OscillatorInstance::create(1.0, 0.75));
  CHECK(max_diff(superoperator(reversal(t)).matrix(), superoperator(t).matrix()) < 1e-14);
  const auto adj = adjoint(t);
  CHECK(max_diff(adj.apply(ComplexMatrix::Identity(2, 2)), ComplexMatrix::Identity(2, 2)) <= 1e-10);
}
