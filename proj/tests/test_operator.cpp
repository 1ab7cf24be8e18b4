#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "thermorec/json_io.hpp"
#include "thermorec/operator.hpp"
#include "thermorec/quadrature.hpp"
#include "thermorec/sampling.hpp"

using namespace thermorec;
using thermorec::testing::diag;
using thermorec::testing::max_diff;

TEST_CASE("tensor of identities and of diagonal states") {
  const auto i2 = HermitianOperator::identity(2);
  CHECK(max_diff(tensor(i2, i2).matrix(), ComplexMatrix::Identity(4, 4)) == 0.0);

  const DensityMatrix a(diag({1.0, 0.0}));
  const DensityMatrix b(diag({0.5, 0.5}));
  CHECK(max_diff(tensor(a, b).matrix(), diag({0.5, 0.5, 0.0, 0.0})) == 0.0);
}

TEST_CASE("tensor is associative") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_density_matrix(2, rng);
    const auto b = random_density_matrix(3, rng);
    const auto c = random_density_matrix(2, rng);
    CHECK(max_diff(tensor(tensor(a, b), c).matrix(), tensor(a, tensor(b, c)).matrix()) < 1e-15);
  }
}

TEST_CASE("partial trace of a product state returns the factor") {
  Rng rng(11);
  const auto rho = random_density_matrix(3, rng);
  const auto sigma = random_density_matrix(2, rng);
  const CompositeSpace space({3, 2});
  CHECK(max_diff(partial_trace(tensor(rho, sigma), space, {0}).matrix(), rho.matrix()) < 1e-14);
  CHECK(max_diff(partial_trace(tensor(rho, sigma), space, {1}).matrix(), sigma.matrix()) < 1e-14);
}

TEST_CASE("partial trace of a maximally entangled state is maximally mixed") {
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const auto reduced = partial_trace(DensityMatrix::pure(bell), CompositeSpace({2, 2}), {0});
  CHECK(max_diff(reduced.matrix(), diag({0.5, 0.5})) < 1e-15);
}

TEST_CASE("partial trace preserves trace and keeps factor order") {
  Rng rng(3);
  const CompositeSpace space({2, 3, 2});
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_hermitian(12, rng);
    for (const auto& keep : std::vector<std::vector<std::size_t>>{{0}, {1}, {2}, {0, 2}, {1, 2}}) {
      CHECK(std::abs(partial_trace(m, space, keep).trace() - m.trace()) < 1e-12);
    }
    CHECK(max_diff(partial_trace(m.matrix(), space, {2, 0}), partial_trace(m.matrix(), space, {0, 2})) == 0.0);
  }
}

TEST_CASE("partial trace is adjoint to tensoring with the identity") {
  Rng rng(5);
  const CompositeSpace space({3, 4});
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_hermitian(3, rng);
    const auto m = random_hermitian(12, rng);
    const Complex lhs = (kron(a.matrix(), ComplexMatrix::Identity(4, 4)) * m.matrix()).trace();
    const Complex rhs = (a.matrix() * partial_trace(m, space, {0}).matrix()).trace();
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("partial trace rejects bad arguments") {
  const auto m = HermitianOperator::identity(6);
  CHECK_THROWS_AS(partial_trace(m, CompositeSpace({2, 2}), {0}), ValidationError);
  CHECK_THROWS_AS(partial_trace(m, CompositeSpace({2, 3}), {}), ValidationError);
  CHECK_THROWS_AS(partial_trace(m, CompositeSpace({2, 3}), {2}), ValidationError);
}

TEST_CASE("composite index convention: leftmost factor slowest") {
  const CompositeSpace space({2, 3, 4});
  const std::vector<Index> d{1, 2, 3};
  CHECK(space.global_index(d) == 1 * 12 + 2 * 4 + 3);
  for (Index g = 0; g < space.total_dim(); ++g) CHECK(space.global_index(space.digits(g)) == g);
}

TEST_CASE("matrix functions") {
  SUBCASE("exp of zero is the identity") {
    const auto e = matrix_function(HermitianOperator::zero(3), [](double x) { return std::exp(x); }, false);
    CHECK(max_diff(e.matrix(), ComplexMatrix::Identity(3, 3)) == 0.0);
  }
  SUBCASE("sqrt of diag(4, 9)") {
    const auto s = matrix_function(HermitianOperator(diag({4.0, 9.0})), [](double x) { return std::sqrt(x); }, false);
    CHECK(max_diff(s.matrix(), diag({2.0, 3.0})) == 0.0);
  }
  SUBCASE("log evaluated on the support only") {
    const auto l = matrix_function(HermitianOperator(diag({0.5, 0.0})), [](double x) { return std::log(x); }, true);
    CHECK(max_diff(l.matrix(), diag({std::log(0.5), 0.0})) == 0.0);
  }
  SUBCASE("log of a retained zero or negative eigenvalue is a domain error") {
    const auto log_fn = [](double x) { return std::log(x); };
    CHECK_THROWS_AS(matrix_function(HermitianOperator(diag({0.5, 0.0})), log_fn, false), DomainError);
    CHECK_THROWS_AS(matrix_function(HermitianOperator(diag({0.5, -0.25})), log_fn, true), DomainError);
  }
  SUBCASE("identity function reproduces the operator") {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
      const auto m = random_hermitian(5, rng);
      CHECK(max_diff(matrix_function(m, [](double x) { return x; }, true).matrix(), m.matrix()) < 1e-12);
    }
  }
  SUBCASE("support convention follows the relative rank tolerance") {
    // A tiny eigenvalue relative to the largest is treated as zero, independent of scale.
    const auto p = support_projector(DensityMatrix(diag({1.0 - 1e-15, 1e-15})));
    CHECK(max_diff(p.matrix(), diag({1.0, 0.0})) == 0.0);
  }
}

TEST_CASE("unitary conjugation") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_hermitian(4, rng);
    const ComplexMatrix u = haar_random_unitary(4, rng);
    CHECK(max_diff(conjugate(m, ComplexMatrix::Identity(4, 4)).matrix(), m.matrix()) < 1e-15);
    const auto c = conjugate(m, u);
    CHECK((c.eigen().values - m.eigen().values).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(max_diff(conjugate(c, u.adjoint()).matrix(), m.matrix()) < 1e-12);
    CHECK(max_abs(c.matrix() - c.matrix().adjoint()) == 0.0);
    CHECK(c.matrix().allFinite());
  }
  ComplexMatrix not_unitary = ComplexMatrix::Identity(2, 2);
  not_unitary(0, 1) = 0.1;
  CHECK_THROWS_AS(conjugate(HermitianOperator::identity(2), not_unitary), ValidationError);
}

TEST_CASE("construction-time validation") {
  ComplexMatrix asym = diag({0.5, 0.5});
  asym(0, 1) = 0.1;
  CHECK_THROWS_AS(HermitianOperator{asym}, ValidationError);
  CHECK_THROWS_AS(DensityMatrix(diag({1.2, -0.2})), ValidationError);
  CHECK_THROWS_AS(DensityMatrix(diag({0.5, 0.4})), ValidationError);
  ComplexMatrix nan = diag({0.5, 0.5});
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(HermitianOperator{nan}, ValidationError);
  CHECK_THROWS_AS(HermitianOperator{ComplexMatrix(2, 3)}, ValidationError);

  // Stored form is the symmetrized matrix.
  ComplexMatrix near = diag({0.5, 0.5});
  near(0, 1) = Complex(0.1, 1e-14);
  near(1, 0) = Complex(0.1, 0.0);
  const HermitianOperator h(near);
  CHECK(max_abs(h.matrix() - h.matrix().adjoint()) == 0.0);
}

TEST_CASE("max_dim caps matrix sizes") {
  Tolerances t = tolerances();
  t.max_dim = 8;
  thermorec::testing::ScopedTolerances scoped(t);
  CHECK_NOTHROW(HermitianOperator::identity(8));
  CHECK_THROWS_AS(HermitianOperator::identity(9), ValidationError);
  CHECK_THROWS_AS(CompositeSpace({3, 3}), ValidationError);
}

TEST_CASE("density matrix caches a descending clamped spectrum") {
  const DensityMatrix rho(diag({0.2, 0.5, 0.3, 0.0}));
  const auto& e = rho.eigen();
  CHECK(e.values(0) == doctest::Approx(0.5));
  CHECK(e.values(3) == 0.0);
  CHECK(rho.rank() == 3);
  CHECK_FALSE(rho.full_rank());
}

TEST_CASE("tolerance overrides") {
  Tolerances t;
  apply_tolerance_override(t, "commutator=1e-8");
  CHECK(t.commutator == 1e-8);
  CHECK_THROWS_AS(apply_tolerance_override(t, "commutator=1e-20"), ValidationError);
  CHECK_THROWS_AS(apply_tolerance_override(t, "nonsense=1"), ValidationError);
  CHECK_THROWS_AS(apply_tolerance_override(t, "commutator"), ValidationError);
}

TEST_CASE("JSON matrix format") {
  Rng rng(17);
  const auto rho = random_density_matrix(3, rng);
  const auto j = matrix_to_json(rho.matrix());
  CHECK(j.at("dim") == 3);
  CHECK(j.at("entries").size() == 9);
  // Round trip at the 12 significant digits the format carries.
  CHECK(max_diff(matrix_from_json(j), rho.matrix()) < 1e-12);

  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse(R"({"dim": 2, "entries": [[1,0]]})")), ValidationError);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse(R"({"entries": []})")), ValidationError);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse(R"({"dim": 1, "entries": [[1]]})")), ValidationError);
}

TEST_CASE("Gauss-Legendre rules") {
  const auto two = gauss_legendre(2);
  CHECK(two.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(two.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

  for (int n : {1, 5, 16, 64, 128}) {
    const auto rule = gauss_legendre(n);
    // Exact for x^k, k <= 2n - 1: integral over [-1, 1] is 2/(k+1) for even k.
    for (int k = 0; k <= std::min(2 * n - 1, 30); ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], k);
      const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
      CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), ValidationError);
}
