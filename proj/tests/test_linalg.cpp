#include <doctest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "qgv/error.hpp"
#include "qgv/linalg.hpp"

using namespace qgv;

TEST_CASE("kron matches index-loop product") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = oracle::gaussian(2 + trial % 3, 3, rng);
    const Matrix b = oracle::gaussian(3, 1 + trial % 2, rng);
    CHECK(oracle::max_diff(kron(a, b), oracle::kron(a, b)) < 1e-14);
  }
  const Matrix factors[] = {identity(2), oracle::gaussian(2, 2, rng), oracle::gaussian(3, 3, rng)};
  CHECK(oracle::max_diff(kron_all(factors), oracle::kron(oracle::kron(factors[0], factors[1]), factors[2])) < 1e-13);
}

TEST_CASE("partial trace agrees with explicit sums") {
  std::mt19937_64 rng(5);
  const Matrix m = oracle::random_density(6, rng);
  const int dims[] = {2, 3};
  const int keep_a[] = {0};
  const int keep_b[] = {1};
  CHECK(oracle::max_diff(partial_trace(m, dims, keep_a), oracle::trace_b(m, 2, 3)) < 1e-14);
  CHECK(oracle::max_diff(partial_trace(m, dims, keep_b), oracle::trace_a(m, 2, 3)) < 1e-14);

  // Three factors: keeping {0, 2} of A (x) B (x) C equals Tr_B computed by hand.
  const Matrix a = oracle::random_density(2, rng), b = oracle::random_density(3, rng), c = oracle::random_density(2, rng);
  const Matrix abc = oracle::kron(oracle::kron(a, b), c);
  const int dims3[] = {2, 3, 2};
  const int keep3[] = {2, 0};
  CHECK(oracle::max_diff(partial_trace(abc, dims3, keep3), oracle::kron(a, c)) < 1e-13);

  const int bad[] = {4, 2};
  CHECK_THROWS_AS(partial_trace(m, bad, keep_a), ValidationError);
}

TEST_CASE("hermitian_eig reconstructs and sorts") {
  std::mt19937_64 rng(3);
  const Matrix g = oracle::gaussian(5, 5, rng);
  const Matrix h = g + g.adjoint();
  const auto spec = hermitian_eig(h);
  REQUIRE(spec.eigenvalues.size() == 5);
  for (std::size_t i = 1; i < spec.eigenvalues.size(); ++i) CHECK(spec.eigenvalues[i - 1] >= spec.eigenvalues[i]);
  const auto ref = oracle::eigenvalues_desc(h);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(spec.eigenvalues[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  Matrix diag = Matrix::Zero(5, 5);
  for (int i = 0; i < 5; ++i) diag(i, i) = spec.eigenvalues[static_cast<std::size_t>(i)];
  CHECK(oracle::max_diff(spec.eigenvectors * diag * spec.eigenvectors.adjoint(), h) < 1e-12);
  CHECK_THROWS_AS(hermitian_eig(g), ValidationError);
}

TEST_CASE("eigenspaces group degenerate eigenvalues") {
  std::mt19937_64 rng(8);
  const Matrix u = oracle::random_unitary(4, rng);
  Matrix d = Matrix::Zero(4, 4);
  d(0, 0) = 1.0;
  d(1, 1) = 0.25;
  d(2, 2) = 0.25;
  d(3, 3) = 0.25 + 1e-10;
  const auto spaces = eigenspaces(hermitian_eig(u * d * u.adjoint()));
  REQUIRE(spaces.size() == 2);
  CHECK(spaces[0].basis.cols() == 1);
  CHECK(spaces[1].basis.cols() == 3);
  const Matrix p = spaces[1].projector();
  CHECK(oracle::max_diff(p * p, p) < 1e-10);
  CHECK(oracle::max_diff(spaces[1].basis.adjoint() * spaces[1].basis, identity(3)) < 1e-10);
}

TEST_CASE("haar_random_unitary is unitary and deterministic") {
  for (int d : {2, 3, 8}) {
    const Matrix u = haar_random_unitary(d, 42);
    CHECK(is_unitary(u));
    CHECK(oracle::max_diff(u, haar_random_unitary(d, 42)) == 0.0);
    CHECK(oracle::max_diff(u, haar_random_unitary(d, 43)) > 1e-3);
  }
}

TEST_CASE("predicates") {
  Matrix m = identity(2);
  CHECK(is_psd(m));
  CHECK(is_effect(m));
  CHECK(!is_effect(2.0 * m));
  m(0, 0) = -0.1;
  CHECK(!is_psd(m));
  CHECK(is_power_of_two(8));
  CHECK(!is_power_of_two(6));
  CHECK(log2_exact(16) == 4);
  CHECK_THROWS_AS(log2_exact(12), ValidationError);
  Matrix nan = identity(2);
  nan(0, 1) = std::nan("");
  CHECK(!all_finite(nan));
  CHECK(trace(identity(3)) == Complex(3.0, 0.0));
  CHECK(max_eigenvalue(identity(3)) == doctest::Approx(1.0));
  CHECK(min_eigenvalue(-identity(3)) == doctest::Approx(-1.0));
}
