#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qgv/analysis.hpp"
#include "qgv/channels.hpp"
#include "qgv/error.hpp"
#include "qgv/strategies.hpp"
#include "qgv/weyl_bell.hpp"

using namespace qgv;

namespace {

// Exhaustive vertex enumeration: single points with p >= delta and every
// straddling pair mixed to p = delta exactly.
double adversarial_oracle(long n, double delta, double lam) {
  std::vector<double> p, f;
  for (long m = 0; m <= n + 1; ++m) {
    const double lm = m == 0 ? 1.0 : std::pow(lam, double(m));
    const double lm1 = m == 0 ? 0.0 : (m == 1 ? 1.0 : std::pow(lam, double(m - 1)));
    p.push_back(((n + 1 - m) * lm + m * lm1) / (n + 1));
    f.push_back((n + 1 - m) * lm / (n + 1));
  }
  double best = 2.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= delta) best = std::min(best, f[i] / p[i]);
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[i] < delta && p[j] > delta) {
        const double c = (delta - p[i]) / (p[j] - p[i]);
        best = std::min(best, ((1 - c) * f[i] + c * f[j]) / delta);
      }
    }
  }
  return best;
}

Matrix random_bell_diagonal_omega(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Matrix b = bell_basis(d);
  Matrix diag = Matrix::Zero(d * d, d * d);
  diag(0, 0) = 1.0;
  for (int k = 1; k < d * d; ++k) diag(k, k) = 0.9 * u(rng);
  return b * diag * b.adjoint();
}

}  // namespace

TEST_CASE("pass probability bound") {
  const Matrix op = optimal_omega(identity(2));
  CHECK(pass_probability_bound(op, 0.3) == doctest::Approx(1 - 0.2));
  CHECK(pass_probability_bound(op, 0.0) == doctest::Approx(1.0));
  CHECK(pass_probability_bound(unitary_choi(identity(3)), 0.25) == doctest::Approx(0.75));
  CHECK_THROWS_AS(pass_probability_bound(op, 1.5), ValidationError);
}

TEST_CASE("exact Bell-diagonal pass probability") {
  const auto s3 = bell_spectrum_of(optimal_omega(identity(3)), 3);
  CHECK(pass_probability_bell_exact(s3, 0.1) == doctest::Approx(0.925));
  const auto s2 = bell_spectrum_of(optimal_omega(identity(2)), 2);
  CHECK(pass_probability_bell_exact(s2, 1.0) == doctest::Approx(1.0 / 3));
  for (double lam : {0.0, 0.3, 0.8}) {
    const Matrix hom = HomogeneousStrategy{2, lam}.omega(identity(2));
    CHECK(pass_probability_bell_exact(bell_spectrum_of(hom, 2), 0.2) == doctest::Approx(1 - (1 - lam) * 0.2));
  }
  BellSpectrum bad{2, {0.9, 0.1, 0.1, 0.1}};
  CHECK_THROWS_AS(pass_probability_bell_exact(bad, 0.1), ValidationError);

  // Rotated target: the spectrum relative to U matches the identity case.
  std::mt19937_64 rng(3);
  const Matrix u = oracle::random_unitary(3, rng);
  const auto rotated = bell_spectrum_for_target(optimal_omega(u), u);
  CHECK(rotated.at(0, 0) == doctest::Approx(1.0));
  CHECK(rotated.max_off_target() == doctest::Approx(0.25));
}

TEST_CASE("exact value is convex and monotone in Omega") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = random_bell_diagonal_omega(2, rng), b = random_bell_diagonal_omega(2, rng);
    const double w = std::uniform_real_distribution<double>(0, 1)(rng);
    const double eps = 0.2;
    const auto val = [&](const Matrix& m) { return pass_probability_bell_exact(bell_spectrum_of(m, 2), eps); };
    CHECK(val(w * a + (1 - w) * b) <= w * val(a) + (1 - w) * val(b) + 1e-10);
    // Adding a PSD Bell-diagonal increment on an off-target Bell state.
    const Matrix bump = 0.05 * projector(bell_state({1, 1, 2}));
    const Matrix raised = a + bump;
    if (is_effect(raised)) CHECK(val(raised) >= val(a) - 1e-12);
  }
}

TEST_CASE("trial counts") {
  const Matrix op = optimal_omega(identity(2));
  CHECK(trial_count(0.01, 0.01, op) == 689);
  CHECK(trial_count(0.01, 0.01, op) <= static_cast<long>(std::ceil(1.5 / 0.01 * std::log(100.0))));
  CHECK(trial_count(0.01, 1.0, op) == 0);
  CHECK(trial_count_from_gap(1.0, 1.0, 0.5) == 1);
  CHECK_THROWS_AS(trial_count(0.01, 0.01, cb_projector(identity(2))), ValidationError);
  CHECK_THROWS_AS(trial_count(0.0, 0.01, op), ValidationError);
  for (double eps : {0.01, 0.05, 0.2})
    for (double delta : {0.001, 0.05})
      CHECK(trial_count(eps, delta, op) ==
            static_cast<long>(std::ceil(std::log(1 / delta) / std::log(1 / (1 - 2.0 / 3.0 * eps)))));
  CHECK(ceil_count(3.0 * (1 + 1e-15)) == 3);
  CHECK(ceil_count(3.001) == 4);
  CHECK(ceil_count(-1.0) == 0);
}

TEST_CASE("symmetric points") {
  auto p0 = symmetric_point(0, 5, 0.3);
  CHECK(p0.p == doctest::Approx(1.0));
  CHECK(p0.f == doctest::Approx(1.0));
  auto last = symmetric_point(6, 5, 0.0);
  CHECK(last.p == doctest::Approx(0.0));
  CHECK(last.f == doctest::Approx(0.0));
  auto mid = symmetric_point(1, 1, 0.5);
  CHECK(mid.p == doctest::Approx(0.75));
  CHECK(mid.f == doctest::Approx(0.25));
  // lambda^0 = 1 even at lambda = 0.
  CHECK(symmetric_point(1, 3, 0.0).p == doctest::Approx(0.25));
  CHECK_THROWS_AS(symmetric_point(7, 5, 0.3), ValidationError);
  for (long n : {1L, 4L, 20L})
    for (int m = 0; m <= n + 1; ++m) {
      const auto sp = symmetric_point(m, n, 0.4);
      CHECK(sp.f <= sp.p + 1e-15);
      CHECK(sp.p <= 1.0 + 1e-15);
      CHECK(sp.f >= 0.0);
    }
}

TEST_CASE("adversarial bound agrees with pairwise enumeration") {
  for (long n : {1L, 2L, 5L, 17L, 40L})
    for (double delta : {0.01, 0.1, 0.5, 0.6, 0.95})
      for (double lam : {0.0, 0.2, 0.5, std::exp(-1.0), 0.7}) {
        const auto b = adversarial_fidelity_bound(n, delta, lam);
        CHECK(!b.useless);
        CHECK(b.fidelity == doctest::Approx(adversarial_oracle(n, delta, lam)).epsilon(1e-12));
      }
  // delta close to 1 leaves only the all-good state feasible.
  CHECK(adversarial_fidelity_bound(10, 0.999999, 0.5).fidelity == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(adversarial_fidelity_bound(0, 0.1, 0.5), ValidationError);
  CHECK_THROWS_AS(adversarial_fidelity_bound(3, 1.0, 0.5), ValidationError);
}

TEST_CASE("adversarial bound monotonicity") {
  for (double lam : {0.1, std::exp(-1.0), 0.6}) {
    double prev = 0.0;
    for (long n = 1; n <= 200; n += 7) {
      const double f = adversarial_fidelity_bound(n, 0.05, lam).fidelity;
      CHECK(f >= prev - 1e-12);
      prev = f;
    }
    double prev_delta = 0.0;
    for (double delta = 0.01; delta < 0.99; delta += 0.05) {
      const double f = adversarial_fidelity_bound(50, delta, lam).fidelity;
      CHECK(f >= prev_delta - 1e-12);
      prev_delta = f;
    }
  }
}

TEST_CASE("adversarial trial count") {
  const auto e = adversarial_trial_count(0.01, 0.01, std::exp(-1.0));
  const double target = std::exp(1.0) / 0.01 * std::log(100.0);
  CHECK(std::abs(e.N - target) / target < 0.1);
  CHECK(e.monotone);
  CHECK(adversarial_fidelity_bound(e.N, 0.01, std::exp(-1.0)).fidelity >= 0.99);
  CHECK(adversarial_fidelity_bound(e.N - 1, 0.01, std::exp(-1.0)).fidelity < 0.99);
  CHECK(adversarial_trial_count(0.99, 0.5, 0.3).N <= 3);
  CHECK(adversarial_trial_count(0.01, 0.01, 0.0).N > e.N);
}

TEST_CASE("optimal lambda") {
  const double star = optimal_lambda(1000, 0.001);
  CHECK(std::abs(star - std::exp(-1.0)) < 0.05);
  for (long n : {1L, 10L, 100L}) {
    const double best = optimal_lambda(n, 0.05);
    const double value = adversarial_fidelity_bound(n, 0.05, best).fidelity;
    for (double lam : {0.0, 0.2, 0.5, 0.9}) CHECK(value >= adversarial_fidelity_bound(n, 0.05, lam).fidelity - 1e-12);
  }
  // N = 1: compare with a 10^4-point scan.
  double scan = 0.0;
  for (int i = 0; i < 10000; ++i) scan = std::max(scan, adversarial_fidelity_bound(1, 0.05, i / 10000.0).fidelity);
  CHECK(adversarial_fidelity_bound(1, 0.05, optimal_lambda(1, 0.05)).fidelity >= scan - 1e-6);
}

TEST_CASE("numeric bracket") {
  SUBCASE("rank-one operator") {
    std::mt19937_64 rng(2);
    const Matrix u = oracle::random_unitary(2, rng);
    const auto br = pass_probability_numeric(unitary_choi(u), 0.1, u, 500, 3);
    CHECK(br.upper == doctest::Approx(0.9));
    CHECK(br.lower == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(br.lower_fidelity <= 0.9 + 1e-9);
  }
  SUBCASE("Bell-diagonal operators are tight") {
    std::mt19937_64 rng(8);
    for (int d : {2, 3}) {
      const Matrix omega = random_bell_diagonal_omega(d, rng);
      const auto br = pass_probability_numeric(omega, 0.05, identity(d), 2000, 11);
      CHECK(br.lower <= br.upper + 1e-7);
      CHECK(br.upper - br.lower < 1e-4);
    }
  }
  SUBCASE("general operators stay below the bound") {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 5; ++t) {
      std::vector<Basis> bases;
      for (int k = 0; k < 2; ++k) bases.push_back(oracle::random_unitary(2, rng));
      const auto s = strategy_from_bases(identity(2), bases);
      const auto br = pass_probability_numeric(omega_from_strategy(s).matrix, 0.1, identity(2), 600, 5 + t);
      CHECK(br.lower <= br.upper + 1e-7);
    }
  }
}
