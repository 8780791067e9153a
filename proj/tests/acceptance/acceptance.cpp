// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qgv/analysis.hpp"
#include "qgv/channels.hpp"
#include "qgv/hypergraph.hpp"
#include "qgv/property_testing.hpp"
#include "qgv/protocol_sim.hpp"
#include "qgv/stabilizer.hpp"
#include "qgv/strategies.hpp"
#include "qgv/weyl_bell.hpp"

using namespace qgv;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Matrix phi_plus(int d) {
  Matrix v = Matrix::Zero(d * d, 1);
  for (int j = 0; j < d; ++j) v(j * d + j, 0) = 1.0 / std::sqrt(double(d));
  return v * v.adjoint();
}

// Top-two eigenvalue gap via the general solver, independent of spectral_gap.
double oracle_gap(const Matrix& omega) {
  const auto ev = oracle::eigenvalues_desc(omega);
  return 1.0 - ev[1];
}

Outcome optimal_operator() {
  double worst_entry = 0.0, worst_gap = 0.0;
  for (int d : {2, 3, 5}) {
    const Matrix omega = omega_from_strategy(optimal_strategy(identity(d), d)).matrix;
    const Matrix closed = (identity(d * d) + double(d) * phi_plus(d)) / double(d + 1);
    worst_entry = std::max(worst_entry, oracle::max_diff(omega, closed));
    worst_gap = std::max(worst_gap, std::abs(spectral_gap(omega) - double(d) / (d + 1)));
  }
  return {worst_entry < 1e-9 && worst_gap < 1e-10, fmt("max entry residual %.2e, max gap residual %.2e", worst_entry, worst_gap)};
}

long ceil_log_ratio(double delta, double base) { return static_cast<long>(std::ceil(std::log(1 / delta) / std::log(base))); }

Outcome trial_counts() {
  const long n = trial_count(0.01, 0.01, optimal_omega(identity(2)));
  const long ep = ep_detection_rounds(2, 0.05), ep2 = ep_two_mub_rounds(2, 0.05), rob = robustness_rounds(3, 0.01, 1.0);
  // Independent closed forms of the same ceilings.
  const bool formulas = n == ceil_log_ratio(0.01, 1 / (1 - 2.0 / 3 * 0.01)) && ep == ceil_log_ratio(0.05, 1.5) &&
                        ep2 == ceil_log_ratio(0.05, 4.0 / 3) && rob == ceil_log_ratio(0.01, 4.0 / 3);
  return {formulas && n == 689 && ep == 8 && ep2 == 11 && rob == 17,
          "N=" + std::to_string(n) + " EP=" + std::to_string(ep) + " EP2=" + std::to_string(ep2) +
              " robustness=" + std::to_string(rob)};
}

Outcome single_round() {
  const long a = ep_detection_rounds(39, 0.05), b = ep_detection_rounds(38, 0.05);
  return {a == 1 && b == 2, "d=39 -> " + std::to_string(a) + ", d=38 -> " + std::to_string(b)};
}

// Random valid Omega for the identity: a few random bases, optionally mixed with the trivial test.
Matrix random_valid_omega(int d, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Basis> bases;
  const int g = count(rng);
  for (int k = 0; k < g; ++k) bases.push_back(oracle::random_unitary(d, rng));
  Strategy s = strategy_from_bases(identity(d), bases);
  if (u(rng) < 0.5) s = trivial_test_mix(s, 0.5 * u(rng));
  return omega_from_strategy(s).matrix;
}

Outcome twirling() {
  std::mt19937_64 rng(2024);
  int violations = 0;
  double worst_off = 0.0;
  for (int d : {2, 3}) {
    const Matrix b = bell_basis(d);
    for (int t = 0; t < (d == 2 ? 100 : 20); ++t) {
      const Matrix omega = random_valid_omega(d, rng);
      const Matrix tw = bell_twirl(omega, d);
      Matrix in_bell = b.adjoint() * tw * b;
      in_bell.diagonal().setZero();
      const double off = in_bell.cwiseAbs().maxCoeff();
      worst_off = std::max(worst_off, off);
      const bool idem = oracle::max_diff(bell_twirl(tw, d), tw) < 1e-10;
      const bool gap_ok = oracle_gap(tw) >= oracle_gap(omega) - 1e-10;
      if (off >= 1e-10 || !idem || !gap_ok) ++violations;
    }
  }
  return {violations == 0, fmt("%g violations of 120, max off-diagonal %.2e", violations, worst_off)};
}

Outcome weyl_bell_algebra() {
  double worst = 0.0;
  for (int d : {2, 3, 5}) {
    const auto w_of = [d](int u, int v) { return weyl({((u % d) + d) % d, ((v % d) + d) % d, d}); };
    const auto om = [d](int k) { return std::polar(1.0, 2.0 * std::numbers::pi * k / d); };
    Matrix x = Matrix::Zero(d, d), z = Matrix::Zero(d, d);
    for (int l = 0; l < d; ++l) {
      x((l + 1) % d, l) = 1.0;
      z(l, l) = om(l);
    }
    worst = std::max(worst, oracle::max_diff(z * x, om(1) * x * z));
    for (int u = 0; u < d; ++u)
      for (int v = 0; v < d; ++v) {
        Matrix xu = identity(d), zv = identity(d);
        for (int k = 0; k < u; ++k) xu = xu * x;
        for (int k = 0; k < v; ++k) zv = zv * z;
        const Matrix w = w_of(u, v);
        worst = std::max(worst, oracle::max_diff(w, xu * zv));
        worst = std::max(worst, oracle::max_diff(xu * zv, om(-u * v) * zv * xu));
        worst = std::max(worst, oracle::max_diff(w.adjoint(), om(u * v) * w_of(-u, -v)));
        worst = std::max(worst, oracle::max_diff(w * w.adjoint(), identity(d)));
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            const Matrix w2 = w_of(a, b);
            // W_{u,v} W_{a,b} = omega^{v a} W_{u+a, v+b}, and W_{a,b} W_{u,v} = omega^{b u - v a} W_{u,v} W_{a,b}.
            worst = std::max(worst, oracle::max_diff(w * w2, om(v * a) * w_of(u + a, v + b)));
            worst = std::max(worst, oracle::max_diff(w2 * w, om(b * u - v * a) * w * w2));
            const Complex tr = (w.adjoint() * w2).trace();
            worst = std::max(worst, std::abs(tr - Complex((u == a && v == b) ? d : 0.0, 0.0)));
          }
        // Bell state (I (x) W)|Phi+> equals (W^T (x) I)|Phi+>.
        const Matrix ket = oracle::kron(identity(d), w) * max_entangled_ket(d);
        worst = std::max(worst, oracle::max_diff(bell_state({u, v, d}), ket));
        worst = std::max(worst, oracle::max_diff(oracle::kron(w.transpose(), identity(d)) * max_entangled_ket(d), ket));
      }
    const Matrix b = bell_basis(d);
    worst = std::max(worst, oracle::max_diff(b.adjoint() * b, identity(d * d)));
  }
  return {worst < 1e-10, fmt("max residual %.2e over d in {2,3,5}", worst)};
}

CliffordCircuit random_circuit(int n, int length, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 6), qubit(0, n - 1);
  CliffordCircuit c{n, {}};
  for (int k = 0; k < length; ++k) {
    auto g = static_cast<CliffordGateKind>(kind(rng));
    if ((g == CliffordGateKind::CZ || g == CliffordGateKind::CNOT) && n < 2) g = CliffordGateKind::S;
    int a = qubit(rng), b = -1;
    if (g == CliffordGateKind::CZ || g == CliffordGateKind::CNOT) {
      do b = qubit(rng);
      while (b == a);
    }
    c.gates.push_back({g, a, b});
  }
  return c;
}

Outcome clifford() {
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> bit(0, 1), ph(0, 3);
  int mismatches = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 3;
    const auto c = random_circuit(n, 15, rng);
    PauliString p = PauliString::identity(n);
    for (int q = 0; q < n; ++q) {
      p.x[q] = bit(rng);
      p.z[q] = bit(rng);
    }
    p.phase = ph(rng);
    const Matrix u = circuit_unitary(c);
    if (oracle::max_diff(conjugate_pauli(c, p).to_matrix(), u * p.to_matrix() * u.adjoint()) > 1e-10) ++mismatches;
  }
  double worst = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int n = 1; n <= 3; ++n) {
    const auto c = random_circuit(n, 10, rng);
    const double gen = oracle_gap(omega_from_strategy(generator_strategy(c)).matrix);
    const double full = oracle_gap(omega_from_strategy(full_stabilizer_strategy(c)).matrix);
    const double four = std::pow(4.0, n);
    worst = std::max(worst, std::abs(gen - 1.0 / (2 * n)));
    worst = std::max(worst, std::abs(full - four / 2 / (four - 1)));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {mismatches == 0 && worst < 1e-9,
          fmt("%g/200 conjugation mismatches, max gap residual %.2e, gaps in %.1f s", mismatches, worst, secs)};
}

Outcome hypergraph() {
  double worst_state = 0.0, worst_gap = 0.0;
  for (int n : {2, 3})
    for (auto gate : {MultiControlledGate::CnZ, MultiControlledGate::CnX}) {
      const int dim = 1 << n;
      Matrix u = Matrix::Identity(dim, dim);
      if (gate == MultiControlledGate::CnZ) {
        u(dim - 1, dim - 1) = -1.0;
      } else {
        u.block(dim - 2, dim - 2, 2, 2) << 0.0, 1.0, 1.0, 0.0;
      }
      Matrix choi_ket = Matrix::Zero(dim * dim, 1);
      for (int j = 0; j < dim; ++j) choi_ket += oracle::kron(ket(dim, j), u.col(j)) / std::sqrt(double(dim));
      const Matrix dressed = dressed_hypergraph_state(choi_hypergraph(n, gate));
      worst_state = std::max(worst_state, oracle::max_diff(dressed * dressed.adjoint(), choi_ket * choi_ket.adjoint()));
      worst_state = std::max(worst_state, oracle::max_diff(unitary_choi(u), choi_ket * choi_ket.adjoint()));
      const double gap = oracle_gap(omega_from_strategy(color_strategy(n, gate)).matrix);
      worst_gap = std::max(worst_gap, std::abs(gap - 1.0 / (n + 1)));
    }
  return {worst_state < 1e-9 && worst_gap < 1e-9,
          fmt("max state residual %.2e, max coloring gap residual %.2e", worst_state, worst_gap)};
}

Outcome simulator() {
  const auto t0 = std::chrono::steady_clock::now();
  const Strategy s = optimal_strategy(identity(2), 2);
  const auto depol = compose(unitary_channel(identity(2)), make_noise(NoiseKind::depolarizing, 0.1, 2));
  const long rounds = 100000;
  const auto run = run_verification(depol, s, rounds, 11, 4);
  const double sigma = std::sqrt(0.95 * 0.05 / rounds);
  const bool rate_ok = std::abs(run.empirical_pass_rate - 0.95) <= 3 * sigma;

  // Calibration: Bell-diagonal noise with infidelity exactly epsilon.
  const double eps = 0.1, delta = 0.1;
  const Matrix omega = omega_from_strategy(s).matrix;
  const auto noisy = compose(unitary_channel(identity(2)), weyl_error_channel(2, 1, 0, eps));
  const double fid = entanglement_fidelity(choi_from_kraus(noisy), identity(2));
  const long n = trial_count(eps, delta, omega);
  const long reps = 10000;
  long accepted = 0;
  for (long r = 0; r < reps; ++r) {
    const auto v = verdict(run_verification(noisy, s, n, 1000 + static_cast<std::uint64_t>(r)), eps, delta, omega);
    accepted += v.accepted;
  }
  const double frac = double(accepted) / reps;
  const double cal_sigma = std::sqrt(delta * (1 - delta) / reps);
  const bool cal_ok = std::abs(fid - (1 - eps)) < 1e-12 && frac <= delta + 3 * cal_sigma;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[300];
  std::snprintf(buf, sizeof buf,
                "pass rate %.5f (|dev| %.2f sigma); accept fraction %.4f at N=%ld vs bound %.4f; %.1f s",
                run.empirical_pass_rate, std::abs(run.empirical_pass_rate - 0.95) / sigma, frac, n,
                delta + 3 * cal_sigma, secs);
  return {rate_ok && cal_ok, buf};
}

// Minimum of f/p over two-point mixtures with p >= delta: each pair's mixing
// weight is scanned on a 10^4-point grid, and the p = delta crossing is
// located by bisection so the grid does not limit the precision.
double brute_force_F(long n, double delta, double lam) {
  std::vector<double> p, f;
  for (long m = 0; m <= n + 1; ++m) {
    const double lm = std::pow(lam, double(m));
    const double lm1 = m == 0 ? 0.0 : std::pow(lam, double(m - 1));
    p.push_back(((n + 1 - m) * lm + m * lm1) / (n + 1));
    f.push_back((n + 1 - m) * lm / (n + 1));
  }
  double best = 2.0;
  const auto consider = [&](double pp, double ff) {
    if (pp >= delta && pp > 0) best = std::min(best, ff / pp);
  };
  const int grid = 10000;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i; j < p.size(); ++j) {
      for (int k = 0; k <= grid; ++k) {
        const double c = double(k) / grid;
        consider((1 - c) * p[i] + c * p[j], (1 - c) * f[i] + c * f[j]);
      }
      if ((p[i] - delta) * (p[j] - delta) < 0) {
        double lo = 0.0, hi = 1.0;  // p(lo) and p(hi) stay on opposite sides of delta
        const double sign = p[i] < delta ? 1.0 : -1.0;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (sign * ((1 - mid) * p[i] + mid * p[j] - delta) < 0) lo = mid;
          else hi = mid;
        }
        for (double c : {lo, hi}) consider((1 - c) * p[i] + c * p[j], (1 - c) * f[i] + c * f[j]);
      }
    }
  return best;
}

Outcome adversarial() {
  double worst = 0.0;
  int cells = 0;
  for (long n = 1; n <= 50; ++n)
    for (double delta : {0.01, 0.1, 0.5})
      for (double lam : {0.0, 0.2, std::exp(-1.0), 0.7}) {
        worst = std::max(worst, std::abs(adversarial_fidelity_bound(n, delta, lam).fidelity - brute_force_F(n, delta, lam)));
        ++cells;
      }
  const long n = adversarial_trial_count(0.01, 0.01, std::exp(-1.0)).N;
  const double reference = std::exp(1.0) / 0.01 * std::log(100.0);
  const double rel = std::abs(n - reference) / reference;
  const double star = optimal_lambda(5000, 0.001);
  return {worst < 1e-9 && rel <= 0.1 && std::abs(star - std::exp(-1.0)) <= 0.05,
          fmt("max |F - brute| %.2e over %g cells; N=%g vs %.0f", worst, cells, double(n), reference) +
              fmt(" (%.1f%%); lambda*=%.4f", 100 * rel, star)};
}

Outcome sdp_bracket() {
  std::mt19937_64 rng(99);
  double worst_gap = 0.0;
  int bell_cases = 0;
  for (int d : {2, 3}) {
    std::vector<Matrix> omegas{optimal_omega(identity(d)), omega_from_strategy(g_mub_strategy(identity(d), d, 2)).matrix,
                               HomogeneousStrategy{d, std::exp(-1.0)}.omega(identity(d)),
                               bell_twirl(random_valid_omega(d, rng), d)};
    for (const auto& om : omegas) {
      const auto br = pass_probability_numeric(om, 0.05, identity(d), 2000, 7);
      worst_gap = std::max(worst_gap, br.upper - br.lower);
      ++bell_cases;
    }
  }
  int violations = 0;
  double min_margin = 1.0;
  for (int t = 0; t < 20; ++t) {
    const int d = t < 10 ? 2 : 3;
    const Matrix u = oracle::random_unitary(d, rng);
    std::vector<Basis> bases{oracle::random_unitary(d, rng), oracle::random_unitary(d, rng)};
    const Matrix om = omega_from_strategy(strategy_from_bases(u, bases)).matrix;
    const auto br = pass_probability_numeric(om, 0.1, u, 400, 100 + t, 3);
    if (br.lower > br.upper + 1e-9) ++violations;
    min_margin = std::min(min_margin, br.upper - br.lower);
  }
  return {worst_gap <= 1e-4 && violations == 0,
          fmt("Bell-diagonal max (upper - lower) %.2e over %g cases; %g/20 general violations, min margin %.2e",
              worst_gap, bell_cases, violations, min_margin)};
}

Outcome fidelity_relation() {
  std::mt19937_64 rng(31337);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst_sigmas = 0.0;
  bool ok = true;
  for (int c = 0; c < 5; ++c) {
    const auto ops = oracle::random_kraus(2, 1 + c % 4, rng);
    const Matrix u = oracle::random_unitary(2, rng);
    const double fe = entanglement_fidelity(choi_from_kraus(KrausChannel{2, ops}), u);
    const double fa = average_fidelity(fe, 2);
    const int samples = 10000;
    double sum = 0.0, sum2 = 0.0;
    for (int k = 0; k < samples; ++k) {
      Vector psi(2);
      for (int a = 0; a < 2; ++a) psi(a) = Complex(g(rng), g(rng));
      psi.normalize();
      const Matrix rho = psi * psi.adjoint();
      const Vector target = u * psi;
      const double x = (target.adjoint() * oracle::apply(ops, rho) * target)(0, 0).real();
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / samples;
    const double se = std::sqrt(std::max(sum2 / samples - mean * mean, 0.0) / samples);
    const double sigmas = std::abs(mean - fa) / se;
    worst_sigmas = std::max(worst_sigmas, sigmas);
    ok = ok && sigmas <= 3.0 && std::abs(fa - (2 * fe + 1) / 3) < 1e-14;
  }
  return {ok, fmt("worst deviation %.2f sigma over 5 channels", worst_sigmas)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"optimal operator identity", optimal_operator},
      {"trial-count arithmetic", trial_counts},
      {"single-round entanglement detection", single_round},
      {"twirling", twirling},
      {"Weyl/Bell algebra", weyl_bell_algebra},
      {"Clifford oracle equivalence", clifford},
      {"hypergraph gates", hypergraph},
      {"simulator statistics", simulator},
      {"adversarial bound", adversarial},
      {"numeric pass-probability bracket", sdp_bracket},
      {"fidelity relation", fidelity_relation},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o{false, ""};
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
