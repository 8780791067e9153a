#include "qgv/protocol_sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include "qgv/analysis.hpp"
#include "qgv/channels.hpp"
#include "qgv/error.hpp"

namespace qgv {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int draw(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const auto idx = static_cast<int>(it - cdf.begin());
  return std::min(idx, static_cast<int>(cdf.size()) - 1);
}

std::vector<double> cumulative(const std::vector<double>& w) {
  std::vector<double> cdf(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) cdf[i] = (acc += w[i]);
  for (auto& c : cdf) c /= acc;
  return cdf;
}

// Pure decomposition of an input state: computational basis if diagonal, else its eigenbasis.
void pure_components(const Matrix& rho, std::vector<double>& weights, std::vector<Vector>& kets) {
  const auto d = rho.rows();
  Matrix off = rho;
  off.diagonal().setZero();
  if (max_abs(off) < 1e-12) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double w = rho(i, i).real();
      if (w > 1e-14) {
        weights.push_back(w);
        kets.push_back(Vector::Unit(d, i));
      }
    }
    return;
  }
  const auto spec = hermitian_eig(rho);
  for (std::size_t j = 0; j < spec.eigenvalues.size(); ++j) {
    if (spec.eigenvalues[j] > 1e-14) {
      weights.push_back(spec.eigenvalues[j]);
      kets.push_back(spec.eigenvectors.col(static_cast<Eigen::Index>(j)));
    }
  }
}

TrialRecord sample_round(const PairTable& t, std::uint64_t seed, long r) {
  const auto round = static_cast<std::uint64_t>(r);
  const int l = draw(t.pair_cdf, keyed_uniform(seed, round, 0));
  const auto& ccdf = t.component_cdf[static_cast<std::size_t>(l)];
  const int c = ccdf.size() == 1 ? 0 : draw(ccdf, keyed_uniform(seed, round, 1));
  const double q = t.pass[static_cast<std::size_t>(l)][static_cast<std::size_t>(c)];
  return {r, l, keyed_uniform(seed, round, 2) < q};
}

void finish(VerificationRun& run) {
  run.failures = 0;
  for (const auto& rec : run.records) run.failures += rec.passed ? 0 : 1;
  run.all_passed = run.failures == 0;
  run.empirical_pass_rate = run.N > 0 ? static_cast<double>(run.N - run.failures) / static_cast<double>(run.N) : 1.0;
}

}  // namespace

double keyed_uniform(std::uint64_t seed, std::uint64_t round, std::uint64_t stream) {
  const std::uint64_t h = splitmix(splitmix(splitmix(seed) ^ round) ^ (stream * 0xd1b54a32d192ed03ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

PairTable build_pair_table(const KrausChannel& channel, const Strategy& s) {
  channel.validate();
  s.validate();
  if (channel.d != s.d) {
    throw ValidationError("simulation: channel dimension " + std::to_string(channel.d) +
                          " does not match strategy dimension " + std::to_string(s.d));
  }
  PairTable t;
  std::vector<double> probs;
  for (const auto& pr : s.pairs) {
    probs.push_back(pr.probability);
    std::vector<double> weights;
    std::vector<Vector> kets;
    pure_components(pr.input_state, weights, kets);
    std::vector<double> pass;
    for (const auto& psi : kets) {
      double q = 0.0;
      for (const auto& k : channel.kraus_ops) {
        const Vector kp = k * psi;
        q += kp.dot(pr.effect * kp).real();
      }
      if (!std::isfinite(q) || q < -1e-9 || q > 1.0 + 1e-9) {
        throw NumericFault("simulation: pass probability " + std::to_string(q) + " outside [0, 1]");
      }
      pass.push_back(std::clamp(q, 0.0, 1.0));
    }
    t.component_cdf.push_back(cumulative(weights));
    t.pass.push_back(std::move(pass));
  }
  t.pair_cdf = cumulative(probs);
  return t;
}

double expected_pass_probability(const KrausChannel& channel, const Strategy& s) {
  channel.validate();
  s.validate();
  if (channel.d != s.d) throw ValidationError("expected_pass_probability: dimension mismatch");
  double total = 0.0;
  for (const auto& pr : s.pairs) total += pr.probability * (channel.apply(pr.input_state) * pr.effect).trace().real();
  return total;
}

VerificationRun run_verification(const KrausChannel& channel, const Strategy& s, long N, std::uint64_t seed,
                                 int threads) {
  if (N < 0) throw ValidationError("run_verification: N must be >= 0");
  if (threads < 1) throw ValidationError("run_verification: threads must be >= 1");
  const PairTable table = build_pair_table(channel, s);
  VerificationRun run;
  run.seed = seed;
  run.N = N;
  run.records.resize(static_cast<std::size_t>(N));
  auto work = [&](long begin, long end) {
    for (long r = begin; r < end; ++r) run.records[static_cast<std::size_t>(r)] = sample_round(table, seed, r);
  };
  if (threads == 1 || N < 2) {
    work(0, N);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (N + threads - 1) / threads;
    for (long b = 0; b < N; b += chunk) pool.emplace_back(work, b, std::min(N, b + chunk));
    for (auto& th : pool) th.join();
  }
  finish(run);
  return run;
}

std::string to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::accepted: return "accepted";
    case VerdictStatus::rejected: return "rejected";
    case VerdictStatus::insufficient_rounds: return "insufficient_rounds";
  }
  return "unknown";
}

Verdict verdict(const VerificationRun& run, double epsilon, double delta, const Matrix& omega) {
  Verdict v;
  v.required_rounds = trial_count(epsilon, delta, omega);
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(omega.rows()))));
  std::ostringstream msg;
  // A failed round rejects regardless of how many rounds were run.
  if (!run.all_passed) {
    v.status = VerdictStatus::rejected;
    msg << "rejected: " << run.failures << " of " << run.N << " rounds failed";
  } else if (run.N < v.required_rounds) {
    v.status = VerdictStatus::insufficient_rounds;
    msg << "no claim: " << run.N << " rounds run, " << v.required_rounds << " required for epsilon = " << epsilon
        << ", delta = " << delta;
  } else {
    v.status = VerdictStatus::accepted;
    v.accepted = true;
    msg << "accepted: entanglement fidelity >= " << 1.0 - epsilon << " and average gate fidelity >= "
        << average_fidelity(1.0 - epsilon, d) << " at significance level " << delta;
  }
  v.statement = msg.str();
  return v;
}

PassRateEstimate estimate_pass_rate(const KrausChannel& channel, const Strategy& s, long trials, std::uint64_t seed) {
  return estimate_pass_rate(std::vector<KrausChannel>{channel}, s, trials, seed);
}

PassRateEstimate estimate_pass_rate(const std::vector<KrausChannel>& channels, const Strategy& s, long trials,
                                    std::uint64_t seed) {
  if (trials < 100) throw ValidationError("estimate_pass_rate: at least 100 trials required");
  if (channels.empty()) throw ValidationError("estimate_pass_rate: no channels");
  std::vector<PairTable> tables;
  for (const auto& ch : channels) tables.push_back(build_pair_table(ch, s));
  long passes = 0;
  for (long r = 0; r < trials; ++r) {
    passes += sample_round(tables[static_cast<std::size_t>(r) % tables.size()], seed, r).passed ? 1 : 0;
  }
  PassRateEstimate e;
  e.trials = trials;
  e.rate = static_cast<double>(passes) / static_cast<double>(trials);
  e.standard_error = std::sqrt(e.rate * (1.0 - e.rate) / static_cast<double>(trials));
  return e;
}

void write_run_csv(const VerificationRun& run, std::ostream& out) {
  out << "round,pair,passed\n";
  for (const auto& rec : run.records) out << rec.round_index << ',' << rec.pair_index << ',' << (rec.passed ? 1 : 0) << '\n';
}

}  // namespace qgv
