#pragma once

// Monte Carlo simulation of the prepare-test-decide protocol against a channel.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qgv/channels.hpp"
#include "qgv/strategies.hpp"

namespace qgv {

struct TrialRecord {
  long round_index = 0;
  int pair_index = 0;
  bool passed = false;
};

struct VerificationRun {
  std::uint64_t seed = 0;
  long N = 0;
  std::vector<TrialRecord> records;
  bool all_passed = true;
  long failures = 0;
  double empirical_pass_rate = 1.0;
};

// Uniform double in [0, 1) from (seed, round, stream); stateless so rounds can run in any order.
double keyed_uniform(std::uint64_t seed, std::uint64_t round, std::uint64_t stream);

// Pass probabilities q = Tr[E(psi) E_l] for every pure component of every
// input state. Throws NumericFault if some q leaves [-1e-9, 1 + 1e-9].
struct PairTable {
  std::vector<double> pair_cdf;                    // cumulative p_l
  std::vector<std::vector<double>> component_cdf;  // per pair, cumulative weights of the pure components
  std::vector<std::vector<double>> pass;           // per pair and component, clamped q
};

PairTable build_pair_table(const KrausChannel& channel, const Strategy& s);

// Exact per-round pass probability sum_l p_l Tr[E(rho_l) E_l].
double expected_pass_probability(const KrausChannel& channel, const Strategy& s);

// N rounds; round r draws a pair, a pure component of its input and a
// Bernoulli outcome from keyed_uniform(seed, r, .). `threads` > 1 splits the
// rounds across threads with identical results.
VerificationRun run_verification(const KrausChannel& channel, const Strategy& s, long N, std::uint64_t seed,
                                 int threads = 1);

enum class VerdictStatus { accepted, rejected, insufficient_rounds };

std::string to_string(VerdictStatus status);

struct Verdict {
  VerdictStatus status = VerdictStatus::rejected;
  bool accepted = false;
  long required_rounds = 0;
  std::string statement;
};

// Rejected on any failed round; otherwise accepted iff N >= trial_count(epsilon, delta, Omega).
Verdict verdict(const VerificationRun& run, double epsilon, double delta, const Matrix& omega);

struct PassRateEstimate {
  double rate = 0.0;
  double standard_error = 0.0;
  long trials = 0;
};

PassRateEstimate estimate_pass_rate(const KrausChannel& channel, const Strategy& s, long trials, std::uint64_t seed);
// Round r uses channels[r % channels.size()].
PassRateEstimate estimate_pass_rate(const std::vector<KrausChannel>& channels, const Strategy& s, long trials,
                                    std::uint64_t seed);

// Header "round,pair,passed", one line per record.
void write_run_csv(const VerificationRun& run, std::ostream& out);

}  // namespace qgv
