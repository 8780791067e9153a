#include "qgv/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qgv/analysis.hpp"
#include "qgv/channels.hpp"
#include "qgv/error.hpp"
#include "qgv/hypergraph.hpp"
#include "qgv/io.hpp"
#include "qgv/property_testing.hpp"
#include "qgv/protocol_sim.hpp"
#include "qgv/stabilizer.hpp"
#include "qgv/strategies.hpp"
#include "qgv/weyl_bell.hpp"

namespace qgv::cli {

using io::Json;

namespace {

std::vector<double> parse_sweep(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw ValidationError("sweep range must look like start:stop:count");
  double a = 0.0, b = 0.0;
  int n = 0;
  try {
    a = std::stod(parts[0]);
    b = std::stod(parts[1]);
    n = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw ValidationError("sweep range '" + spec + "' is not numeric");
  }
  if (n < 1) throw ValidationError("sweep count must be >= 1");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return out;
}

void emit_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
}

void emit(const Json& j, const std::string& path, std::ostream& out) { emit_text(j.dump(2) + "\n", path, out); }

bool is_homogeneous(const BellSpectrum& spec) {
  double lo = 1.0, hi = 0.0;
  for (int k = 1; k < spec.d * spec.d; ++k) {
    lo = std::min(lo, spec.lambda[static_cast<std::size_t>(k)]);
    hi = std::max(hi, spec.lambda[static_cast<std::size_t>(k)]);
  }
  return hi - lo < 1e-9;
}

struct StrategyArgs {
  std::string gate;
  std::string unitary_file;
  std::string clifford_file;
  std::string mode;
  std::string output;
  int d = 2;
  int n = 0;
  int g = 0;
  double trivial = 0.0;
  bool homogeneous = false;
};

std::pair<Strategy, Json> build_strategy(const StrategyArgs& a) {
  const int sources = !a.gate.empty() + !a.unitary_file.empty() + !a.clifford_file.empty();
  if (sources != 1) throw ValidationError("strategy: give exactly one of --gate, --unitary, --clifford");
  Json meta;
  Strategy s;
  std::string mode = a.mode;

  std::optional<CliffordCircuit> circuit;
  std::optional<std::pair<int, MultiControlledGate>> multi;
  Matrix target;
  if (!a.clifford_file.empty()) {
    circuit = parse_clifford_circuit(io::read_text(a.clifford_file));
    meta["gate"] = "clifford:" + a.clifford_file;
  } else if (!a.unitary_file.empty()) {
    target = io::matrix_from_json(io::read_json(a.unitary_file));
    meta["gate"] = "unitary:" + a.unitary_file;
  } else {
    meta["gate"] = a.gate;
    if (a.gate == "CZ" || a.gate == "CNOT") {
      if (mode == "coloring") {
        multi = {2, a.gate == "CZ" ? MultiControlledGate::CnZ : MultiControlledGate::CnX};
      } else {
        circuit = parse_clifford_circuit(a.gate + " 0 1\n");
      }
    } else if (a.gate == "CCZ" || a.gate == "CCX" || a.gate == "Toffoli" || a.gate == "CnZ" || a.gate == "CnX") {
      const bool z = a.gate == "CCZ" || a.gate == "CnZ";
      const int n = (a.gate == "CnZ" || a.gate == "CnX") ? a.n : 3;
      if (a.n != 0 && a.n != n) throw ValidationError("strategy: " + a.gate + " acts on 3 qubits");
      multi = {n, z ? MultiControlledGate::CnZ : MultiControlledGate::CnX};
    } else {
      target = named_gate(a.gate, a.d);
    }
  }

  if (circuit) {
    if (mode.empty()) mode = "generators";
    if (mode == "generators") {
      s = generator_strategy(*circuit);
    } else if (mode == "full") {
      s = full_stabilizer_strategy(*circuit);
    } else {
      target = circuit_unitary(*circuit);
    }
    meta["circuit"] = format_clifford_circuit(*circuit);
  }
  if (multi) {
    if (mode.empty()) mode = "coloring";
    if (mode != "coloring") throw ValidationError("strategy: multi-controlled gates support --mode coloring only");
    s = color_strategy(multi->first, multi->second);
  }
  if (s.pairs.empty()) {
    if (mode.empty()) mode = "optimal";
    const int d = static_cast<int>(target.rows());
    if (mode == "optimal") {
      s = optimal_strategy(target, d);
    } else if (mode == "mub") {
      s = g_mub_strategy(target, d, a.g == 0 ? d + 1 : a.g);
      meta["g"] = a.g == 0 ? d + 1 : a.g;
    } else {
      throw ValidationError("strategy: unknown or inapplicable mode '" + mode + "'");
    }
  }
  if (a.homogeneous && a.trivial > 0.0) throw ValidationError("strategy: --homogeneous and --trivial are exclusive");
  if (a.homogeneous) {
    s = trivial_test_mix(s, homogeneous_trivial_probability(s.d));
    meta["trivial_probability"] = homogeneous_trivial_probability(s.d);
  } else if (a.trivial > 0.0) {
    s = trivial_test_mix(s, a.trivial);
    meta["trivial_probability"] = a.trivial;
  }
  meta["mode"] = mode;
  meta["nu"] = spectral_gap(omega_from_strategy(s));
  return {s, meta};
}

struct AnalyzeArgs {
  std::string strategy_file;
  std::string output;
  std::string sweep;
  double epsilon = 0.01;
  double delta = 0.01;
  bool numeric = false;
  int iterations = 2000;
  std::uint64_t seed = 1;
};

Json analysis_report(const Strategy& s, double epsilon, double delta, const AnalyzeArgs& a) {
  const auto omega = omega_from_strategy(s);
  const double nu = spectral_gap(omega);
  Json rep{{"d", s.d}, {"epsilon", epsilon}, {"delta", delta}, {"pairs", s.pairs.size()}};
  rep["nu"] = nu;
  rep["P_bound"] = pass_probability_bound(omega.matrix, epsilon);
  rep["N"] = trial_count_from_gap(nu, epsilon, delta);
  const Matrix rot = kron(identity(s.d), s.target);
  if (bell_offdiagonal_residual(rot.adjoint() * omega.matrix * rot, s.d) <= kMatrixTol) {
    const auto spec = bell_spectrum_for_target(omega.matrix, s.target);
    rep["P_exact"] = pass_probability_bell_exact(spec, epsilon);
    if (is_homogeneous(spec)) {
      const double lam = spec.max_off_target();
      const auto count = adversarial_trial_count(epsilon, delta, lam);
      rep["adversarial"] = {{"lambda", lam},
                            {"N", count.N},
                            {"F", adversarial_fidelity_bound(count.N, delta, lam).fidelity},
                            {"monotone", count.monotone}};
    }
  }
  if (a.numeric) {
    const auto br = pass_probability_numeric(omega.matrix, epsilon, s.target, a.iterations, a.seed);
    rep["P_numeric"] = {{"lower", br.lower},
                        {"upper", br.upper},
                        {"lower_fidelity", br.lower_fidelity},
                        {"converged", br.converged},
                        {"iterations", br.iterations}};
  }
  return rep;
}

std::string epsilon_sweep_csv(double nu, double delta, const std::string& spec) {
  std::ostringstream csv;
  csv.precision(17);
  csv << "epsilon,N\n";
  for (double eps : parse_sweep(spec)) csv << eps << ',' << trial_count_from_gap(nu, eps, delta) << '\n';
  return csv.str();
}

struct SimulateArgs {
  std::string strategy_file;
  std::string channel_file;
  std::string log_file;
  std::string output;
  std::string sweep;
  std::optional<std::uint64_t> seed;
  long rounds = 0;
  double epsilon = 0.01;
  double delta = 0.01;
  int threads = 1;
  bool raw_channel = false;
};

struct AdversarialArgs {
  std::string output;
  std::string sweep;
  std::optional<double> lambda;
  std::optional<double> epsilon;
  long N = 0;
  double delta = 0.01;
};

struct PropertyArgs {
  std::string mode = "EP_detect";
  std::string channel_file;
  std::string output;
  int d = 2;
  double delta = 0.05;
  double r = 0.0;
};

}  // namespace

int guarded(const std::function<void()>& body, std::ostream& err) {
  try {
    body();
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericFault& e) {
    err << "numeric fault: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

Matrix named_gate(const std::string& name, int d) {
  if (d < 2) throw ValidationError("gate dimension must be >= 2");
  const Complex i(0.0, 1.0);
  if (name == "I") return identity(d);
  if (name == "X") return shift_operator(d);
  if (name == "Z") return clock_operator(d);
  if (name == "H") {
    Matrix f(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        f(r, c) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), 2.0 * std::numbers::pi * r * c / d);
      }
    }
    return f;
  }
  if (name == "S" || name == "T") {
    if (d != 2) throw ValidationError("gate " + name + " is defined for d = 2 only");
    Matrix m = identity(2);
    m(1, 1) = name == "S" ? i : std::polar(1.0, std::numbers::pi / 4.0);
    return m;
  }
  if (name == "CZ") return multi_controlled_z(2);
  if (name == "CNOT") return multi_controlled_x(2);
  if (name == "CCZ") return multi_controlled_z(3);
  if (name == "CCX" || name == "Toffoli") return multi_controlled_x(3);
  throw ValidationError("unknown gate '" + name + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum gate verification toolkit"};
  app.require_subcommand(1);

  StrategyArgs sa;
  auto* strategy = app.add_subcommand("strategy", "Build a verification strategy and write it as JSON");
  strategy->add_option("--gate", sa.gate, "Named gate: I X Z H S T CZ CNOT CCZ CCX CnZ CnX");
  strategy->add_option("--unitary", sa.unitary_file, "JSON matrix file with the target unitary");
  strategy->add_option("--clifford", sa.clifford_file, "Clifford circuit text file");
  strategy->add_option("--mode", sa.mode, "optimal | mub | generators | full | coloring");
  strategy->add_option("--d", sa.d, "Dimension for single-qudit named gates");
  strategy->add_option("--n", sa.n, "Qubit count for CnZ / CnX");
  strategy->add_option("--g", sa.g, "Number of bases in mub mode");
  strategy->add_option("--trivial", sa.trivial, "Probability of the always-pass test");
  strategy->add_flag("--homogeneous", sa.homogeneous, "Mix in the trivial test to reach lambda = 1/e");
  strategy->add_option("-o,--output", sa.output, "Output file (default stdout)");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Spectral gap, pass probability and trial numbers of a strategy");
  analyze->add_option("--strategy", aa.strategy_file, "Strategy JSON")->required();
  analyze->add_option("--epsilon", aa.epsilon, "Infidelity threshold");
  analyze->add_option("--delta", aa.delta, "Significance level");
  analyze->add_flag("--numeric", aa.numeric, "Also run the numeric pass-probability bracket");
  analyze->add_option("--iterations", aa.iterations, "Gradient steps per start for --numeric");
  analyze->add_option("--seed", aa.seed, "Seed for --numeric");
  analyze->add_option("--sweep", aa.sweep, "epsilon start:stop:count, writes CSV of (epsilon, N)");
  analyze->add_option("-o,--output", aa.output, "Output file (default stdout)");

  SimulateArgs sm;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of the verification protocol");
  simulate->add_option("--strategy", sm.strategy_file, "Strategy JSON")->required();
  simulate->add_option("--channel", sm.channel_file, "Channel JSON (noise applied after the target)");
  simulate->add_flag("--raw-channel", sm.raw_channel, "Use the channel as the full implementation");
  simulate->add_option("--rounds", sm.rounds, "Number of rounds (default: trial count)");
  simulate->add_option("--epsilon", sm.epsilon, "Infidelity threshold");
  simulate->add_option("--delta", sm.delta, "Significance level");
  simulate->add_option("--seed", sm.seed, "Random seed (required)");
  simulate->add_option("--threads", sm.threads, "Worker threads");
  simulate->add_option("--log", sm.log_file, "Per-round CSV log");
  simulate->add_option("--sweep", sm.sweep, "epsilon start:stop:count, writes CSV of (epsilon, N)");
  simulate->add_option("-o,--output", sm.output, "Summary JSON (default stdout)");

  AdversarialArgs ad;
  auto* adversarial = app.add_subcommand("adversarial", "Adversarial-scenario analysis of homogeneous strategies");
  adversarial->add_option("--lambda", ad.lambda, "Off-target eigenvalue (default: optimal for N)");
  adversarial->add_option("--epsilon", ad.epsilon, "Infidelity threshold for the trial count");
  adversarial->add_option("--N", ad.N, "Number of test rounds");
  adversarial->add_option("--delta", ad.delta, "Significance level");
  adversarial->add_option("--sweep", ad.sweep, "lambda start:stop:count, writes CSV of (lambda, F)");
  adversarial->add_option("-o,--output", ad.output, "Output file (default stdout)");

  PropertyArgs pa;
  auto* property = app.add_subcommand("property", "Entanglement-preservation and robustness testing");
  property->add_option("--mode", pa.mode, "EP_detect | EP_2MUB | robustness");
  property->add_option("--d", pa.d, "Dimension");
  property->add_option("--delta", pa.delta, "Significance level");
  property->add_option("--r", pa.r, "Robustness threshold");
  property->add_option("--channel", pa.channel_file, "Channel JSON for witness and robustness values");
  property->add_option("-o,--output", pa.output, "Output file (default stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  return guarded([&] {
    if (*strategy) {
      auto [s, meta] = build_strategy(sa);
      emit(io::strategy_to_json(s, meta), sa.output, out);
    } else if (*analyze) {
      const Strategy s = io::strategy_from_json(io::read_json(aa.strategy_file));
      if (!aa.sweep.empty()) {
        emit_text(epsilon_sweep_csv(spectral_gap(omega_from_strategy(s)), aa.delta, aa.sweep), aa.output, out);
      } else {
        emit(analysis_report(s, aa.epsilon, aa.delta, aa), aa.output, out);
      }
    } else if (*simulate) {
      if (!sm.seed) throw ValidationError("simulate: --seed is required");
      const Strategy s = io::strategy_from_json(io::read_json(sm.strategy_file));
      const auto omega = omega_from_strategy(s);
      if (!sm.sweep.empty()) {
        emit_text(epsilon_sweep_csv(spectral_gap(omega), sm.delta, sm.sweep), sm.output, out);
        return;
      }
      KrausChannel noise{s.d, {identity(s.d)}};
      if (!sm.channel_file.empty()) noise = io::channel_from_json(io::read_json(sm.channel_file));
      if (noise.d != s.d) throw ValidationError("simulate: channel and strategy dimensions differ");
      const KrausChannel implementation = sm.raw_channel ? noise : compose(unitary_channel(s.target), noise);
      const long rounds = sm.rounds > 0 ? sm.rounds : trial_count(sm.epsilon, sm.delta, omega.matrix);
      const auto result = run_verification(implementation, s, rounds, *sm.seed, sm.threads);
      const auto v = verdict(result, sm.epsilon, sm.delta, omega.matrix);
      if (!sm.log_file.empty()) {
        std::ofstream log(sm.log_file);
        if (!log) throw ValidationError("cannot write " + sm.log_file);
        write_run_csv(result, log);
      }
      Json summary = io::run_summary_json(result, v, sm.epsilon, sm.delta);
      summary["expected_pass_probability"] = expected_pass_probability(implementation, s);
      summary["entanglement_fidelity"] = entanglement_fidelity(choi_from_kraus(implementation), s.target);
      emit(summary, sm.output, out);
    } else if (*adversarial) {
      if (!(ad.delta > 0.0 && ad.delta < 1.0)) throw ValidationError("adversarial: delta must lie in (0, 1)");
      if (!ad.sweep.empty()) {
        if (ad.N < 1) throw ValidationError("adversarial: --sweep needs --N");
        std::ostringstream csv;
        csv.precision(17);
        csv << "lambda,F\n";
        for (double lam : parse_sweep(ad.sweep)) {
          csv << lam << ',' << adversarial_fidelity_bound(ad.N, ad.delta, lam).fidelity << '\n';
        }
        emit_text(csv.str(), ad.output, out);
        return;
      }
      Json rep{{"delta", ad.delta}};
      double lam = ad.lambda.value_or(std::exp(-1.0));
      if (ad.N > 0) {
        rep["N"] = ad.N;
        const double best = optimal_lambda(ad.N, ad.delta);
        rep["optimal_lambda"] = best;
        rep["F_optimal"] = adversarial_fidelity_bound(ad.N, ad.delta, best).fidelity;
        if (!ad.lambda) lam = best;
        const auto b = adversarial_fidelity_bound(ad.N, ad.delta, lam);
        rep["F"] = b.fidelity;
        rep["useless"] = b.useless;
      }
      rep["lambda"] = lam;
      if (ad.epsilon) {
        const auto count = adversarial_trial_count(*ad.epsilon, ad.delta, lam);
        rep["epsilon"] = *ad.epsilon;
        rep["trial_count"] = count.N;
        rep["monotone"] = count.monotone;
      }
      if (ad.N <= 0 && !ad.epsilon) throw ValidationError("adversarial: give --N and/or --epsilon");
      emit(rep, ad.output, out);
    } else if (*property) {
      const auto rep = property_report(property_mode_from_string(pa.mode), pa.d, pa.delta, pa.r);
      Json j{{"mode", to_string(rep.mode)}, {"d", rep.d},         {"delta", rep.delta},
             {"epsilon", rep.epsilon},      {"rounds", rep.rounds}};
      if (rep.mode == PropertyMode::robustness) j["r_target"] = rep.r_target;
      if (!pa.channel_file.empty()) {
        const auto ch = io::channel_from_json(io::read_json(pa.channel_file));
        if (ch.d != pa.d) throw ValidationError("property: channel dimension differs from --d");
        const auto choi = choi_from_kraus(ch);
        const double f = entanglement_fidelity(choi, identity(ch.d));
        j["entanglement_fidelity"] = f;
        j["witness"] = witness_expectation(choi);
        j["robustness_lower_bound"] = robustness_lower_bound(f, ch.d);
      }
      emit(j, pa.output, out);
    }
  }, err);
}

}  // namespace qgv::cli
