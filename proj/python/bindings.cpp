#include <cmath>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

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

namespace py = pybind11;
using namespace qgv;

namespace {

KrausChannel channel_of(const std::vector<Matrix>& kraus) {
  if (kraus.empty()) throw ValidationError("at least one Kraus operator is required");
  KrausChannel ch{static_cast<int>(kraus.front().rows()), kraus};
  ch.validate();
  return ch;
}

MultiControlledGate gate_of(const std::string& name) {
  if (name == "CnZ" || name == "Z") return MultiControlledGate::CnZ;
  if (name == "CnX" || name == "X") return MultiControlledGate::CnX;
  throw ValidationError("gate must be 'CnZ' or 'CnX'");
}

}  // namespace

PYBIND11_MODULE(_qgv, m) {
  m.doc() = "Quantum gate verification via Choi states";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericFault>(m, "NumericFault", PyExc_ArithmeticError);

  py::class_<VerificationPair>(m, "VerificationPair")
      .def(py::init<>())
      .def_readwrite("input_state", &VerificationPair::input_state)
      .def_readwrite("effect", &VerificationPair::effect)
      .def_readwrite("probability", &VerificationPair::probability);

  py::class_<Strategy>(m, "Strategy")
      .def(py::init<>())
      .def_readwrite("d", &Strategy::d)
      .def_readwrite("target", &Strategy::target)
      .def_readwrite("pairs", &Strategy::pairs)
      .def("validate", &Strategy::validate)
      .def("omega", [](const Strategy& s) { return omega_from_strategy(s).matrix; })
      .def("to_json", [](const Strategy& s) { return io::strategy_to_json(s).dump(); })
      .def_static("from_json", [](const std::string& text) { return io::strategy_from_json(io::Json::parse(text)); });

  m.def("optimal_strategy", [](const Matrix& u) { return optimal_strategy(u, static_cast<int>(u.rows())); },
        py::arg("target"));
  m.def("g_mub_strategy", [](const Matrix& u, int g) { return g_mub_strategy(u, static_cast<int>(u.rows()), g); },
        py::arg("target"), py::arg("g"));
  m.def("trivial_test_mix", &trivial_test_mix, py::arg("strategy"), py::arg("p"));
  m.def("homogeneous_trivial_probability", &homogeneous_trivial_probability, py::arg("d"));
  m.def("generator_strategy", [](const std::string& circuit) { return generator_strategy(parse_clifford_circuit(circuit)); },
        py::arg("circuit"));
  m.def("full_stabilizer_strategy",
        [](const std::string& circuit) { return full_stabilizer_strategy(parse_clifford_circuit(circuit)); },
        py::arg("circuit"));
  m.def("circuit_unitary", [](const std::string& circuit) { return circuit_unitary(parse_clifford_circuit(circuit)); },
        py::arg("circuit"));
  m.def("color_strategy", [](int n, const std::string& gate) { return color_strategy(n, gate_of(gate)); },
        py::arg("n"), py::arg("gate") = "CnZ");

  m.def("optimal_omega", &optimal_omega, py::arg("target"));
  m.def("spectral_gap", py::overload_cast<const Matrix&>(&spectral_gap), py::arg("omega"));
  m.def("bell_twirl", &bell_twirl, py::arg("omega"), py::arg("d"));
  m.def("weyl", [](int u, int v, int d) { return weyl({u, v, d}); }, py::arg("u"), py::arg("v"), py::arg("d"));
  m.def("bell_state", [](int u, int v, int d) { return bell_state({u, v, d}); }, py::arg("u"), py::arg("v"), py::arg("d"));

  m.def("unitary_choi", &unitary_choi, py::arg("unitary"));
  m.def("choi_from_kraus", [](const std::vector<Matrix>& k) { return choi_from_kraus(channel_of(k)).matrix; },
        py::arg("kraus"));
  m.def("noise_kraus", [](const std::string& kind, double strength, int d) {
        return make_noise(noise_kind_from_string(kind), strength, d).kraus_ops;
      }, py::arg("kind"), py::arg("strength"), py::arg("d"));
  m.def("entanglement_fidelity", [](const Matrix& choi, const Matrix& target) {
        return entanglement_fidelity(ChoiState{static_cast<int>(target.rows()), choi}, target);
      }, py::arg("choi"), py::arg("target"));
  m.def("average_fidelity", &average_fidelity, py::arg("entanglement_fidelity"), py::arg("d"));

  m.def("pass_probability_bound", &pass_probability_bound, py::arg("omega"), py::arg("epsilon"));
  m.def("pass_probability_numeric", [](const Matrix& omega, double eps, const Matrix& target, int iterations,
                                       std::uint64_t seed) {
        const auto b = pass_probability_numeric(omega, eps, target, iterations, seed);
        py::dict out;
        out["lower"] = b.lower;
        out["upper"] = b.upper;
        out["lower_fidelity"] = b.lower_fidelity;
        out["converged"] = b.converged;
        return out;
      }, py::arg("omega"), py::arg("epsilon"), py::arg("target"), py::arg("iterations") = 2000, py::arg("seed") = 1);
  m.def("trial_count", &trial_count, py::arg("epsilon"), py::arg("delta"), py::arg("omega"));
  m.def("adversarial_fidelity_bound",
        [](long n, double delta, double lam) { return adversarial_fidelity_bound(n, delta, lam).fidelity; },
        py::arg("N"), py::arg("delta"), py::arg("lam"));
  m.def("adversarial_trial_count",
        [](double eps, double delta, double lam) { return adversarial_trial_count(eps, delta, lam).N; },
        py::arg("epsilon"), py::arg("delta"), py::arg("lam"));
  m.def("optimal_lambda", &optimal_lambda, py::arg("N"), py::arg("delta"));

  m.def("witness_expectation", [](const Matrix& choi) {
        return witness_expectation(ChoiState{static_cast<int>(std::lround(std::sqrt(choi.rows()))), choi});
      }, py::arg("choi"));
  m.def("ep_detection_rounds", &ep_detection_rounds, py::arg("d"), py::arg("delta"));
  m.def("ep_two_mub_rounds", &ep_two_mub_rounds, py::arg("d"), py::arg("delta"));
  m.def("robustness_lower_bound", &robustness_lower_bound, py::arg("entanglement_fidelity"), py::arg("d"));
  m.def("robustness_rounds", &robustness_rounds, py::arg("d"), py::arg("delta"), py::arg("r"));

  m.def("run_verification", [](const std::vector<Matrix>& kraus, const Strategy& s, long n, std::uint64_t seed,
                               int threads) {
        const auto run = run_verification(channel_of(kraus), s, n, seed, threads);
        std::vector<int> pairs;
        std::vector<bool> passed;
        for (const auto& r : run.records) {
          pairs.push_back(r.pair_index);
          passed.push_back(r.passed);
        }
        py::dict out;
        out["N"] = run.N;
        out["failures"] = run.failures;
        out["all_passed"] = run.all_passed;
        out["pass_rate"] = run.empirical_pass_rate;
        out["pairs"] = pairs;
        out["passed"] = passed;
        return out;
      }, py::arg("kraus"), py::arg("strategy"), py::arg("N"), py::arg("seed"), py::arg("threads") = 1);
}
