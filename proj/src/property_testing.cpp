#include "qgv/property_testing.hpp"

#include <cmath>

#include "qgv/analysis.hpp"
#include "qgv/error.hpp"
#include "qgv/weyl_bell.hpp"

namespace qgv {

namespace {

void check_args(int d, double delta, const char* who) {
  if (d < 2) throw ValidationError(std::string(who) + ": d >= 2 required");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError(std::string(who) + ": delta must lie in (0, 1)");
}

}  // namespace

std::string to_string(PropertyMode mode) {
  switch (mode) {
    case PropertyMode::ep_detect: return "EP_detect";
    case PropertyMode::ep_two_mub: return "EP_2MUB";
    case PropertyMode::robustness: return "robustness";
  }
  return "unknown";
}

PropertyMode property_mode_from_string(const std::string& name) {
  if (name == "EP_detect" || name == "ep") return PropertyMode::ep_detect;
  if (name == "EP_2MUB" || name == "ep2") return PropertyMode::ep_two_mub;
  if (name == "robustness") return PropertyMode::robustness;
  throw ValidationError("unknown property mode '" + name + "'");
}

double witness_expectation(const ChoiState& choi) {
  choi.validate();
  const int d = choi.d;
  const Matrix phi = max_entangled_ket(d);
  const Matrix w = identity(d * d) / static_cast<double>(d) - phi * phi.adjoint();
  return (w * choi.matrix).trace().real();
}

long ep_detection_rounds(int d, double delta) {
  check_args(d, delta, "ep_detection_rounds");
  if (static_cast<double>(d) >= 2.0 / delta - 1.0 - 1e-12) return 1;
  return std::max(1L, ceil_count(std::log(1.0 / delta) / std::log((d + 1.0) / 2.0)));
}

long ep_two_mub_rounds(int d, double delta) {
  check_args(d, delta, "ep_two_mub_rounds");
  return std::max(1L, ceil_count(std::log(1.0 / delta) / std::log(2.0 * d / (d + 1.0))));
}

double robustness_lower_bound(double entanglement_fidelity, int d) {
  if (d < 1) throw ValidationError("robustness_lower_bound: d >= 1 required");
  if (!(entanglement_fidelity >= -1e-12 && entanglement_fidelity <= 1.0 + 1e-12)) {
    throw ValidationError("robustness_lower_bound: fidelity must lie in [0, 1]");
  }
  return std::max(0.0, d * entanglement_fidelity - 1.0);
}

long robustness_rounds(int d, double delta, double r) {
  check_args(d, delta, "robustness_rounds");
  if (!(r >= 0.0 && r < d - 1.0)) {
    throw ValidationError("robustness_rounds: r must lie in [0, d-1); r >= d-1 cannot be certified");
  }
  return std::max(1L, ceil_count(std::log(1.0 / delta) / std::log((d + 1.0) / (r + 2.0))));
}

PropertyReport property_report(PropertyMode mode, int d, double delta, double r_target) {
  PropertyReport rep{d, delta, mode, 0.0, 0.0, 0};
  switch (mode) {
    case PropertyMode::ep_detect:
      rep.epsilon = 1.0 - 1.0 / d;
      rep.rounds = ep_detection_rounds(d, delta);
      break;
    case PropertyMode::ep_two_mub:
      rep.epsilon = 1.0 - 1.0 / d;
      rep.rounds = ep_two_mub_rounds(d, delta);
      break;
    case PropertyMode::robustness:
      rep.r_target = r_target;
      rep.epsilon = (d - r_target - 1.0) / d;
      rep.rounds = robustness_rounds(d, delta, r_target);
      break;
  }
  return rep;
}

}  // namespace qgv
