#pragma once

// Entanglement-preservation detection and the witness lower bound on the
// robustness of quantum memory.

#include <string>

#include "qgv/channels.hpp"

namespace qgv {

enum class PropertyMode { ep_detect, ep_two_mub, robustness };

std::string to_string(PropertyMode mode);
PropertyMode property_mode_from_string(const std::string& name);

struct PropertyReport {
  int d = 2;
  double delta = 0.05;
  PropertyMode mode = PropertyMode::ep_detect;
  double r_target = 0.0;  // robustness mode only
  double epsilon = 0.0;   // infidelity threshold the rounds are computed for
  long rounds = 0;
};

// Tr[(I/d - Phi_+) Phi]; negative values certify entanglement.
double witness_expectation(const ChoiState& choi);

// ceil(ln(1/delta) / ln((d+1)/2)), or 1 when d >= 2/delta - 1.
long ep_detection_rounds(int d, double delta);
// ceil(ln(1/delta) / ln(2d/(d+1))) with the first two bases only.
long ep_two_mub_rounds(int d, double delta);

// max(0, d F - 1).
double robustness_lower_bound(double entanglement_fidelity, int d);
// ceil(ln(1/delta) / ln((d+1)/(r+2))), 0 <= r < d - 1.
long robustness_rounds(int d, double delta, double r);

PropertyReport property_report(PropertyMode mode, int d, double delta, double r_target = 0.0);

}  // namespace qgv
