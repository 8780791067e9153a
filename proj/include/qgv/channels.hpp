#pragma once

// Channel representations (Kraus and normalized Choi state), a small family of
// parametric noise models, Choi duality, and fidelity measures.

#include <string>
#include <vector>

#include "qgv/linalg.hpp"

namespace qgv {

struct KrausChannel {
  int d = 2;
  std::vector<Matrix> kraus_ops;

  // Throws ValidationError unless there is at least one d x d operator and
  // sum K^dagger K = I within kMatrixTol.
  void validate() const;
  Matrix apply(const Matrix& rho) const;
};

// Phi_E = (I (x) E)(Phi_+), a d^2 x d^2 unit-trace PSD matrix with Tr_B Phi = I/d.
struct ChoiState {
  int d = 2;
  Matrix matrix;

  void validate() const;
};

enum class NoiseKind { depolarizing, dephasing, amplitude_damping, unitary_rotation_error, composed };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

// Parametric noise description. `strength` is a probability in [0,1] for the
// first three kinds and an angle in radians for unitary_rotation_error.
// A composed model applies its stages in order (stages[0] first).
struct NoiseModel {
  NoiseKind kind = NoiseKind::depolarizing;
  double strength = 0.0;
  std::vector<NoiseModel> stages;
};

KrausChannel make_noise(NoiseKind kind, double strength, int d);
KrausChannel make_noise(const NoiseModel& model, int d);

// The channel that applies `first`, then `second`.
KrausChannel compose(const KrausChannel& first, const KrausChannel& second);

KrausChannel unitary_channel(const Matrix& u);
// Weyl-error channel rho -> (1-p) rho + p W rho W^dagger; Choi fidelity to identity is 1-p
// whenever (u,v) != (0,0).
KrausChannel weyl_error_channel(int d, int u, int v, double p);

ChoiState choi_from_kraus(const KrausChannel& ch);
// The rank-one Choi state of a unitary, (I (x) U) Phi_+ (I (x) U)^dagger.
Matrix unitary_choi(const Matrix& u);

// E(rho) = d Tr_A[(rho^T (x) I) Phi_E], transpose in the computational basis.
Matrix apply_via_choi(const ChoiState& choi, const Matrix& rho);

// F = Tr(Phi_U Phi_E). Throws ValidationError if `target` is not unitary.
double entanglement_fidelity(const ChoiState& choi, const Matrix& target);
double average_fidelity(double entanglement_fidelity, int d);

}  // namespace qgv
