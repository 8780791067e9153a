#include "qgv/channels.hpp"

#include <cmath>
#include <string>

#include "qgv/error.hpp"
#include "qgv/weyl_bell.hpp"

namespace qgv {

void KrausChannel::validate() const {
  if (d < 1) throw ValidationError("KrausChannel: dimension must be >= 1");
  if (kraus_ops.empty()) throw ValidationError("KrausChannel: at least one Kraus operator is required");
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& k : kraus_ops) {
    if (k.rows() != d || k.cols() != d) {
      throw ValidationError("KrausChannel: Kraus operator shape does not match d = " + std::to_string(d));
    }
    if (!all_finite(k)) throw ValidationError("KrausChannel: non-finite Kraus entry");
    sum += k.adjoint() * k;
  }
  const double err = max_abs_diff(sum, identity(d));
  if (err > kMatrixTol) {
    throw ValidationError("KrausChannel: not trace preserving (|sum K^dag K - I| = " + std::to_string(err) + ")");
  }
}

Matrix KrausChannel::apply(const Matrix& rho) const {
  if (rho.rows() != d || rho.cols() != d) throw ValidationError("KrausChannel::apply: dimension mismatch");
  Matrix out = Matrix::Zero(d, d);
  for (const auto& k : kraus_ops) out += k * rho * k.adjoint();
  return out;
}

void ChoiState::validate() const {
  if (d < 1) throw ValidationError("ChoiState: dimension must be >= 1");
  if (matrix.rows() != d * d || matrix.cols() != d * d) throw ValidationError("ChoiState: expected d^2 x d^2 matrix");
  if (!all_finite(matrix)) throw ValidationError("ChoiState: non-finite entry");
  if (!is_psd(matrix, kMatrixTol)) throw ValidationError("ChoiState: not positive semidefinite");
  if (std::abs(matrix.trace() - Complex(1.0, 0.0)) > kMatrixTol) throw ValidationError("ChoiState: trace is not 1");
  const int dims[] = {d, d};
  const int keep[] = {0};
  const Matrix reduced = partial_trace(matrix, dims, keep);
  if (max_abs_diff(reduced, identity(d) / static_cast<double>(d)) > 1e-8) {
    throw ValidationError("ChoiState: Tr_B[Phi] != I/d (map is not trace preserving)");
  }
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::depolarizing: return "depolarizing";
    case NoiseKind::dephasing: return "dephasing";
    case NoiseKind::amplitude_damping: return "amplitude_damping";
    case NoiseKind::unitary_rotation_error: return "unitary_rotation_error";
    case NoiseKind::composed: return "composed";
  }
  return "unknown";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "depolarizing") return NoiseKind::depolarizing;
  if (name == "dephasing") return NoiseKind::dephasing;
  if (name == "amplitude_damping") return NoiseKind::amplitude_damping;
  if (name == "unitary_rotation_error") return NoiseKind::unitary_rotation_error;
  if (name == "composed") return NoiseKind::composed;
  throw ValidationError("unknown noise kind '" + name + "'");
}

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError(std::string(what) + ": strength must lie in [0, 1], got " + std::to_string(p));
  }
}

// exp(-i theta G) for the Hermitian generator G = (X + X^dagger)/2 (the Pauli X at d = 2).
Matrix rotation_unitary(int d, double theta) {
  const Matrix x = shift_operator(d);
  const Matrix g = 0.5 * (x + x.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(g);
  const auto& vecs = solver.eigenvectors();
  Matrix phases = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) phases(j, j) = std::polar(1.0, -theta * solver.eigenvalues()(j));
  return vecs * phases * vecs.adjoint();
}

}  // namespace

KrausChannel make_noise(NoiseKind kind, double strength, int d) {
  if (d < 2) throw ValidationError("make_noise: dimension must be >= 2");
  KrausChannel ch{d, {}};
  switch (kind) {
    case NoiseKind::depolarizing: {
      // rho -> (1-p) rho + p I/d, realised with the d^2 Weyl operators.
      check_probability(strength, "depolarizing");
      const double p = strength;
      const double dd = static_cast<double>(d * d);
      ch.kraus_ops.push_back(std::sqrt(1.0 - p + p / dd) * identity(d));
      if (p > 0.0) {
        for (int u = 0; u < d; ++u) {
          for (int v = 0; v < d; ++v) {
            if (u == 0 && v == 0) continue;
            ch.kraus_ops.push_back(std::sqrt(p / dd) * weyl({u, v, d}));
          }
        }
      }
      break;
    }
    case NoiseKind::dephasing: {
      check_probability(strength, "dephasing");
      ch.kraus_ops.push_back(std::sqrt(1.0 - strength) * identity(d));
      if (strength > 0.0) ch.kraus_ops.push_back(std::sqrt(strength) * clock_operator(d));
      break;
    }
    case NoiseKind::amplitude_damping: {
      // Every excited level decays to |0> with probability gamma.
      check_probability(strength, "amplitude_damping");
      const double gamma = strength;
      Matrix k0 = Matrix::Zero(d, d);
      k0(0, 0) = 1.0;
      for (int k = 1; k < d; ++k) k0(k, k) = std::sqrt(1.0 - gamma);
      ch.kraus_ops.push_back(k0);
      if (gamma > 0.0) {
        for (int k = 1; k < d; ++k) {
          Matrix kk = Matrix::Zero(d, d);
          kk(0, k) = std::sqrt(gamma);
          ch.kraus_ops.push_back(kk);
        }
      }
      break;
    }
    case NoiseKind::unitary_rotation_error: {
      if (!std::isfinite(strength)) throw ValidationError("unitary_rotation_error: angle must be finite");
      ch.kraus_ops.push_back(rotation_unitary(d, strength));
      break;
    }
    case NoiseKind::composed:
      throw ValidationError("make_noise: composed noise needs stages; use the NoiseModel overload");
  }
  ch.validate();
  return ch;
}

KrausChannel make_noise(const NoiseModel& model, int d) {
  if (model.kind != NoiseKind::composed) return make_noise(model.kind, model.strength, d);
  if (model.stages.empty()) throw ValidationError("make_noise: composed noise needs at least one stage");
  KrausChannel acc = make_noise(model.stages.front(), d);
  for (std::size_t i = 1; i < model.stages.size(); ++i) acc = compose(acc, make_noise(model.stages[i], d));
  return acc;
}

KrausChannel compose(const KrausChannel& first, const KrausChannel& second) {
  if (first.d != second.d) throw ValidationError("compose: dimension mismatch");
  KrausChannel out{first.d, {}};
  out.kraus_ops.reserve(first.kraus_ops.size() * second.kraus_ops.size());
  for (const auto& b : second.kraus_ops) {
    for (const auto& a : first.kraus_ops) {
      Matrix k = b * a;
      if (max_abs(k) > 0.0) out.kraus_ops.push_back(std::move(k));
    }
  }
  if (out.kraus_ops.empty()) out.kraus_ops.push_back(Matrix::Zero(first.d, first.d));
  out.validate();
  return out;
}

KrausChannel unitary_channel(const Matrix& u) {
  if (!is_unitary(u)) throw ValidationError("unitary_channel: matrix is not unitary");
  return KrausChannel{static_cast<int>(u.rows()), {u}};
}

KrausChannel weyl_error_channel(int d, int u, int v, double p) {
  check_probability(p, "weyl_error_channel");
  KrausChannel ch{d, {std::sqrt(1.0 - p) * identity(d)}};
  if (p > 0.0) ch.kraus_ops.push_back(std::sqrt(p) * weyl({u, v, d}));
  ch.validate();
  return ch;
}

ChoiState choi_from_kraus(const KrausChannel& ch) {
  ch.validate();
  const int d = ch.d;
  const Matrix phi = max_entangled_ket(d);
  Matrix out = Matrix::Zero(d * d, d * d);
  for (const auto& k : ch.kraus_ops) {
    const Matrix v = kron(identity(d), k) * phi;
    out += v * v.adjoint();
  }
  ChoiState choi{d, out};
  choi.validate();
  return choi;
}

Matrix unitary_choi(const Matrix& u) {
  if (!is_unitary(u)) throw ValidationError("unitary_choi: matrix is not unitary");
  const int d = static_cast<int>(u.rows());
  const Matrix v = kron(identity(d), u) * max_entangled_ket(d);
  return v * v.adjoint();
}

Matrix apply_via_choi(const ChoiState& choi, const Matrix& rho) {
  const int d = choi.d;
  if (rho.rows() != d || rho.cols() != d) throw ValidationError("apply_via_choi: dimension mismatch");
  const int dims[] = {d, d};
  const int keep[] = {1};
  return static_cast<double>(d) * partial_trace(kron(rho.transpose(), identity(d)) * choi.matrix, dims, keep);
}

double entanglement_fidelity(const ChoiState& choi, const Matrix& target) {
  if (target.rows() != choi.d || target.cols() != choi.d) {
    throw ValidationError("entanglement_fidelity: target dimension mismatch");
  }
  if (!is_unitary(target)) throw ValidationError("entanglement_fidelity: target is not unitary");
  const Complex f = (unitary_choi(target) * choi.matrix).trace();
  if (std::abs(f.imag()) > kHermitianTol) {
    throw NumericFault("entanglement_fidelity: imaginary residue " + std::to_string(f.imag()));
  }
  return f.real();
}

double average_fidelity(double entanglement_fidelity, int d) {
  return (static_cast<double>(d) * entanglement_fidelity + 1.0) / (static_cast<double>(d) + 1.0);
}

}  // namespace qgv
