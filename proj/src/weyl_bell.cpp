#include "qgv/weyl_bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qgv/error.hpp"

namespace qgv {

namespace {

void check_dim(const Matrix& omega, int d, const char* who) {
  if (d < 1) throw ValidationError(std::string(who) + ": dimension must be >= 1");
  if (omega.rows() != d * d || omega.cols() != d * d) {
    throw ValidationError(std::string(who) + ": expected a " + std::to_string(d * d) + "x" +
                          std::to_string(d * d) + " operator");
  }
}

}  // namespace

void WeylIndex::validate() const {
  if (d < 1) throw ValidationError("WeylIndex: dimension must be >= 1");
  if (u < 0 || u >= d || v < 0 || v >= d) {
    throw ValidationError("WeylIndex: (u, v) = (" + std::to_string(u) + ", " + std::to_string(v) +
                          ") out of range for d = " + std::to_string(d));
  }
}

double BellSpectrum::max_off_target() const {
  double best = 0.0;
  for (std::size_t k = 1; k < lambda.size(); ++k) best = std::max(best, lambda[k]);
  return best;
}

Matrix shift_operator(int d) {
  Matrix x = Matrix::Zero(d, d);
  for (int l = 0; l < d; ++l) x((l + 1) % d, l) = 1.0;
  return x;
}

Matrix clock_operator(int d) {
  Matrix z = Matrix::Zero(d, d);
  for (int l = 0; l < d; ++l) z(l, l) = std::polar(1.0, 2.0 * std::numbers::pi * l / d);
  return z;
}

Matrix weyl(const WeylIndex& idx) {
  idx.validate();
  const int d = idx.d;
  // X^u Z^v |l> = omega^{v l} |l + u>; built directly to avoid accumulating phases.
  Matrix w = Matrix::Zero(d, d);
  for (int l = 0; l < d; ++l) {
    w((l + idx.u) % d, l) = std::polar(1.0, 2.0 * std::numbers::pi * ((idx.v * l) % d) / d);
  }
  return w;
}

Matrix max_entangled_ket(int d) {
  Matrix v = Matrix::Zero(d * d, 1);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) v(j * d + j, 0) = amp;
  return v;
}

Matrix bell_state(const WeylIndex& idx) {
  idx.validate();
  return kron(identity(idx.d), weyl(idx)) * max_entangled_ket(idx.d);
}

Matrix bell_basis(int d) {
  Matrix basis(d * d, d * d);
  for (int u = 0; u < d; ++u) {
    for (int v = 0; v < d; ++v) basis.col(u * d + v) = bell_state({u, v, d});
  }
  return basis;
}

Matrix bell_twirl(const Matrix& omega, int d) {
  check_dim(omega, d, "bell_twirl");
  Matrix acc = Matrix::Zero(d * d, d * d);
  for (int u = 0; u < d; ++u) {
    for (int v = 0; v < d; ++v) {
      const Matrix w = weyl({u, v, d});
      const Matrix local = kron(w.conjugate(), w);
      acc += local * omega * local.adjoint();
    }
  }
  return acc / static_cast<double>(d * d);
}

double bell_offdiagonal_residual(const Matrix& omega, int d) {
  check_dim(omega, d, "bell_offdiagonal_residual");
  const Matrix b = bell_basis(d);
  Matrix in_bell = b.adjoint() * omega * b;
  in_bell.diagonal().setZero();
  return max_abs(in_bell);
}

BellSpectrum bell_spectrum_of(const Matrix& omega, int d) {
  check_dim(omega, d, "bell_spectrum_of");
  const Matrix b = bell_basis(d);
  const Matrix in_bell = b.adjoint() * omega * b;
  Matrix off = in_bell;
  off.diagonal().setZero();
  if (max_abs(off) > kMatrixTol) {
    throw ValidationError("bell_spectrum_of: operator is not Bell-diagonal (off-diagonal residual " +
                          std::to_string(max_abs(off)) + ")");
  }
  BellSpectrum out{d, std::vector<double>(static_cast<std::size_t>(d * d))};
  for (int k = 0; k < d * d; ++k) out.lambda[static_cast<std::size_t>(k)] = in_bell(k, k).real();
  return out;
}

}  // namespace qgv
