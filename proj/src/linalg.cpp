#include "qgv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "qgv/error.hpp"

namespace qgv {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix kron_all(std::span<const Matrix> factors) {
  Matrix out = Matrix::Ones(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Matrix dagger(const Matrix& a) { return a.adjoint(); }

Matrix partial_trace(const Matrix& m, std::span<const int> dims, std::span<const int> keep) {
  const int n = static_cast<int>(dims.size());
  long total = 1;
  for (int d : dims) {
    if (d < 1) throw ValidationError("partial_trace: subsystem dimension must be positive");
    total *= d;
  }
  if (m.rows() != total || m.cols() != total) {
    throw ValidationError("partial_trace: product of dims (" + std::to_string(total) +
                          ") does not match matrix shape " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
  }
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw ValidationError("partial_trace: kept subsystem index out of range");
    if (kept[k]) throw ValidationError("partial_trace: duplicate kept subsystem");
    kept[k] = true;
  }

  // Split every full index into (kept part, traced part), subsystem 0 most significant.
  std::vector<long> kept_index(total), traced_index(total);
  long kept_dim = 1;
  for (int s = 0; s < n; ++s) {
    if (kept[s]) kept_dim *= dims[s];
  }
  for (long full = 0; full < total; ++full) {
    long rem = full, stride = total, ki = 0, ti = 0;
    for (int s = 0; s < n; ++s) {
      stride /= dims[s];
      const long digit = rem / stride;
      rem %= stride;
      if (kept[s]) {
        ki = ki * dims[s] + digit;
      } else {
        ti = ti * dims[s] + digit;
      }
    }
    kept_index[full] = ki;
    traced_index[full] = ti;
  }

  Matrix out = Matrix::Zero(kept_dim, kept_dim);
  for (long r = 0; r < total; ++r) {
    for (long c = 0; c < total; ++c) {
      if (traced_index[r] == traced_index[c]) out(kept_index[r], kept_index[c]) += m(r, c);
    }
  }
  return out;
}

HermitianSpectrum hermitian_eig(const Matrix& m) {
  if (!is_square(m)) throw ValidationError("hermitian_eig: matrix is not square");
  if (!is_hermitian(m)) throw ValidationError("hermitian_eig: matrix is not Hermitian");
  // Symmetrise to remove rounding-level anti-Hermitian noise.
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericFault("hermitian_eig: eigensolver failed");

  const auto n = h.rows();
  HermitianSpectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  // Eigen sorts ascending.
  for (Eigen::Index j = 0; j < n; ++j) {
    out.eigenvalues[j] = solver.eigenvalues()(n - 1 - j);
    out.eigenvectors.col(j) = solver.eigenvectors().col(n - 1 - j);
  }
  return out;
}

std::vector<Eigenspace> eigenspaces(const HermitianSpectrum& spectrum) {
  std::vector<Eigenspace> out;
  const auto n = static_cast<Eigen::Index>(spectrum.eigenvalues.size());
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && spectrum.eigenvalues[end - 1] - spectrum.eigenvalues[end] < kDegeneracyTol) ++end;
    const Eigen::Index width = end - start;
    double mean = 0.0;
    for (Eigen::Index j = start; j < end; ++j) mean += spectrum.eigenvalues[j];
    mean /= static_cast<double>(width);

    Matrix block = spectrum.eigenvectors.middleCols(start, width);
    Eigen::HouseholderQR<Matrix> qr(block);
    Matrix q = qr.householderQ() * Matrix::Identity(block.rows(), width);
    out.push_back({mean, std::move(q)});
    start = end;
  }
  return out;
}

Matrix haar_random_unitary(int d, std::uint64_t seed) {
  if (d < 1) throw ValidationError("haar_random_unitary: dimension must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the distribution is exactly Haar.
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0 ? rjj / mag : Complex(1.0, 0.0));
  }
  return q;
}

Matrix identity(int d) { return Matrix::Identity(d, d); }

Matrix ket(int d, int index) {
  Matrix v = Matrix::Zero(d, 1);
  v(index, 0) = 1.0;
  return v;
}

Matrix projector(const Matrix& v) { return v * v.adjoint(); }

Complex trace(const Matrix& m) { return m.trace(); }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("max_abs_diff: shape mismatch");
  }
  return max_abs(a - b);
}

bool is_square(const Matrix& m) { return m.rows() == m.cols(); }

bool is_hermitian(const Matrix& m, double tol) {
  return is_square(m) && max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
  return is_square(m) && max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())) <= tol;
}

bool all_finite(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  }
  return true;
}

double min_eigenvalue(const Matrix& m) { return hermitian_eig(m).eigenvalues.back(); }

double max_eigenvalue(const Matrix& m) { return hermitian_eig(m).eigenvalues.front(); }

bool is_psd(const Matrix& m, double tol) {
  if (!is_hermitian(m, std::max(tol, kHermitianTol))) return false;
  const Matrix h = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues()(0) >= -tol;
}

bool is_effect(const Matrix& m, double tol) {
  if (!is_hermitian(m, std::max(tol, kHermitianTol))) return false;
  const Matrix h = 0.5 * (m + m.adjoint());
  const auto ev = Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
  return ev(0) >= -tol && ev(ev.size() - 1) <= 1.0 + tol;
}

bool is_power_of_two(int d) { return d > 0 && (d & (d - 1)) == 0; }

int log2_exact(int d) {
  if (!is_power_of_two(d)) throw ValidationError("dimension " + std::to_string(d) + " is not a power of two");
  int n = 0;
  while ((1 << n) < d) ++n;
  return n;
}

}  // namespace qgv
