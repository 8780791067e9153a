#pragma once

// Dense complex linear algebra used by every other module. Hilbert spaces are
// small (Choi spaces up to 256 dimensions), so everything is dense and eager.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qgv {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kMatrixTol = 1e-9;      // matrix equality
inline constexpr double kHermitianTol = 1e-10;  // Hermiticity / unitarity checks
inline constexpr double kDegeneracyTol = 1e-8;  // eigenvalue grouping

// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted descending.
// Column j of `eigenvectors` belongs to eigenvalues[j].
struct HermitianSpectrum {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
};

// One degeneracy class of a Hermitian spectrum.
struct Eigenspace {
  double eigenvalue;  // mean of the grouped eigenvalues
  Matrix basis;       // orthonormal columns spanning the eigenspace
  Matrix projector() const { return basis * basis.adjoint(); }
};

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron_all(std::span<const Matrix> factors);
Matrix dagger(const Matrix& a);

// Reduced operator on the subsystems listed in `keep` (any order; output keeps
// ascending subsystem order). Throws ValidationError on dimension mismatch.
Matrix partial_trace(const Matrix& m, std::span<const int> dims, std::span<const int> keep);

// Throws ValidationError if `m` is not Hermitian within kHermitianTol.
HermitianSpectrum hermitian_eig(const Matrix& m);

// Groups eigenvalues closer than kDegeneracyTol and re-orthonormalises each group.
std::vector<Eigenspace> eigenspaces(const HermitianSpectrum& spectrum);

// Haar-distributed unitary, deterministic for a given (d, seed).
Matrix haar_random_unitary(int d, std::uint64_t seed);

Matrix identity(int d);
Matrix ket(int d, int index);
Matrix projector(const Matrix& ket);  // |v><v| for a column vector
Complex trace(const Matrix& m);
double max_abs(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);

bool is_square(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol = kHermitianTol);
bool is_unitary(const Matrix& m, double tol = kHermitianTol);
bool all_finite(const Matrix& m);
// Hermitian with all eigenvalues >= -tol.
bool is_psd(const Matrix& m, double tol = kMatrixTol);
// 0 <= m <= I within tol.
bool is_effect(const Matrix& m, double tol = kMatrixTol);

double min_eigenvalue(const Matrix& m);
double max_eigenvalue(const Matrix& m);

// Integer power of two check and log2 for qubit counts.
bool is_power_of_two(int d);
int log2_exact(int d);

}  // namespace qgv
