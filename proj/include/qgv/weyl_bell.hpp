#pragma once

// Heisenberg-Weyl operators W(u,v) = X^u Z^v, the qudit Bell basis
// |Phi_{u,v}> = (I (x) W(u,v)) |Phi_+>, and the Bell twirl.

#include <vector>

#include "qgv/linalg.hpp"

namespace qgv {

struct WeylIndex {
  int u = 0;
  int v = 0;
  int d = 2;

  // Throws ValidationError unless d >= 1 and 0 <= u, v < d.
  void validate() const;
};

// lambda[u * d + v] = <Phi_{u,v}| Omega |Phi_{u,v}>.
struct BellSpectrum {
  int d = 2;
  std::vector<double> lambda;

  double at(int u, int v) const { return lambda[static_cast<std::size_t>(u * d + v)]; }
  // Largest eigenvalue over (u,v) != (0,0).
  double max_off_target() const;
};

Matrix shift_operator(int d);  // X|l> = |l+1 mod d>
Matrix clock_operator(int d);  // Z|l> = exp(2 pi i l / d)|l>
Matrix weyl(const WeylIndex& idx);

// |Phi_+> = sum_j |jj> / sqrt(d) as a d^2 x 1 column.
Matrix max_entangled_ket(int d);
Matrix bell_state(const WeylIndex& idx);
// Columns are |Phi_{u,v}>, column index u * d + v.
Matrix bell_basis(int d);

// (1/d^2) sum_{u,v} (W* (x) W) Omega (W* (x) W)^dagger.
Matrix bell_twirl(const Matrix& omega, int d);

// Throws ValidationError if omega is not Bell-diagonal within kMatrixTol.
BellSpectrum bell_spectrum_of(const Matrix& omega, int d);

// Largest off-diagonal magnitude of omega expressed in the Bell basis.
double bell_offdiagonal_residual(const Matrix& omega, int d);

}  // namespace qgv
