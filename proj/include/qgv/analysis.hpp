#pragma once

// Pass probabilities, trial numbers, the numeric pass-probability bracket,
// and the adversarial analysis of homogeneous strategies.

#include <cstdint>

#include "qgv/linalg.hpp"
#include "qgv/weyl_bell.hpp"

namespace qgv {

// ceil(x) after removing a relative slack of 1e-12, so ratios that are integers
// up to rounding are not pushed to the next integer. Non-positive x gives 0.
long ceil_count(double x);

// 1 - nu(Omega) * epsilon.
double pass_probability_bound(const Matrix& omega, double epsilon);

// Bell spectrum of Omega relative to the target, i.e. of (I (x) U^dag) Omega (I (x) U).
BellSpectrum bell_spectrum_for_target(const Matrix& omega, const Matrix& target);

// Exact maximum over Bell-diagonal Choi states with fidelity <= 1 - epsilon:
// (1 - epsilon) + epsilon * (largest off-target eigenvalue). Requires lambda_{0,0} = 1.
double pass_probability_bell_exact(const BellSpectrum& spectrum, double epsilon);

struct PassProbabilityBracket {
  double lower = 0.0;          // attained by an explicit channel with fidelity <= 1 - epsilon
  double upper = 0.0;          // 1 - nu epsilon
  double lower_fidelity = 0.0; // entanglement fidelity of the channel attaining `lower`
  bool converged = false;
  int iterations = 0;          // total gradient steps over all starts
};

// Projected gradient ascent over Stinespring isometries (d^2 Kraus operators),
// multi-start from Haar-random isometries. Candidates with fidelity above
// 1 - epsilon are mixed with the best Bell-type Choi state orthogonal to Phi_U,
// so every evaluated point is feasible. Throws NumericFault if lower exceeds
// upper by more than 1e-7.
PassProbabilityBracket pass_probability_numeric(const Matrix& omega, double epsilon, const Matrix& target,
                                                int iterations = 2000, std::uint64_t seed = 1, int starts = 6);

// ceil(ln(1/delta) / ln(1/(1 - nu epsilon))). delta = 1 gives 0; nu epsilon >= 1 gives 1.
long trial_count_from_gap(double nu, double epsilon, double delta);
long trial_count(double epsilon, double delta, const Matrix& omega);

// Omega = Phi_U + lambda (1 - Phi_U).
struct HomogeneousStrategy {
  int d = 2;
  double lambda = 0.0;

  void validate() const;
  Matrix omega(const Matrix& target) const;
};

// Permutation-symmetric state with m bad rounds among N + 1.
struct SymmetricPoint {
  int m = 0;
  long N = 0;
  double p = 1.0;  // probability that the N test rounds pass
  double f = 1.0;  // probability of passing and the remaining round being good
};

SymmetricPoint symmetric_point(int m, long N, double lambda);

struct AdversarialBound {
  double fidelity = 1.0;
  bool useless = false;  // no state satisfies p >= delta
};

// min (sum c f)/(sum c p) over mixtures of symmetric points with sum c p >= delta.
// The optimum sits on a single point or on the lower convex hull of {(p, f)} at p = delta.
AdversarialBound adversarial_fidelity_bound(long N, double delta, double lambda);
AdversarialBound adversarial_fidelity_bound(long N, double delta, const HomogeneousStrategy& hs);

struct AdversarialCount {
  long N = 0;
  bool monotone = true;  // F(N) never decreased along the search
};

// Smallest N with F(N, delta, lambda) >= 1 - epsilon, linear search capped at
// 10^7 (NumericFault past the cap).
AdversarialCount adversarial_trial_count(double epsilon, double delta, double lambda);

// lambda in [0, 1) maximising F(N, delta, lambda): 400-point grid, then
// golden-section refinement around the best grid point. Ties go to smaller lambda.
double optimal_lambda(long N, double delta);

}  // namespace qgv
