#pragma once

// Prepare-and-measure verification strategies for a target unitary and their
// verification operators Omega = d * sum_l p_l rho_l^T (x) E_l.

#include <string>
#include <vector>

#include "qgv/linalg.hpp"

namespace qgv {

inline constexpr double kPairingTol = 1e-8;

// Input state rho_l, accepting effect E_l (outcome "pass"), and its probability p_l.
struct VerificationPair {
  Matrix input_state;
  Matrix effect;
  double probability = 0.0;
};

struct Strategy {
  int d = 2;
  Matrix target;
  std::vector<VerificationPair> pairs;

  // Checks every pair (rho PSD with unit trace, 0 <= E <= I, p in (0,1],
  // Tr[U rho U^dag E] = 1) and sum p = 1. Throws ValidationError naming the first failure.
  void validate() const;
};

struct VerificationOperator {
  int d = 2;
  Matrix matrix;
};

// Tr[U rho U^dagger E] for one pair.
double pairing_value(const Matrix& target, const VerificationPair& pair);

// Raw sum without validation; used by builders and by tests on invalid pair sets.
Matrix omega_matrix(int d, const std::vector<VerificationPair>& pairs);

// Validates the strategy, builds Omega, and checks 0 <= Omega <= I and Tr[Omega Phi_U] = 1.
VerificationOperator omega_from_strategy(const Strategy& s);

// nu = 1 - (second largest eigenvalue). Throws ValidationError if the top
// eigenvalue differs from 1 by more than 1e-6.
double spectral_gap(const VerificationOperator& omega);
double spectral_gap(const Matrix& omega);

bool is_prime(int d);

// A basis is a d x d matrix whose columns are the basis vectors.
using Basis = Matrix;

// d + 1 mutually unbiased bases for prime d. d = 2 gives the Z, X, Y eigenbases
// in that order; odd primes give the computational basis followed by the
// quadratic-phase bases with components omega^{a j^2 + b j} / sqrt(d).
// Throws ValidationError for non-prime d.
std::vector<Basis> mub_bases(int d);

// P(B) = sum_psi psi^* (x) psi (as projectors).
Matrix cb_projector(const Basis& basis);

// (I + d Phi_U) / (1 + d).
Matrix optimal_omega(const Matrix& target);

// Pairs (psi, U psi) with probability 1 / (g d) for every vector of the given bases.
Strategy strategy_from_bases(const Matrix& target, const std::vector<Basis>& bases);

Strategy optimal_strategy(const Matrix& target, int d);
Strategy g_mub_strategy(const Matrix& target, int d, int g);

// A weighted complex projective 2-design {p_alpha, phi_alpha} supplied by the
// caller for dimensions without a built-in MUB construction.
struct WeightedVector {
  double weight = 0.0;
  Matrix vector;  // d x 1
};

// Requires sum weight = d and sum weight phi^* (x) phi = Omega_op; emits
// pairs (phi, U phi) with probability weight / d.
Strategy two_design_strategy(const Matrix& target, const std::vector<WeightedVector>& design);

// Effects conjugated E -> U E U^dagger. Input strategy must target the identity.
Strategy rotate_strategy(const Strategy& identity_strategy, const Matrix& target);

// Adds the always-pass pair (I/d, I) with probability p and rescales the rest by 1-p.
Strategy trivial_test_mix(const Strategy& s, double p);

// Trivial-test probability (d + 1 - e) / (e d) turning Omega_op into Phi_U + (1/e)(1 - Phi_U).
double homogeneous_trivial_probability(int d);

// Given an operator T that is block diagonal with respect to the input basis
// `input_basis` (T = sum_a |a><a| (x) E_a), emit pairs (conj(|a><a|), E_a) each
// carrying probability `weight / d`.
std::vector<VerificationPair> pairs_from_block_diagonal(const Matrix& test, const Basis& input_basis,
                                                        double weight);

}  // namespace qgv
