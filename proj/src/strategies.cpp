#include "qgv/strategies.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qgv/channels.hpp"
#include "qgv/error.hpp"
#include "qgv/weyl_bell.hpp"

namespace qgv {

namespace {

void check_target(const Matrix& target, int d, const char* who) {
  if (target.rows() != d || target.cols() != d) {
    throw ValidationError(std::string(who) + ": target must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  if (!is_unitary(target)) throw ValidationError(std::string(who) + ": target is not unitary");
}

void check_orthonormal(const Basis& basis, const char* who) {
  if (!is_square(basis) || !is_unitary(basis, kMatrixTol)) {
    throw ValidationError(std::string(who) + ": basis vectors are not orthonormal");
  }
}

}  // namespace

double pairing_value(const Matrix& target, const VerificationPair& pair) {
  return (target * pair.input_state * target.adjoint() * pair.effect).trace().real();
}

void Strategy::validate() const {
  if (d < 1) throw ValidationError("Strategy: dimension must be >= 1");
  check_target(target, d, "Strategy");
  if (pairs.empty()) throw ValidationError("Strategy: no verification pairs");
  double total = 0.0;
  for (std::size_t l = 0; l < pairs.size(); ++l) {
    const auto& pr = pairs[l];
    const std::string where = "Strategy pair " + std::to_string(l) + ": ";
    if (pr.input_state.rows() != d || pr.input_state.cols() != d || pr.effect.rows() != d ||
        pr.effect.cols() != d) {
      throw ValidationError(where + "operator shape does not match d = " + std::to_string(d));
    }
    if (!(pr.probability > 0.0 && pr.probability <= 1.0)) {
      throw ValidationError(where + "probability must lie in (0, 1]");
    }
    if (!is_psd(pr.input_state) || std::abs(pr.input_state.trace() - Complex(1.0, 0.0)) > kMatrixTol) {
      throw ValidationError(where + "input state is not a density matrix");
    }
    if (!is_effect(pr.effect)) throw ValidationError(where + "effect is not within 0 <= E <= I");
    const double pass = pairing_value(target, pr);
    if (std::abs(pass - 1.0) > kPairingTol) {
      throw ValidationError(where + "pairing condition Tr[U(rho)E] = 1 fails (value " + std::to_string(pass) + ")");
    }
    total += pr.probability;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw ValidationError("Strategy: probabilities sum to " + std::to_string(total) + ", not 1");
  }
}

Matrix omega_matrix(int d, const std::vector<VerificationPair>& pairs) {
  Matrix omega = Matrix::Zero(d * d, d * d);
  for (const auto& pr : pairs) {
    omega += (static_cast<double>(d) * pr.probability) * kron(pr.input_state.transpose(), pr.effect);
  }
  return omega;
}

VerificationOperator omega_from_strategy(const Strategy& s) {
  s.validate();
  VerificationOperator op{s.d, omega_matrix(s.d, s.pairs)};
  if (!is_effect(op.matrix)) {
    throw ValidationError("omega_from_strategy: verification operator violates 0 <= Omega <= I");
  }
  const double overlap = (op.matrix * unitary_choi(s.target)).trace().real();
  if (std::abs(overlap - 1.0) > kPairingTol) {
    throw ValidationError("omega_from_strategy: Tr[Omega Phi_U] = " + std::to_string(overlap));
  }
  return op;
}

double spectral_gap(const Matrix& omega) {
  const auto spectrum = hermitian_eig(omega);
  if (spectrum.eigenvalues.size() < 2) throw ValidationError("spectral_gap: operator must be at least 2x2");
  if (std::abs(spectrum.eigenvalues.front() - 1.0) > 1e-6) {
    throw ValidationError("spectral_gap: top eigenvalue is " + std::to_string(spectrum.eigenvalues.front()) +
                          ", not 1 (invalid strategy)");
  }
  return 1.0 - spectrum.eigenvalues[1];
}

double spectral_gap(const VerificationOperator& omega) { return spectral_gap(omega.matrix); }

bool is_prime(int d) {
  if (d < 2) return false;
  for (int k = 2; k * k <= d; ++k) {
    if (d % k == 0) return false;
  }
  return true;
}

std::vector<Basis> mub_bases(int d) {
  if (!is_prime(d)) {
    throw ValidationError("mub_bases: no built-in MUB construction for d = " + std::to_string(d) +
                          "; supply your own bases or a weighted 2-design");
  }
  std::vector<Basis> out;
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  if (d == 2) {
    const Complex i(0.0, 1.0);
    Basis z = identity(2);
    Basis x(2, 2);
    x << s, s, s, -s;
    Basis y(2, 2);
    y << s, s, s * i, -s * i;
    out = {z, x, y};
    return out;
  }
  out.push_back(identity(d));
  for (int a = 0; a < d; ++a) {
    Basis b(d, d);
    for (int col = 0; col < d; ++col) {
      for (int j = 0; j < d; ++j) {
        const long phase = (static_cast<long>(a) * j * j + static_cast<long>(col) * j) % d;
        b(j, col) = s * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(phase) / d);
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

Matrix cb_projector(const Basis& basis) {
  check_orthonormal(basis, "cb_projector");
  const auto d = basis.rows();
  Matrix p = Matrix::Zero(d * d, d * d);
  for (Eigen::Index l = 0; l < d; ++l) {
    const Matrix v = kron(basis.col(l).conjugate(), basis.col(l));
    p += v * v.adjoint();
  }
  return p;
}

Matrix optimal_omega(const Matrix& target) {
  const int d = static_cast<int>(target.rows());
  return (identity(d * d) + static_cast<double>(d) * unitary_choi(target)) / (1.0 + d);
}

Strategy strategy_from_bases(const Matrix& target, const std::vector<Basis>& bases) {
  if (bases.empty()) throw ValidationError("strategy_from_bases: no bases supplied");
  const int d = static_cast<int>(target.rows());
  check_target(target, d, "strategy_from_bases");
  Strategy s{d, target, {}};
  const double p = 1.0 / (static_cast<double>(bases.size()) * d);
  for (const auto& b : bases) {
    if (b.rows() != d) throw ValidationError("strategy_from_bases: basis dimension mismatch");
    check_orthonormal(b, "strategy_from_bases");
    for (int i = 0; i < d; ++i) {
      const Matrix psi = b.col(i);
      const Matrix out = target * psi;
      s.pairs.push_back({projector(psi), projector(out), p});
    }
  }
  s.validate();
  return s;
}

Strategy optimal_strategy(const Matrix& target, int d) {
  check_target(target, d, "optimal_strategy");
  return strategy_from_bases(target, mub_bases(d));
}

Strategy g_mub_strategy(const Matrix& target, int d, int g) {
  check_target(target, d, "g_mub_strategy");
  if (g < 2 || g > d + 1) {
    throw ValidationError("g_mub_strategy: g must lie in [2, d+1], got " + std::to_string(g));
  }
  auto bases = mub_bases(d);
  bases.resize(static_cast<std::size_t>(g));
  return strategy_from_bases(target, bases);
}

Strategy two_design_strategy(const Matrix& target, const std::vector<WeightedVector>& design) {
  const int d = static_cast<int>(target.rows());
  check_target(target, d, "two_design_strategy");
  if (design.empty()) throw ValidationError("two_design_strategy: empty design");
  double total = 0.0;
  Matrix realised = Matrix::Zero(d * d, d * d);
  for (const auto& wv : design) {
    if (wv.vector.rows() != d || wv.vector.cols() != 1) {
      throw ValidationError("two_design_strategy: design vectors must be d x 1");
    }
    if (std::abs(wv.vector.norm() - 1.0) > kMatrixTol) {
      throw ValidationError("two_design_strategy: design vectors must be normalised");
    }
    if (!(wv.weight > 0.0)) throw ValidationError("two_design_strategy: weights must be positive");
    total += wv.weight;
    realised += wv.weight * projector(kron(wv.vector.conjugate(), wv.vector));
  }
  if (std::abs(total - d) > 1e-9) throw ValidationError("two_design_strategy: weights must sum to d");
  if (max_abs_diff(realised, optimal_omega(identity(d))) > kMatrixTol) {
    throw ValidationError("two_design_strategy: vectors do not realise (I + d Phi_+)/(1 + d)");
  }
  Strategy s{d, target, {}};
  for (const auto& wv : design) {
    s.pairs.push_back({projector(wv.vector), projector(target * wv.vector), wv.weight / d});
  }
  s.validate();
  return s;
}

Strategy rotate_strategy(const Strategy& identity_strategy, const Matrix& target) {
  const int d = identity_strategy.d;
  check_target(target, d, "rotate_strategy");
  if (max_abs_diff(identity_strategy.target, identity(d)) > kMatrixTol) {
    throw ValidationError("rotate_strategy: input strategy must target the identity");
  }
  Strategy out{d, target, identity_strategy.pairs};
  for (auto& pr : out.pairs) pr.effect = target * pr.effect * target.adjoint();
  out.validate();
  return out;
}

Strategy trivial_test_mix(const Strategy& s, double p) {
  if (!(p >= 0.0 && p < 1.0)) throw ValidationError("trivial_test_mix: p must lie in [0, 1)");
  if (p == 0.0) return s;
  Strategy out = s;
  for (auto& pr : out.pairs) pr.probability *= (1.0 - p);
  out.pairs.push_back({identity(s.d) / static_cast<double>(s.d), identity(s.d), p});
  out.validate();
  return out;
}

double homogeneous_trivial_probability(int d) {
  const double e = std::numbers::e;
  return (d + 1.0 - e) / (e * d);
}

std::vector<VerificationPair> pairs_from_block_diagonal(const Matrix& test, const Basis& input_basis,
                                                        double weight) {
  const auto d = input_basis.rows();
  if (test.rows() != d * d || test.cols() != d * d) {
    throw ValidationError("pairs_from_block_diagonal: test operator must be d^2 x d^2");
  }
  check_orthonormal(input_basis, "pairs_from_block_diagonal");
  std::vector<VerificationPair> pairs;
  Matrix rebuilt = Matrix::Zero(d * d, d * d);
  for (Eigen::Index a = 0; a < d; ++a) {
    const Matrix bra = kron(input_basis.col(a).adjoint(), identity(static_cast<int>(d)));
    const Matrix effect = bra * test * bra.adjoint();
    const Matrix proj = projector(input_basis.col(a));
    rebuilt += kron(proj, effect);
    pairs.push_back({proj.conjugate(), effect, weight / static_cast<double>(d)});
  }
  if (max_abs_diff(rebuilt, test) > kMatrixTol) {
    throw ValidationError("pairs_from_block_diagonal: test operator is not block diagonal in the input basis");
  }
  return pairs;
}

}  // namespace qgv
