#include "qgv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qgv/channels.hpp"
#include "qgv/error.hpp"
#include "qgv/strategies.hpp"

namespace qgv {

long ceil_count(double x) {
  if (!std::isfinite(x)) throw NumericFault("ceil_count: non-finite ratio");
  if (x <= 0.0) return 0;
  return static_cast<long>(std::ceil(x - 1e-12 * x));
}

double pass_probability_bound(const Matrix& omega, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ValidationError("pass_probability_bound: epsilon must lie in [0, 1]");
  return 1.0 - spectral_gap(omega) * epsilon;
}

BellSpectrum bell_spectrum_for_target(const Matrix& omega, const Matrix& target) {
  const int d = static_cast<int>(target.rows());
  if (!is_unitary(target)) throw ValidationError("bell_spectrum_for_target: target is not unitary");
  if (omega.rows() != d * d || omega.cols() != d * d) {
    throw ValidationError("bell_spectrum_for_target: Omega must be d^2 x d^2");
  }
  const Matrix rot = kron(identity(d), target);
  return bell_spectrum_of(rot.adjoint() * omega * rot, d);
}

double pass_probability_bell_exact(const BellSpectrum& spectrum, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ValidationError("pass_probability_bell_exact: epsilon must lie in [0, 1]");
  }
  if (spectrum.lambda.size() != static_cast<std::size_t>(spectrum.d * spectrum.d)) {
    throw ValidationError("pass_probability_bell_exact: spectrum has wrong length");
  }
  if (std::abs(spectrum.at(0, 0) - 1.0) > kMatrixTol) {
    throw ValidationError("pass_probability_bell_exact: lambda_{0,0} = " + std::to_string(spectrum.at(0, 0)) +
                          ", expected 1");
  }
  return (1.0 - epsilon) + epsilon * spectrum.max_off_target();
}

namespace {

// Choi state of the channel whose Kraus operators are the d x d row blocks of v.
Matrix choi_of_isometry(const Matrix& v, int d, std::vector<Vector>& psi) {
  const int k_count = static_cast<int>(v.rows()) / d;
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  psi.assign(static_cast<std::size_t>(k_count), Vector::Zero(d * d));
  Matrix choi = Matrix::Zero(d * d, d * d);
  for (int k = 0; k < k_count; ++k) {
    Vector& p = psi[static_cast<std::size_t>(k)];
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) p(j * d + i) = s * v(k * d + i, j);
    }
    choi += p * p.adjoint();
  }
  return choi;
}

Matrix polar_factor(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

struct Evaluation {
  double value = 0.0;     // repaired objective
  double fidelity = 0.0;  // fidelity of the repaired point
  Matrix gradient;        // Euclidean ascent direction in isometry coordinates
};

}  // namespace

PassProbabilityBracket pass_probability_numeric(const Matrix& omega, double epsilon, const Matrix& target,
                                                int iterations, std::uint64_t seed, int starts) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ValidationError("pass_probability_numeric: epsilon must lie in [0, 1]");
  }
  if (iterations < 1 || starts < 1) throw ValidationError("pass_probability_numeric: iterations and starts must be >= 1");
  const int d = static_cast<int>(target.rows());
  if (!is_unitary(target)) throw ValidationError("pass_probability_numeric: target is not unitary");
  if (omega.rows() != d * d || !is_effect(omega)) {
    throw ValidationError("pass_probability_numeric: Omega must be a d^2 x d^2 operator with 0 <= Omega <= I");
  }

  PassProbabilityBracket out;
  out.upper = pass_probability_bound(omega, epsilon);
  const Matrix phi_u = unitary_choi(target);
  const double cap = 1.0 - epsilon;

  // Best fidelity-zero Choi state among Phi_{U W(u,v)}, used to repair infeasible points.
  double bad_value = -1.0;
  for (int u = 0; u < d; ++u) {
    for (int v = 0; v < d; ++v) {
      if (u == 0 && v == 0) continue;
      const double val = (omega * unitary_choi(target * weyl({u, v, d}))).trace().real();
      bad_value = std::max(bad_value, val);
    }
  }

  const int k_count = d * d;
  std::vector<Vector> psi;
  auto evaluate = [&](const Matrix& v) {
    const Matrix choi = choi_of_isometry(v, d, psi);
    const double obj = (omega * choi).trace().real();
    const double fid = (phi_u * choi).trace().real();
    Evaluation e;
    Matrix a;
    if (fid <= cap) {
      e.value = obj;
      e.fidelity = fid;
      a = omega;
    } else {
      // R = (c/F) O + (1 - c/F) b; dR = (c/F) [dO - ((O - b)/F) dF].
      const double r = cap / fid;
      e.value = r * obj + (1.0 - r) * bad_value;
      e.fidelity = cap;
      a = r * (omega - ((obj - bad_value) / fid) * phi_u);
    }
    e.gradient = Matrix::Zero(v.rows(), v.cols());
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < k_count; ++k) {
      const Vector ap = a * psi[static_cast<std::size_t>(k)];
      for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) e.gradient(k * d + i, j) = 2.0 * s * ap(j * d + i);
      }
    }
    return e;
  };

  out.lower = -std::numeric_limits<double>::infinity();
  bool any_converged = false;
  for (int start = 0; start < starts; ++start) {
    const Matrix haar = haar_random_unitary(k_count * d, seed * 7919u + static_cast<std::uint64_t>(start));
    Matrix v = haar.leftCols(d);
    Evaluation cur = evaluate(v);
    double step = 0.5;
    bool converged = false;
    int it = 0;
    for (; it < iterations; ++it) {
      // Riemannian gradient: remove the component normal to the isometry manifold.
      const Matrix g = cur.gradient;
      const Matrix vg = v.adjoint() * g;
      const Matrix rg = g - v * (0.5 * (vg + vg.adjoint()));
      const double gnorm = rg.norm();
      if (gnorm < 1e-9) {
        converged = true;
        break;
      }
      bool moved = false;
      while (step > 1e-12) {
        const Matrix trial = polar_factor(v + step * rg);
        Evaluation e = evaluate(trial);
        if (e.value >= cur.value) {
          const double gain = e.value - cur.value;
          v = trial;
          cur = std::move(e);
          step = std::min(step * 1.5, 4.0);
          moved = true;
          if (gain < 1e-13) converged = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) {
        converged = true;
        break;
      }
      if (converged) break;
    }
    out.iterations += it;
    if (cur.value > out.lower) {
      out.lower = cur.value;
      out.lower_fidelity = cur.fidelity;
    }
    any_converged = any_converged || converged;
  }
  out.converged = any_converged;
  if (out.lower > out.upper + 1e-7) {
    throw NumericFault("pass_probability_numeric: lower bound " + std::to_string(out.lower) +
                       " exceeds the spectral bound " + std::to_string(out.upper));
  }
  return out;
}

long trial_count_from_gap(double nu, double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ValidationError("trial_count: epsilon must lie in (0, 1]");
  if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("trial_count: delta must lie in (0, 1]");
  if (!(nu > 1e-12)) throw ValidationError("trial_count: spectral gap is zero, the strategy cannot verify the gate");
  if (delta == 1.0) return 0;
  const double pass = 1.0 - nu * epsilon;
  if (pass <= 0.0) return 1;
  return std::max(1L, ceil_count(std::log(1.0 / delta) / -std::log1p(-nu * epsilon)));
}

long trial_count(double epsilon, double delta, const Matrix& omega) {
  return trial_count_from_gap(spectral_gap(omega), epsilon, delta);
}

void HomogeneousStrategy::validate() const {
  if (d < 2) throw ValidationError("HomogeneousStrategy: d >= 2 required");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ValidationError("HomogeneousStrategy: lambda must lie in [0, 1)");
}

Matrix HomogeneousStrategy::omega(const Matrix& target) const {
  validate();
  if (target.rows() != d) throw ValidationError("HomogeneousStrategy: target dimension mismatch");
  const Matrix phi = unitary_choi(target);
  return phi + lambda * (identity(d * d) - phi);
}

SymmetricPoint symmetric_point(int m, long N, double lambda) {
  if (N < 0) throw ValidationError("symmetric_point: N must be >= 0");
  if (m < 0 || m > N + 1) throw ValidationError("symmetric_point: m must lie in [0, N+1]");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ValidationError("symmetric_point: lambda must lie in [0, 1)");
  const double total = static_cast<double>(N + 1);
  const double good = static_cast<double>(N + 1 - m) * std::pow(lambda, m);
  const double bad = m > 0 ? static_cast<double>(m) * std::pow(lambda, m - 1) : 0.0;
  return {m, N, (good + bad) / total, good / total};
}

AdversarialBound adversarial_fidelity_bound(long N, double delta, double lambda) {
  if (N < 1) throw ValidationError("adversarial_fidelity_bound: N >= 1 required");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("adversarial_fidelity_bound: delta must lie in (0, 1)");
  if (N + 1 > std::numeric_limits<int>::max()) throw ValidationError("adversarial_fidelity_bound: N too large");

  struct P2 {
    double p, f;
  };
  std::vector<P2> pts;
  pts.reserve(static_cast<std::size_t>(N + 2));
  AdversarialBound out;
  out.fidelity = std::numeric_limits<double>::infinity();
  for (int m = 0; m <= N + 1; ++m) {
    const auto sp = symmetric_point(m, N, lambda);
    pts.push_back({sp.p, sp.f});
    if (sp.p >= delta) out.fidelity = std::min(out.fidelity, sp.f / sp.p);
  }
  if (!std::isfinite(out.fidelity)) {
    out.useless = true;
    out.fidelity = 0.0;
    return out;
  }

  // Lower convex hull of the point cloud, evaluated at p = delta.
  std::sort(pts.begin(), pts.end(), [](const P2& a, const P2& b) { return a.p < b.p || (a.p == b.p && a.f < b.f); });
  std::vector<P2> hull;
  for (const auto& q : pts) {
    while (hull.size() >= 2) {
      const P2& a = hull[hull.size() - 2];
      const P2& b = hull.back();
      const double cross = (b.p - a.p) * (q.f - a.f) - (b.f - a.f) * (q.p - a.p);
      if (cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(q);
  }
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const P2& a = hull[i];
    const P2& b = hull[i + 1];
    if (a.p <= delta && delta <= b.p && b.p > a.p) {
      const double t = (delta - a.p) / (b.p - a.p);
      out.fidelity = std::min(out.fidelity, ((1.0 - t) * a.f + t * b.f) / delta);
      break;
    }
  }
  return out;
}

AdversarialBound adversarial_fidelity_bound(long N, double delta, const HomogeneousStrategy& hs) {
  hs.validate();
  return adversarial_fidelity_bound(N, delta, hs.lambda);
}

AdversarialCount adversarial_trial_count(double epsilon, double delta, double lambda) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("adversarial_trial_count: epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("adversarial_trial_count: delta must lie in (0, 1)");
  constexpr long kCap = 10'000'000;
  AdversarialCount out;
  double previous = -1.0;
  for (long n = 1; n <= kCap; ++n) {
    const double f = adversarial_fidelity_bound(n, delta, lambda).fidelity;
    if (f < previous - 1e-12) out.monotone = false;
    previous = f;
    if (f >= 1.0 - epsilon) {
      out.N = n;
      return out;
    }
  }
  throw NumericFault("adversarial_trial_count: no N <= 10^7 reaches fidelity 1 - epsilon");
}

double optimal_lambda(long N, double delta) {
  auto objective = [&](double lam) { return adversarial_fidelity_bound(N, delta, lam).fidelity; };
  constexpr int kGrid = 400;
  int best_i = 0;
  double best = objective(0.0);
  for (int i = 1; i < kGrid; ++i) {
    const double v = objective(static_cast<double>(i) / kGrid);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  double best_lambda = static_cast<double>(best_i) / kGrid;
  double lo = std::max(0.0, (best_i - 1.0) / kGrid);
  double hi = std::min(1.0 - 1e-9, (best_i + 1.0) / kGrid);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = objective(x2);
    }
  }
  const double refined = 0.5 * (lo + hi);
  const double refined_value = objective(refined);
  if (refined_value > best) best_lambda = refined;
  return best_lambda;
}

}  // namespace qgv
