#include "pmuplace/attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmuplace {
namespace {

constexpr double kStealthMargin = 1e-6;  // attacks scale to (1 - margin) * tau
constexpr double kStatRankTol = 1e-10;   // relative cutoff for the statistic quadratic

struct AttackMaps {
  std::vector<int> support;  // real measurement rows of compromised PMUs
  Matrix shift_map;          // 2n x |support|: injection -> estimator state shift
  Matrix gain;
};

// Minimum-norm WLS response of the full system to unit injections on the
// compromised channels.
AttackMaps build_maps(const MeasurementSystem& ms, const BoolArray& compromised) {
  if (compromised.size() != ms.n_buses)
    throw std::invalid_argument("compromised length must equal bus count");

  AttackMaps maps;
  for (Index bus = 0; bus < ms.n_buses; ++bus) {
    if (!ms.placement[bus] || !compromised[bus]) continue;
    for (int row : ms.bus_rows[bus])
      if (ms.availability[row]) maps.support.push_back(row);
  }
  std::sort(maps.support.begin(), maps.support.end());
  if (maps.support.empty()) return maps;

  maps.gain = gain_matrix(ms);
  const GainFactor factor = factor_gain(maps.gain);
  Matrix rhs(2 * ms.n_buses, maps.support.size());
  for (std::size_t c = 0; c < maps.support.size(); ++c) {
    const int row = maps.support[c];
    rhs.col(c) = ms.H.row(row).transpose() / ms.noise_variance[row];
  }
  maps.shift_map = factor.apply_pinv(rhs);
  return maps;
}

double gain_norm(const Matrix& gain, const Vector& shift) {
  return std::sqrt(std::max(0.0, shift.dot(gain * shift)));
}

}  // namespace

RiskMatrix RiskMatrix::from_matrix(Matrix beta) {
  if (beta.rows() != beta.cols()) throw ValidationError("beta", "matrix must be square");
  for (Index i = 0; i < beta.rows(); ++i) {
    if (beta(i, i) != 1.0)
      throw ValidationError("beta[" + std::to_string(i + 1) + "]", "diagonal must be 1");
    for (Index j = 0; j < beta.cols(); ++j)
      if (beta(i, j) < 0.0 || beta(i, j) > 1.0)
        throw ValidationError("beta[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]",
                              "entries must lie in [0,1]");
  }
  RiskMatrix r;
  r.beta = std::move(beta);
  return r;
}

RiskMatrix RiskMatrix::identity(Index n) {
  RiskMatrix r;
  r.beta = Matrix::Identity(n, n);
  return r;
}

CompromiseState initial_compromise(const BoolArray& placement, const BoolArray& direct) {
  if (direct.size() != placement.size())
    throw std::invalid_argument("direct length must equal placement length");
  CompromiseState s;
  s.stage = 0;
  s.direct = direct;
  s.prob = Vector::Zero(placement.size());
  for (Index i = 0; i < placement.size(); ++i)
    if (placement[i] && direct[i]) s.prob[i] = 1.0;
  return s;
}

CompromiseState propagate(const CompromiseState& state, const RiskMatrix& risk,
                          const BoolArray& placement) {
  const Index n = placement.size();
  if (state.prob.size() != n || risk.beta.rows() != n)
    throw std::invalid_argument("dimension mismatch in propagate");

  CompromiseState next = state;
  next.stage = state.stage + 1;
  for (Index j = 0; j < n; ++j) {
    if (!placement[j]) {
      next.prob[j] = 0.0;
      continue;
    }
    double untouched = 1.0;
    for (Index i = 0; i < n; ++i) {
      if (i == j || !placement[i]) continue;
      untouched *= 1.0 - state.prob[i] * risk.beta(i, j);
    }
    next.prob[j] = std::clamp(1.0 - (1.0 - state.prob[j]) * untouched, 0.0, 1.0);
  }
  return next;
}

double detection_statistic(const MeasurementSystem& ms, const BoolArray& compromised,
                           const Vector& a) {
  if (a.size() != 2 * ms.d) throw std::invalid_argument("attack vector length mismatch");
  if (ms.d == 0)
    throw InfeasibleError("detection statistic undefined: system has no measurements");

  const AttackMaps maps = build_maps(ms, compromised);
  BoolArray on_support = BoolArray::Constant(2 * ms.d, false);
  for (int r : maps.support) on_support[r] = true;
  for (Index i = 0; i < a.size(); ++i)
    if (a[i] != 0.0 && !on_support[i])
      throw std::invalid_argument("attack supported outside compromised measurements");
  if (maps.support.empty()) return 0.0;

  Vector as(maps.support.size());
  for (std::size_t c = 0; c < maps.support.size(); ++c) as[c] = a[maps.support[c]];
  return gain_norm(maps.gain, maps.shift_map * as);
}

AttackVector design_attack(const MeasurementSystem& ms, const BoolArray& compromised,
                           double tau) {
  if (!(tau > 0)) throw std::invalid_argument("tau must be positive");

  AttackVector out;
  out.a = Vector::Zero(2 * ms.d);

  const AttackMaps maps = build_maps(ms, compromised);
  out.support = maps.support;
  if (maps.support.empty()) return out;

  const Index s = static_cast<Index>(maps.support.size());
  const Matrix& M = maps.shift_map;

  // Objective ||dx||^2 against statistic dx' G dx; both vanish exactly on the
  // kernel of M, so the whitened problem is always bounded.
  const Matrix distortion_quad = M.transpose() * M;
  const Matrix stat_quad = M.transpose() * maps.gain * M;

  Eigen::SelfAdjointEigenSolver<Matrix> stat_eig(stat_quad);
  const Vector& sv = stat_eig.eigenvalues();
  const double sv_max = std::max(sv[s - 1], 0.0);
  if (sv_max <= 0.0) return out;
  const double cutoff = sv_max * kStatRankTol;

  Index eff = 0;
  for (Index i = 0; i < s; ++i)
    if (sv[i] > cutoff) ++eff;

  Matrix whiten(s, eff);
  for (Index i = 0; i < eff; ++i) {
    const Index src = s - eff + i;
    whiten.col(i) = stat_eig.eigenvectors().col(src) / std::sqrt(sv[src]);
  }

  const Matrix reduced = whiten.transpose() * distortion_quad * whiten;
  Eigen::SelfAdjointEigenSolver<Matrix> dist_eig(reduced);
  const double top = dist_eig.eigenvalues()[eff - 1];
  if (top <= 0.0) return out;

  const double scale = (1.0 - kStealthMargin) * tau;
  Vector as = whiten * dist_eig.eigenvectors().col(eff - 1) * scale;

  // Deterministic sign: largest-magnitude component positive.
  Index pivot = 0;
  as.cwiseAbs().maxCoeff(&pivot);
  if (as[pivot] < 0) as = -as;

  for (Index c = 0; c < s; ++c) out.a[maps.support[c]] = as[c];
  const Vector shift = M * as;
  out.statistic = gain_norm(maps.gain, shift);
  out.objective = shift.squaredNorm();
  out.stealthy = out.statistic < tau;
  return out;
}

double default_detection_threshold(double noise_sigma, Index two_d) {
  return 3.0 * noise_sigma * std::sqrt(static_cast<double>(two_d));
}

}  // namespace pmuplace
