#include "pmuplace/estimation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pmuplace {

MeasurementSystem build_measurement_system(const GridTopology& topology,
                                           const BoolArray& placement,
                                           double noise_sigma) {
  if (placement.size() != topology.n_buses)
    throw std::invalid_argument("placement length must equal bus count");
  if (!(noise_sigma > 0)) throw std::invalid_argument("noise_sigma must be positive");

  const Index n = topology.n_buses;
  const IncidenceMatrix inc = build_incidence(topology);

  std::vector<int> voltage_buses;
  for (Index i = 0; i < n; ++i)
    if (placement[i]) voltage_buses.push_back(static_cast<int>(i));

  // A PMU meters the current rows whose +1 entry sits at its bus.
  std::vector<int> current_rows;
  for (Index r = 0; r < inc.rows.rows(); ++r) {
    const auto& br = topology.branches[inc.row_branch[r].first];
    const int metering = inc.row_branch[r].second ? br.from : br.to;
    if (placement[metering]) current_rows.push_back(static_cast<int>(r));
  }

  const Index g = static_cast<Index>(voltage_buses.size());
  const Index c = static_cast<Index>(current_rows.size());

  MeasurementSystem ms;
  ms.placement = placement;
  ms.n_buses = n;
  ms.d = g + c;
  ms.sigma = noise_sigma;
  ms.H = Matrix::Zero(2 * ms.d, 2 * n);
  ms.availability = BoolArray::Constant(2 * ms.d, true);
  ms.noise_variance = Vector::Constant(2 * ms.d, noise_sigma * noise_sigma);
  ms.row_labels.resize(2 * ms.d);
  ms.bus_rows.assign(n, {});

  // Block row offsets: [V Re | I Re | V Im | I Im].
  const Index v_re = 0, i_re = g, v_im = g + c, i_im = 2 * g + c;

  for (Index v = 0; v < g; ++v) {
    const int bus = voltage_buses[v];
    ms.H(v_re + v, bus) = 1.0;
    ms.H(v_im + v, n + bus) = 1.0;
    ms.row_labels[v_re + v] = {false, bus, -1, false};
    ms.row_labels[v_im + v] = {false, bus, -1, true};
    ms.bus_rows[bus].push_back(static_cast<int>(v_re + v));
    ms.bus_rows[bus].push_back(static_cast<int>(v_im + v));
  }

  for (Index k = 0; k < c; ++k) {
    const int r = current_rows[k];
    const auto& br = topology.branches[inc.row_branch[r].first];
    const int metering = inc.row_branch[r].second ? br.from : br.to;
    const double gy = br.admittance.real();
    const double by = br.admittance.imag();
    for (Index col = 0; col < n; ++col) {
      const double w = static_cast<double>(inc.rows(r, col));
      if (w == 0.0) continue;
      ms.H(i_re + k, col) = gy * w;
      ms.H(i_re + k, n + col) = -by * w;
      ms.H(i_im + k, col) = by * w;
      ms.H(i_im + k, n + col) = gy * w;
    }
    ms.row_labels[i_re + k] = {true, metering, r, false};
    ms.row_labels[i_im + k] = {true, metering, r, true};
    ms.bus_rows[metering].push_back(static_cast<int>(i_re + k));
    ms.bus_rows[metering].push_back(static_cast<int>(i_im + k));
  }

  return ms;
}

Matrix gain_matrix(const MeasurementSystem& ms) {
  const Index two_n = 2 * ms.n_buses;
  Matrix gain = Matrix::Zero(two_n, two_n);
  for (Index bus = 0; bus < ms.n_buses; ++bus) {
    if (!ms.placement[bus]) continue;
    for (int row : ms.bus_rows[bus]) {
      if (!ms.availability[row]) continue;
      const double w = 1.0 / ms.noise_variance[row];
      gain.noalias() += w * ms.H.row(row).transpose() * ms.H.row(row);
    }
  }
  return gain;
}

GainFactor factor_gain(const Matrix& gain) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gain);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("gain eigendecomposition failed");

  GainFactor f;
  f.eigenvectors = eig.eigenvectors();
  f.eigenvalues = eig.eigenvalues();
  const Index m = f.eigenvalues.size();
  const double lambda_max = m > 0 ? std::max(f.eigenvalues[m - 1], 0.0) : 0.0;
  const double cutoff = lambda_max * kSingularRelTol;

  f.rank = 0;
  f.log_det = 0.0;
  for (Index i = 0; i < m; ++i) {
    if (f.eigenvalues[i] > cutoff && f.eigenvalues[i] > 0.0) {
      ++f.rank;
      f.log_det += std::log(f.eigenvalues[i]);
    }
  }
  f.observable = (f.rank == m) && m > 0;
  return f;
}

Vector GainFactor::solve(const Vector& rhs) const {
  const Index m = eigenvalues.size();
  const double lambda_max = m > 0 ? std::max(eigenvalues[m - 1], 0.0) : 0.0;
  const double cutoff = lambda_max * kSingularRelTol;
  Vector coeffs = eigenvectors.transpose() * rhs;
  for (Index i = 0; i < m; ++i)
    coeffs[i] = (eigenvalues[i] > cutoff && eigenvalues[i] > 0.0)
                    ? coeffs[i] / eigenvalues[i]
                    : 0.0;
  return eigenvectors * coeffs;
}

Matrix GainFactor::apply_pinv(const Matrix& rhs) const {
  const Index m = eigenvalues.size();
  const double lambda_max = m > 0 ? std::max(eigenvalues[m - 1], 0.0) : 0.0;
  const double cutoff = lambda_max * kSingularRelTol;
  Matrix coeffs = eigenvectors.transpose() * rhs;
  for (Index i = 0; i < m; ++i) {
    const double inv = (eigenvalues[i] > cutoff && eigenvalues[i] > 0.0)
                           ? 1.0 / eigenvalues[i]
                           : 0.0;
    coeffs.row(i) *= inv;
  }
  return eigenvectors * coeffs;
}

EstimateResult estimate_state(const MeasurementSystem& ms, const Vector& z,
                              const Vector* attack) {
  if (z.size() != 2 * ms.d) throw std::invalid_argument("measurement vector length mismatch");
  Vector zc = z;
  if (attack != nullptr) {
    if (attack->size() != 2 * ms.d)
      throw std::invalid_argument("attack vector length mismatch");
    for (Index i = 0; i < attack->size(); ++i)
      if ((*attack)[i] != 0.0 && !ms.availability[i])
        throw std::invalid_argument("attack supported on an unavailable measurement");
    zc += *attack;
  }

  EstimateResult res;
  res.gain = gain_matrix(ms);
  const GainFactor f = factor_gain(res.gain);
  res.observable = f.observable;
  res.phi_d = f.observable ? std::exp(-f.log_det)
                           : std::numeric_limits<double>::infinity();

  Vector rhs = Vector::Zero(2 * ms.n_buses);
  for (Index row = 0; row < 2 * ms.d; ++row) {
    if (!ms.availability[row]) continue;
    rhs.noalias() += (zc[row] / ms.noise_variance[row]) * ms.H.row(row).transpose();
  }
  res.x_hat = f.solve(rhs);
  return res;
}

double phi_d(const Matrix& gain) {
  const GainFactor f = factor_gain(gain);
  return f.observable ? std::exp(-f.log_det)
                      : std::numeric_limits<double>::infinity();
}

double phi_d(const GridTopology& topology, const BoolArray& placement,
             double noise_sigma) {
  return phi_d(gain_matrix(build_measurement_system(topology, placement, noise_sigma)));
}

}  // namespace pmuplace
