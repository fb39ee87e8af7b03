#pragma once

#include <vector>

#include "pmuplace/grid.hpp"
#include "pmuplace/types.hpp"

namespace pmuplace {

/// Placement-dependent measurement model in rectangular (Re/Im) block form.
/// Real rows are ordered like the four blocks of the linear model: voltage
/// real parts, current real parts, voltage imaginary parts, current
/// imaginary parts. State layout is [Re(V); Im(V)].
struct MeasurementSystem {
  BoolArray placement;       // y_i
  Index n_buses = 0;
  Index d = 0;               // complex measurement count
  Matrix H;                  // 2d x 2n
  BoolArray availability;    // per real row, true when the producing PMU is placed
  Vector noise_variance;     // R diagonal, length 2d
  double sigma = 0.0;

  struct RowLabel {
    bool current = false;    // false: bus voltage, true: branch current
    int bus = -1;            // metering bus
    int incidence_row = -1;  // valid for current rows
    bool imag = false;
  };
  std::vector<RowLabel> row_labels;

  /// Real row indices produced by the PMU at each bus (H_i attribution:
  /// the bus's own voltage rows plus current rows it meters).
  std::vector<std::vector<int>> bus_rows;
};

MeasurementSystem build_measurement_system(const GridTopology& topology,
                                           const BoolArray& placement,
                                           double noise_sigma);

/// Information matrix G = sum over placed buses of H_i^T R_i^-1 H_i,
/// restricted to available rows. Symmetric positive-semidefinite.
Matrix gain_matrix(const MeasurementSystem& ms);

/// Spectral view of a PSD gain matrix with the singularity rule: eigenvalues
/// below kSingularRelTol times the largest count as zero.
struct GainFactor {
  Matrix eigenvectors;
  Vector eigenvalues;  // ascending
  Index rank = 0;
  bool observable = false;
  double log_det = 0.0;  // meaningful only when observable

  /// Minimum-norm solve of G x = rhs (exact inverse when observable).
  Vector solve(const Vector& rhs) const;
  Matrix apply_pinv(const Matrix& rhs) const;
};

GainFactor factor_gain(const Matrix& gain);

struct EstimateResult {
  Vector x_hat;       // 2n, minimum-norm WLS solution
  Matrix gain;
  double phi_d = 0.0; // det G^-1, +infinity when unobservable
  bool observable = false;
};

/// Weighted-least-squares state estimate of z (+ optional additive attack).
/// Never throws on singular gain: the observable flag reports it.
EstimateResult estimate_state(const MeasurementSystem& ms, const Vector& z,
                              const Vector* attack = nullptr);

/// Determinant error-covariance metric of a placement, +infinity when the
/// gain is singular. Computed through log-determinant accumulation.
double phi_d(const GridTopology& topology, const BoolArray& placement,
             double noise_sigma);

double phi_d(const Matrix& gain);

}  // namespace pmuplace
