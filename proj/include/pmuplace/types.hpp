#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pmuplace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = Mat<double>;
using Vector = Vec<double>;
using IntMatrix = Mat<int>;
using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Boolean mask over buses (or measurement rows).
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Relative eigenvalue threshold below which a gain matrix is treated as
/// singular, and the pseudo-inverse cutoff.
inline constexpr double kSingularRelTol = 1e-8;

/// Input-document rejection. `path` points at the offending field.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Raised when an exhaustive search is asked for on a system too large for it.
class SizeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when no feasible solution exists (observability repair, game with
/// unavoidable infinite cost).
class InfeasibleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline BoolArray mask_from_buses(const std::vector<int>& buses, Index n) {
  BoolArray m = BoolArray::Constant(n, false);
  for (int b : buses) {
    if (b < 0 || b >= n) throw std::out_of_range("bus index out of range");
    m[b] = true;
  }
  return m;
}

inline std::vector<int> buses_from_mask(const BoolArray& mask) {
  std::vector<int> out;
  for (Index i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(static_cast<int>(i));
  return out;
}

}  // namespace pmuplace
