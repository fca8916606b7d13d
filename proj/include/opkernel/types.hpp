#pragma once

#include <complex>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace opkernel {

using Real    = double;
using Complex = std::complex<Real>;

using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

/// Vector-valued samples: one column per point, one row per coordinate.
using Samples = CMatrix;

inline constexpr Real kInf = std::numeric_limits<Real>::infinity();

/// Raised when an operation is called outside its domain.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace opkernel
