#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace phasegbs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Invalid user input: bad dimensions, out-of-range parameters, malformed files.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation produced a result outside its valid domain
/// (non-finite moments, an unphysical covariance, a truncation deficit).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Mean and standard error of the mean.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct ComplexEstimate {
  Complex value{};
  double std_error_real = 0.0;
  double std_error_imag = 0.0;
};

}  // namespace phasegbs
