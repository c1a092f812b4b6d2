#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mulspace {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Points in R^n with n <= 2; the unused component of a 1D point is zero.
using Point = std::array<double, 2>;

inline double radius(const Point& p) { return std::hypot(p[0], p[1]); }
inline double radius_linf(const Point& p) { return std::max(std::fabs(p[0]), std::fabs(p[1])); }

/// Inclusive dyadic index range.
struct JRange {
  int lo = -20;
  int hi = 20;
};

/// Bad argument or precondition failure; `field` names the offending parameter.
struct validation_error : std::invalid_argument {
  std::string field;
  validation_error(std::string f, const std::string& msg)
      : std::invalid_argument(msg), field(std::move(f)) {}
};

/// File or stream failure.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mulspace
