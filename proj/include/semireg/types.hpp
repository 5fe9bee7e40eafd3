#pragma once

#include <complex>
#include <cstdint>
#include <limits>

#include <Eigen/Dense>

namespace semireg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr std::uint64_t kDefaultSeed = 20240611;

}  // namespace semireg
