#pragma once

/**
 * Shared scalar typedefs and small utilities for the cylstokes core.
 */

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cylstokes {

using Real = double;
using Complex = std::complex<Real>;

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;

constexpr Real kPi = 3.14159265358979323846264338327950288;

inline void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

inline void ensure(bool ok, const std::string& message) {
  if (!ok) throw std::runtime_error(message);
}

/// FNV-1a 64-bit hash of a byte buffer, used for output cross-checksums.
inline std::uint64_t fnv1a64(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace cylstokes
