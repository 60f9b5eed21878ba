#pragma once

/**
 * Spectral discretization of the infinite cylinder D x R, periodized in z.
 *
 * Radial direction: Chebyshev-Gauss-Lobatto collocation on the n_r strictly
 * positive nodes of the doubled 2*n_r point grid on [-1, 1]. Nothing lives at
 * r = 0; regularity across the axis is carried by the parity of each radial
 * profile (even or odd under r -> -r), and differentiation matrices are folded
 * onto the positive nodes per parity. Angular and axial directions use
 * trigonometric collocation with signed wavenumbers m and xi_k = 2 pi k / L.
 */

#include <map>
#include <vector>

#include "core/common.hpp"

namespace cylstokes {

enum class Parity { even, odd };

inline Parity parity_flip(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }

/// Parity of a scalar radial profile at angular mode m: even iff m is even.
inline Parity scalar_parity(int m) { return (m % 2 == 0) ? Parity::even : Parity::odd; }

/// Parity of the r and theta components of a vector at mode m (opposite of scalar).
inline Parity vector_parity(int m) { return (m % 2 == 0) ? Parity::odd : Parity::even; }

class SpectralGrid {
 public:
  SpectralGrid(int n_r, int n_theta, int n_z, Real period);

  int n_r() const { return n_r_; }
  int n_theta() const { return n_theta_; }
  int n_z() const { return n_z_; }
  Real period() const { return period_; }
  int pad_theta() const { return 3 * n_theta_ / 2; }
  int pad_z() const { return 3 * n_z_ / 2; }

  /// Strictly increasing radial nodes in (0, 1], last node exactly 1.
  const RealVec& radial_nodes() const { return nodes_; }
  /// Positive weights with sum_i w_i f(r_i) = int_0^1 f(r) r dr for even f up to degree 2 n_r - 2.
  const RealVec& radial_weights() const { return weights_; }
  const RealVec& inv_r() const { return inv_r_; }
  int boundary_index() const { return n_r_ - 1; }

  /// Folded first derivative; input parity p, output parity flipped.
  const RealMat& d1(Parity p) const { return p == Parity::even ? d1_even_ : d1_odd_; }
  /// Folded second derivative; parity preserved. Exactly d1(flip(p)) * d1(p).
  const RealMat& d2(Parity p) const { return p == Parity::even ? d2_even_ : d2_odd_; }
  /// Complex-typed copies for products with complex profiles.
  const Mat& d1c(Parity p) const { return p == Parity::even ? d1c_even_ : d1c_odd_; }
  const Mat& d2c(Parity p) const { return p == Parity::even ? d2c_even_ : d2c_odd_; }

  /// Signed angular wavenumber for storage index mi in [0, n_theta).
  int theta_mode(int mi) const { return mi <= n_theta_ / 2 ? mi : mi - n_theta_; }
  /// Storage index for signed m; requires -n_theta/2 < m <= n_theta/2.
  int theta_index(int m) const { return m >= 0 ? m : m + n_theta_; }
  bool theta_in_band(int m) const { return m > -n_theta_ / 2 && m <= n_theta_ / 2; }

  int z_mode(int ki) const { return ki <= n_z_ / 2 ? ki : ki - n_z_; }
  int z_index(int k) const { return k >= 0 ? k : k + n_z_; }
  bool z_in_band(int k) const { return k > -n_z_ / 2 && k <= n_z_ / 2; }
  Real xi(int ki) const { return 2.0 * kPi * static_cast<Real>(z_mode(ki)) / period_; }

  /// Synthesis matrix (n_phys x n_theta): value at theta_j = sum_mi S(j, mi) coeff(mi).
  const Mat& theta_synthesis(int n_phys) const;
  /// Analysis matrix (n_theta x n_phys): adjoint of synthesis divided by n_phys.
  const Mat& theta_analysis(int n_phys) const;
  const Mat& z_synthesis(int n_phys) const;
  const Mat& z_analysis(int n_phys) const;

 private:
  int n_r_, n_theta_, n_z_;
  Real period_;
  RealVec nodes_, weights_, inv_r_;
  RealMat d1_even_, d1_odd_, d2_even_, d2_odd_;
  Mat d1c_even_, d1c_odd_, d2c_even_, d2c_odd_;
  std::map<int, Mat> theta_syn_, theta_ana_, z_syn_, z_ana_;
};

}  // namespace cylstokes
