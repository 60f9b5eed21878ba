#pragma once

/**
 * Analytic semigroups e^{-tB0} and e^{-tA0} via cached per-mode
 * eigendecompositions, plus the decay reports verifying the smoothing
 * estimates.
 *
 * B is the vector Laplacian under the wall conditions, A its restriction to
 * solenoidal fields (input projected, the subspace is invariant); B0 = B +
 * lambda0. Per mode (m,k) the generator splits into the coupled pair and the
 * scalar branch, and any spectral function g acts as g(mu_j + xi_k^2 +
 * lambda0) on eigencoefficients. t = 0 returns the input unchanged (after the
 * projection for A).
 */

#include <functional>
#include <vector>

#include "core/disk_ops.hpp"
#include "core/field.hpp"

namespace cylstokes {

enum class Generator { laplace, stokes };

class SemigroupPlan {
 public:
  SemigroupPlan(const SpectralGrid* grid, Real lambda0 = 0.0);

  const SpectralGrid& grid() const { return *grid_; }
  Real lambda0() const { return lambda0_; }

  /// Extremes of the unshifted spectrum Re(mu) + xi^2 over all modes.
  Real max_eigenvalue() const { return max_eigenvalue_; }
  Real min_positive_eigenvalue() const { return min_positive_; }
  Real max_condition() const { return max_condition_; }
  int zero_mode_count() const { return zero_modes_; }

  const ModeEigen& coupled_eigen(int mi) const { return modes_[mi].coupled; }
  const ModeEigen& scalar_eigen(int mi) const { return modes_[mi].scalar; }

  /// Apply g(Lambda) per mode, Lambda = mu_j + xi_k^2 + lambda0 (shifted).
  SpectralField apply_spectral_function(const SpectralField& f,
                                        const std::function<Complex(Complex)>& g,
                                        bool project_first) const;

  /// e^{-t (generator + lambda0)}; stokes projects the input first.
  SpectralField apply(Real t, const SpectralField& f, Generator which) const;

  /**
   * Random real field with eigencoefficient variance (1 + Lambda)^{-s}
   * (unshifted Lambda) on unit-norm eigenfields; small s = rough data for
   * power-law decay fits. kernel_free removes the axial-constant kernel
   * direction. fixed_modulus draws random phases only, which pins the
   * realized spectral measure to the density of states (chi-squared weight
   * noise on the sparse low end otherwise swings fitted exponents).
   */
  SpectralField rough_field(Real s, std::uint64_t seed, std::uint64_t stream,
                            bool kernel_free = true, bool fixed_modulus = false) const;

  /**
   * Random real field carried by the lowest coupled disk eigenfamily at m = 0
   * (an azimuthal, divergence-free profile) replicated across the axial band:
   * coefficient modulus (1 + Lambda)^{-s/2}, random phase. The norm of any
   * spectral function of it is then an exact one-dimensional exponential sum
   * over Lambda = mu_0 + xi^2, which keeps power-law windows wide and free of
   * density crossovers. with_mean = false drops the k = 0 plane.
   */
  SpectralField rough_axial_field(Real s, std::uint64_t seed, bool with_mean = true) const;

 private:
  struct ModePair {
    ModeEigen coupled;
    ModeEigen scalar;
    // Disk-weighted L2 norms of the completed eigenvectors, so random draws
    // can weight unit-norm eigenfields rather than eigensolver scaling.
    Eigen::VectorXd coupled_l2;
    Eigen::VectorXd scalar_l2;
  };

  const SpectralGrid* grid_;
  Real lambda0_;
  std::vector<ModePair> modes_;
  Real max_eigenvalue_ = 0.0;
  Real min_positive_ = 0.0;
  Real max_condition_ = 0.0;
  int zero_modes_ = 0;
};

struct DecayReport {
  std::vector<Real> t_grid;    // times (or the rho grid for the Holder report)
  std::vector<Real> quantity;  // measured norm per grid point
  std::vector<Real> scaled;    // quantity * t^{-target_rate} / data norm
  Real target_rate = 0.0;      // expected exponent of t (negative)
  Real fitted_exponent = 0.0;
  Real exponent_stderr = 0.0;
  Real sup_scaled = 0.0;
  int window_begin = 0;  // fit window [begin, end) into t_grid
  int window_end = 0;
};

/**
 * Decay of |grad^k e^{-tA} f|_q / |f|_p over t_grid; target exponent
 * -k/2 - (3/2)(1/p - 1/q). The log-log fit runs over the window
 * t * Lambda_max >= 3 and t * Lambda_min_pos <= 0.3, with both extremes
 * taken over the eigenvalues the data actually occupies, so the truncated
 * spectrum reproduces the continuum power law there.
 */
DecayReport smoothing_report(const SemigroupPlan& plan, const SpectralField& f, Real p, Real q,
                             int derivative_order, const std::vector<Real>& t_grid);

/// Decay of |e^{-tA} P div F|_q / |F|_p; target -1/2 - (3/2)(1/p - 1/q).
DecayReport pdiv_smoothing_report(const SemigroupPlan& plan, const SpectralField& big_f, Real p,
                                  Real q, const std::vector<Real>& t_grid);

/// Holder ratio |(e^{-rhoA} - 1) e^{-tA} f|_p t^alpha / rho^alpha / |f|_p
/// over rho_grid at fixed t; sup reported in sup_scaled (T0 = 1 throughout).
DecayReport holder_report(const SemigroupPlan& plan, const SpectralField& f, Real t,
                          const std::vector<Real>& rho_grid, Real alpha, Real p = 2.0);

/// Log-spaced grid helper (n points from lo to hi inclusive).
std::vector<Real> log_grid(Real lo, Real hi, int n);

}  // namespace cylstokes
