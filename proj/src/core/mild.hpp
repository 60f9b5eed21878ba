#pragma once

/**
 * Local-in-time mild solutions of the projected Navier-Stokes equation by
 * Picard iteration: u(t) = e^{-tA} u0 - int_0^t e^{-(t-s)A} P div(u x u) ds.
 *
 * The nonlinear term is formed pseudospectrally on the 3/2-padded grid, so it
 * equals P(u . grad u) for solenoidal u with no aliasing inside the retained
 * band. The Duhamel integral runs per eigencoefficient with exact exponential
 * weights for piecewise-linear-in-time forcing, which integrates the stiff
 * kernel in closed form; the stored time grid refines the first interval
 * geometrically (ratio 2, 8 levels) to resolve early-time variation.
 *
 * The iteration is monitored in the critical weighted norm
 * K = sup_t t^gamma |u(t)|_q with gamma = (3/2)(1/3 - 1/q), and the shifted
 * formulation (lambda0 > 0) evolves v = e^{-lambda0 t} u with the forcing
 * multiplier e^{+lambda0 s} on P div(v x v).
 */

#include <cstdint>
#include <vector>

#include "core/field.hpp"
#include "core/semigroup.hpp"

namespace cylstokes {

struct PicardConfig {
  Real horizon = 0.1;  // T
  int n_time = 33;     // uniform grid points on [0, T] before the geometric prefix
  int max_iters = 20;
  Real tol_fixed_point = 1e-10;  // relative step tolerance in the weighted norm
  Real q = 6.0;                  // auxiliary exponent, q > 3
  Real lambda0 = 0.0;            // shift toggle for the e^{-lambda0 t} formulation
};

struct MildSolution {
  std::vector<Real> time_grid;
  std::vector<SpectralField> states;
  std::vector<Real> k_history;     // K_j per iterate; j = 1 is the linear flow
  std::vector<Real> step_history;  // weighted sup norm of u_{j+1} - u_j
  Real gamma = 0.0;
  Real q = 0.0;
  Real residual = 0.0;     // integral-equation defect of the returned path
  Real c0_measured = 0.0;  // empirical constant of K_{j+1} <= K_1 + C0 K_j^2
  bool converged = false;
  bool diverging = false;  // K_1 beyond the (4 C0)^{-1} smallness heuristic
};

struct RegularityReport {
  Real mu = 0.0;
  Real p = 2.0;
  std::vector<Real> holder_sup;         // Holder quotient sup per order 0..2
  std::vector<Real> weighted_gradient;  // t^{1/2} |grad u(t)|_p per grid time
  bool bounded = false;
};

/// P div(u x u) through the padded physical grid; rejects input whose
/// divergence exceeds 1e-6 relatively (the two nonlinear forms then differ).
SpectralField nonlinear_term(const SpectralField& u);

/// Uniform n_time points on [0, horizon] with the first interval subdivided
/// geometrically (ratio 2, 8 levels).
std::vector<Real> picard_time_grid(Real horizon, int n_time);

/// int_0^t e^{-(t-s)(A + lambda0)} F(s) ds with F piecewise linear between
/// the samples; forcing is used as given (callers supply projected fields).
SpectralField duhamel(const SemigroupPlan& plan, const std::vector<Real>& time_grid,
                      const std::vector<SpectralField>& forcing, Real t);

/// Picard iteration from solenoidal, wall-tangential u0. Non-convergence is
/// reported through the flags and histories, not an exception.
MildSolution picard_solve(const SemigroupPlan& plan, const SpectralField& u0,
                          const PicardConfig& config);

/// Holder quotients |D^k u(t) - D^k u(tau)|_p / |t - tau|^mu for k <= 2 over
/// pairs with t, tau >= T/10, plus the weighted gradient table down to t = 0.
RegularityReport regularity_probe(const MildSolution& solution, Real mu, Real p);

}  // namespace cylstokes
