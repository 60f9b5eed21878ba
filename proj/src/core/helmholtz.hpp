#pragma once

/**
 * Helmholtz projection on the cylinder.
 *
 * Q f = grad phi where, per mode (m, k), phi solves the Neumann problem
 * (xi^2 - lap_m) phi = -div f with d_r phi(1) = f^r(1); P f = f - Q f is
 * divergence free and tangential at the wall. The (0,0) mode is the
 * compatible singular Neumann problem, solved mean-pinned.
 */

#include <vector>

#include "core/field.hpp"

namespace cylstokes {

struct HelmholtzResult {
  SpectralField solenoidal_part;  // P f
  SpectralField gradient_part;    // Q f = grad potential
  SpectralField potential;        // scalar phi, mean-pinned at (0,0)
};

HelmholtzResult project(const SpectralField& f);

/// Convenience: the solenoidal part only.
SpectralField project_p(const SpectralField& f);

/**
 * Commutation diagnostics: max over samples of |P B u - B P u|_2 / |u|_2
 * (u assumed to satisfy the boundary rows) and, per lambda, of
 * |P (lambda + B)^{-1} f - (lambda + B)^{-1} P f|_2 / |f|_2 with B = -Laplacian.
 */
struct CommutationReport {
  Real laplace_commutator = 0.0;
  Real resolvent_commutator = 0.0;
};

CommutationReport commutation_check(const std::vector<SpectralField>& u_samples,
                                    const std::vector<Complex>& lambda_samples);

}  // namespace cylstokes
