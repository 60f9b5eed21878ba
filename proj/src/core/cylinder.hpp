#pragma once

/**
 * 3D resolvent solves on the cylinder and sectorial sweep measurements.
 *
 * (lambda - Laplacian) u = f with the wall conditions u^r = 0,
 * d_r u^theta + u^theta = 0, d_r u^z = 0 decouples per (m, k):
 * the horizontal pair solves the coupled disk operator at shift
 * mu = lambda + xi_k^2, the axial component the scalar Neumann operator.
 */

#include <cstdint>
#include <vector>

#include "core/disk_ops.hpp"
#include "core/field.hpp"

namespace cylstokes {

/// Per-mode block solve; throws on spectral collision (reported with (m, k)).
SpectralField solve_resolvent(Complex lambda, const SpectralField& f);

struct ResolventResidual {
  Real interior = 0.0;  // weighted L2 of lambda u - lap u - f away from bc rows
  Real boundary = 0.0;  // max bc-row violation relative to the solution size
};

ResolventResidual resolvent_residual(Complex lambda, const SpectralField& f,
                                     const SpectralField& u);

struct SweepRow {
  Complex lambda;
  Real ratio0 = 0.0;
  Real ratio_half = 0.0;
  Real ratio_two = 0.0;
};

struct SectorSweep {
  Real theta = 0.0;
  Real p = 2.0;
  std::vector<SweepRow> rows;
  Real sup0 = 0.0;
  Real sup_half = 0.0;
  Real sup_two = 0.0;
};

struct CylinderSweepConfig {
  Real theta = 3.0 * kPi / 4.0;
  Real p = 2.0;
  Real radius_min = 1e-3;
  Real radius_max = 1e4;
  int n_radii = 40;
  int n_angles = 5;
  int trials = 8;
  std::uint64_t seed = 1;
  bool kernel_free = true;  // remove the axial-constant component of f
};

SectorSweep sector_sweep_3d(const SpectralGrid& g, const CylinderSweepConfig& cfg);

/// |lambda| / |lambda + xi^2| with the sector assertion <= max(1, 1/|sin theta|).
Real scalar_symbol_bound(Complex lambda, Real xi, Real theta);

/// Remove the kernel direction: the radial mean of the (0,0) axial component.
void remove_kernel_component(SpectralField& f);

}  // namespace cylstokes
