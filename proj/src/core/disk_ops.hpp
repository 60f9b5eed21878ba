#pragma once

/**
 * Dense per-mode radial operators on the unit disk.
 *
 * Three kinds are assembled at angular mode m, all with collocation rows in
 * the interior and boundary-condition rows replacing the collocation row at
 * r = 1 (row bordering):
 *
 *   coupled_velocity: minus the vector Laplacian on the stacked pair
 *     (v^r, v^theta), with the 1/r^2 frame coupling, and the slip rows
 *     v^r(1) = 0, (d_r + 1) v^theta(1) = 0.
 *   scalar_neumann: -(f'' + f'/r - m^2 f / r^2) with d_r f(1) = 0.
 *   neumann_poisson: same matrix, but resolve() treats the m = 0, mu = 0 case
 *     as the compatible Neumann problem: a bordered (Lagrange) solve pins the
 *     r-weighted mean and rejects incompatible data.
 *
 * resolve() solves (mu + op) v = rhs; rhs carries collocation data at every
 * node and the boundary slots are overwritten with the bc data (zero unless
 * given). eigensolve() eliminates bc rows exactly and returns the finite
 * spectrum with eigenvectors completed back to the full grid.
 */

#include <cstdint>
#include <vector>

#include "core/field.hpp"
#include "core/grid.hpp"

namespace cylstokes {

enum class OperatorKind { coupled_velocity, scalar_neumann, neumann_poisson };

const char* operator_kind_name(OperatorKind kind);

struct ModeOperator {
  const SpectralGrid* grid = nullptr;
  OperatorKind kind = OperatorKind::scalar_neumann;
  int m = 0;
  int size = 0;
  Mat matrix;
  std::vector<int> bc_rows;
};

ModeOperator assemble(OperatorKind kind, int m, const SpectralGrid& grid);

/// Solve (mu + op) v = rhs with boundary data in the bc rows.
Vec resolve(const ModeOperator& op, Complex mu, const Vec& rhs, const Vec* bc_data = nullptr);

/// Weighted l2 residual of the non-bc rows of (mu + op) v - rhs.
Real solve_residual(const ModeOperator& op, Complex mu, const Vec& v, const Vec& rhs);

struct ModeEigen {
  Vec values;      // finite eigenvalues, ascending real part
  Mat vectors;     // full-size eigenvectors (size x n_free)
  Mat basis;       // eigenvectors restricted to free rows
  Mat basis_inverse;
  Mat bc_map;      // constrained values = bc_map * free values
  std::vector<int> free_rows;
  std::vector<int> bc_rows;
  Real condition = 0.0;
};

ModeEigen eigensolve(const ModeOperator& op);

/// Resolvent application through the eigenbasis (independent check route).
Vec resolve_by_eigen(const ModeEigen& eig, Complex mu, const Vec& rhs);

/// Reconstruct bc-row values from free values (used by semigroup application).
Vec complete_with_bc(const ModeEigen& eig, const Vec& free_values);

/**
 * Single-mode disk norms: the L^p(D) norm of v(r) e^{i m theta} and its first
 * and second Cartesian derivative seminorms, via spin calculus on profiles.
 * `coupled` treats v as the stacked (v^r, v^theta) pair.
 */
struct DiskNorms {
  Real value = 0.0;
  Real grad = 0.0;
  Real grad2 = 0.0;
};

DiskNorms disk_norms(const SpectralGrid& g, int m, bool coupled, const Vec& v, Real p);

struct ResolventSample {
  OperatorKind kind;
  int m = 0;
  Real p = 2.0;
  Complex mu;
  Real ratio0 = 0.0;     // |mu|    ||v||_p    / ||g||_p
  Real ratio_half = 0.0; // |mu|^.5 ||grad v|| / ||g||_p
  Real ratio_two = 0.0;  //         ||grad2 v||/ ||g||_p
  Real residual = 0.0;
};

struct DiskSweepConfig {
  OperatorKind kind = OperatorKind::scalar_neumann;
  int m = 0;
  Real theta = 3.0 * kPi / 4.0;
  Real p = 2.0;
  Real radius_min = 1e-4;
  Real radius_max = 1e4;
  int n_radii = 40;
  int trials = 8;
  std::uint64_t seed = 1;
};

/// Sector sweep over mu = rho e^{i phi}, phi in {0, +-pi/2, +-(theta - 0.05)}.
std::vector<ResolventSample> sector_sweep_2d(const SpectralGrid& g, const DiskSweepConfig& cfg);

/// Random pole-regular trial profile for one mode (coupled pair when requested).
Vec random_mode_profile(const SpectralGrid& g, int m, bool coupled, std::uint64_t seed,
                        std::uint64_t stream, int degree = 6);

/// Remove the r-weighted mean (scalar kernel direction at m = 0).
void remove_radial_mean(const SpectralGrid& g, Vec& profile);

}  // namespace cylstokes
