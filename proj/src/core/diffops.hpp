#pragma once

/**
 * Spectral differential operators on cylinder fields.
 *
 * Per (m, k) mode everything reduces to dense radial matrix action: the folded
 * first derivative for the profile's parity, diagonal 1/r, i*m and i*xi_k
 * factors. The cylindrical-frame gradient of a vector includes the frame terms
 * (the theta column carries (d_theta u - coupling)/r); divergence of a tensor
 * contracts the second index.
 *
 * Cartesian derivatives are realized by spin raising/lowering: a scalar profile
 * f at angular order mu maps under d_x +- i d_y to (f' -+ mu f / r) at order
 * mu +- 1. Repeated Cartesian derivative stacks built this way give frame
 * invariant pointwise magnitudes for Sobolev seminorms of any order.
 */

#include <vector>

#include "core/field.hpp"

namespace cylstokes {

/// Gradient: scalar -> vector3, vector3 -> tensor9 (cylindrical frame).
SpectralField gradient(const SpectralField& f);

/// Divergence: vector3 -> scalar, tensor9 -> vector3 (second index contracted).
SpectralField divergence(const SpectralField& f);

/// Curl of a vector3 field.
SpectralField curl(const SpectralField& f);

/// Componentwise vector Laplacian (scalar or vector3), the negative of the
/// interior operator realized by the mode matrices.
SpectralField laplacian(const SpectralField& f);

/**
 * Cartesian scalar components of a field as complex scalar fields on the same
 * grid: 1 entry for a scalar, (u_x, u_y, u_z) for vector3. A Cartesian
 * component is itself a smooth scalar, so its mode-m profile keeps the plain
 * scalar parity and further derivatives need no extra bookkeeping.
 */
std::vector<SpectralField> cartesian_scalars(const SpectralField& f);

/// Apply {d_x, d_y, d_z} to each stack entry, tripling the stack.
std::vector<SpectralField> cartesian_derivatives(const std::vector<SpectralField>& stack);

/// Pointwise sum of squared magnitudes over components of one field, sampled
/// physically (complex synthesis, valid for non-Hermitian entries).
void accumulate_magnitude_squared(const SpectralField& f, bool padded, std::vector<Real>& acc);

}  // namespace cylstokes
