#pragma once

/**
 * Lebesgue and Sobolev norms over one period of the cylinder.
 *
 * Values are quadrature evaluations of (int |.|^p r dr dtheta dz)^(1/p) using
 * the radial weights and the trigonometric grids; p = infinity takes the max
 * over the padded physical grid. Sobolev orders stack repeated Cartesian
 * derivatives, whose pointwise Frobenius magnitude is frame invariant.
 * Reductions run in a fixed serial order for bit reproducibility.
 */

#include <limits>

#include "core/field.hpp"

namespace cylstokes {

constexpr Real kInfinity = std::numeric_limits<Real>::infinity();

struct NormRequest {
  Real p = 2.0;
  int sobolev = 0;
};

/// || grad^order f ||_p as a seminorm (order 0 is the plain L^p norm).
Real derivative_seminorm(const SpectralField& f, Real p, int order);

/// Full W^{k,p} norm: (sum_{j<=k} seminorm_j^p)^(1/p), max over j for p = inf.
Real lp_norm(const SpectralField& f, Real p, int sobolev = 0);

inline Real norm(const SpectralField& f, const NormRequest& req) {
  return lp_norm(f, req.p, req.sobolev);
}

/// r-weighted L^2 inner product via coefficient sums (Parseval route).
Complex inner_product(const SpectralField& a, const SpectralField& b);

/// Coefficient-space L^2 norm, the independent cross-check for quadrature norms.
Real parseval_l2(const SpectralField& f);

}  // namespace cylstokes
