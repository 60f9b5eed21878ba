#pragma once

/**
 * Fractional and imaginary powers of the shifted generators B0 = B + lambda0
 * and A0 = A + lambda0 (positive shift, both invertible).
 *
 * Negative real powers are computed two independent ways: a wedge contour
 * integral of the resolvent (quadrature plus per-mode solves) and the
 * per-mode eigendecomposition (the definition of record). The contour is the
 * pair of rays arg(lambda - a) = +-psi traversed counterclockwise around the
 * spectrum; nodes split into a Gauss head near the vertex, an exponentially
 * graded composite-Gauss body, and a Gauss-Jacobi tail that integrates
 * [s_hi, inf) exactly through w = s_hi / s, so no truncation error remains.
 *
 * Imaginary powers use the eigen route as definition (the contour integrand
 * does not decay for purely imaginary exponents); a contour cross-check is
 * available for the regularized power B0^{is - 1}.
 */

#include <cstdint>
#include <vector>

#include "core/field.hpp"
#include "core/semigroup.hpp"

namespace cylstokes {

struct QuadRule {
  RealVec nodes;
  RealVec weights;
};

/// Gauss-Legendre rule on [-1, 1] (Golub-Welsch route).
QuadRule gauss_legendre(int n);

/// Gauss rule for int_0^1 h(w) w^beta dw, beta > -1, nodes in (0, 1).
QuadRule gauss_power_weight(int n, Real beta);

struct ContourSpec {
  Real a = 0.0;        // vertex shift; 0 resolves to lambda0 / 2
  Real psi = kPi / 4.0;  // ray half-angle in (0, pi/2)
  int n_quad = 200;    // nodes per ray (head + body + tail)
  Real s_lo = 0.0;     // head/body split; 0 resolves to 0.2 (lambda0 - a)
  Real s_hi = 0.0;     // body/tail split; 0 resolves to 8 (lambda0 + max eigenvalue)
};

struct PowerReport {
  Real exponent = 0.0;        // alpha or s
  std::vector<Real> ratios;   // measured norm ratios per sample
  Real sup_ratio = 0.0;
  Real oracle_error = 0.0;    // deviation from the oracle identity of the report
};

/// B0^{-alpha} f by the wedge contour integral, alpha in (0, 1]; stokes
/// projects the input first (the A0 power on the solenoidal range).
SpectralField apply_neg_power(const SemigroupPlan& plan, Real alpha, const SpectralField& f,
                              const ContourSpec& contour, Generator which = Generator::laplace);

/// Eigendecomposition oracle for the same power (definition of record).
SpectralField eigen_neg_power(const SemigroupPlan& plan, Real alpha, const SpectralField& f,
                              Generator which = Generator::laplace);

/// B0^{is} f through the eigen route, principal branch, |s| <= 1.
SpectralField apply_imaginary_power(const SemigroupPlan& plan, Real s, const SpectralField& f);

/// Contour quadrature of the regularized power B0^{is - 1} f (cross-check
/// route; the tail is truncated at s_hi, accurate to ~1/s_hi).
SpectralField contour_imaginary_power(const SemigroupPlan& plan, Real s, const SpectralField& f,
                                      const ContourSpec& contour);

/// Random real field spanned by the lowest `per_mode` eigenfields of every
/// angular/axial mode: band-limited data for norm-ratio probes.
SpectralField band_limited_sample(const SemigroupPlan& plan, int per_mode, std::uint64_t seed,
                                  std::uint64_t stream);

/// |grad B0^{-1/2} g|_p / |g|_p over band-limited samples. oracle_error is
/// the worst deviation of the L2 Dirichlet-form identity
/// |grad u|_2^2 + lambda0 |u|_2^2 + boundary term = |g|_2^2 (the term is
/// nonnegative, so the p = 2 ratio sits at or below one).
PowerReport sqrt_embedding_report(const SemigroupPlan& plan, int samples, Real p,
                                  std::uint64_t seed);

/// A0^{-1/2} P div F through the contour (input projected, then the power
/// applied inside the solenoidal range).
SpectralField pdiv_composite(const SemigroupPlan& plan, const SpectralField& big_f,
                             const ContourSpec& contour);

/// |A0^{-1/2} P div F|_p / |F|_p over random tensor samples via the eigen
/// route; oracle_error cross-checks the contour on the first sample.
PowerReport pdiv_boundedness_report(const SemigroupPlan& plan, int samples, Real p,
                                    std::uint64_t seed);

}  // namespace cylstokes
