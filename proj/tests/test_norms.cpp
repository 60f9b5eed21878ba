#include <cmath>

#include "core/diffops.hpp"
#include "core/norms.hpp"
#include "core/polytools.hpp"
#include "doctest.h"
#include "support/quadrature_oracle.hpp"

using namespace cylstokes;

TEST_CASE("norm of a constant axial field is |c| (pi L)^{1/p}") {
  const Real L = 2.0 * kPi;
  SpectralGrid g(12, 8, 8, L);
  SpectralField u(&g, FieldKind::vector3);
  const Real c = 1.75;
  for (int i = 0; i < g.n_r(); ++i) u.at(2, g.theta_index(0), g.z_index(0), i) = c;
  const Real vol = kPi * L;
  CHECK(lp_norm(u, 2.0) == doctest::Approx(c * std::pow(vol, 0.5)).epsilon(1e-12));
  CHECK(lp_norm(u, 3.0) == doctest::Approx(c * std::pow(vol, 1.0 / 3.0)).epsilon(1e-12));
  CHECK(lp_norm(u, kInfinity) == doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("parseval route agrees with quadrature L2") {
  SpectralGrid g(16, 12, 12, 4.0 * kPi);
  CounterRng rng(9, 31);
  const SpectralField f = random_vector_bundle(BundleShape{}, rng).instantiate(g);
  const Real a = lp_norm(f, 2.0);
  const Real b = parseval_l2(f);
  CHECK(std::abs(a - b) < 1e-12 * std::max<Real>(1.0, b));
  const Complex self = inner_product(f, f);
  CHECK(std::abs(std::sqrt(self.real()) - b) < 1e-12 * std::max<Real>(1.0, b));
  CHECK(std::abs(self.imag()) < 1e-12 * self.real());
}

TEST_CASE("first derivative seminorm against the adaptive oracle") {
  // f = 2 Re[(r^2 - r^4) e^{i(2 theta + z)}] on L = 2 pi:
  // ||grad f||_2^2 = 2 (2 pi L) int (|p'|^2 + (m^2/r^2 + xi^2) |p|^2) r dr.
  const Real L = 2.0 * kPi;
  SpectralGrid g(20, 12, 8, L);
  SpectralField f(&g, FieldKind::scalar);
  for (int i = 0; i < g.n_r(); ++i) {
    const Real r = g.radial_nodes()[i];
    const Real p = r * r - r * r * r * r;
    f.at(0, g.theta_index(2), g.z_index(1), i) = p;
    f.at(0, g.theta_index(-2), g.z_index(-1), i) = p;
  }
  const Real ref2 = 2.0 * (2.0 * kPi * L) *
                    oracle::integrate(
                        [](double r) {
                          const double p = r * r - r * r * r * r;
                          const double dp = 2.0 * r - 4.0 * r * r * r;
                          return (dp * dp + (4.0 / (r * r) + 1.0) * p * p) * r;
                        },
                        1e-12, 1.0);
  CHECK(derivative_seminorm(f, 2.0, 1) == doctest::Approx(std::sqrt(ref2)).epsilon(1e-10));

  // Same number through the explicit gradient field.
  CHECK(lp_norm(gradient(f), 2.0) == doctest::Approx(std::sqrt(ref2)).epsilon(1e-10));
}

TEST_CASE("sobolev norms are monotone in the order") {
  SpectralGrid g(16, 12, 12, 2.0 * kPi);
  CounterRng rng(14, 41);
  const SpectralField f = random_scalar_bundle(BundleShape{}, rng).instantiate(g);
  const Real n0 = lp_norm(f, 2.0, 0);
  const Real n1 = lp_norm(f, 2.0, 1);
  const Real n2 = lp_norm(f, 2.0, 2);
  CHECK(n1 >= n0);
  CHECK(n2 >= n1);
  CHECK(lp_norm(f, kInfinity, 0) >= 0.0);
}

TEST_CASE("lp norms are stable under radial refinement") {
  CounterRng rng(15, 43);
  const AnalyticBundle b = random_vector_bundle(BundleShape{}, rng);
  SpectralGrid coarse(16, 12, 12, 2.0 * kPi);
  SpectralGrid fine(32, 12, 12, 2.0 * kPi);
  const SpectralField fc = b.instantiate(coarse);
  const SpectralField ff = b.instantiate(fine);
  for (Real p : {2.0, 4.0}) {
    const Real a = lp_norm(fc, p);
    const Real c = lp_norm(ff, p);
    CHECK(std::abs(a - c) < 1e-10 * std::max<Real>(1.0, c));
  }
  // The sup norm scans physical samples, so refinement can move it slightly;
  // demand agreement at the level of the sampling density instead.
  const Real ia = lp_norm(fc, kInfinity);
  const Real ic = lp_norm(ff, kInfinity);
  CHECK(std::abs(ia - ic) < 2e-2 * std::max<Real>(1.0, ic));
}
