#include <cmath>
#include <complex>

#include "core/field.hpp"
#include "core/polytools.hpp"
#include "doctest.h"

using namespace cylstokes;

TEST_CASE("component parity table") {
  CHECK(component_parity(FieldKind::scalar, 0, 0) == Parity::even);
  CHECK(component_parity(FieldKind::scalar, 0, 1) == Parity::odd);
  CHECK(component_parity(FieldKind::scalar, 0, -2) == Parity::even);
  // vector (u^r, u^theta) flip relative to the scalar rule; u^z follows it.
  CHECK(component_parity(FieldKind::vector3, 0, 0) == Parity::odd);
  CHECK(component_parity(FieldKind::vector3, 1, 0) == Parity::odd);
  CHECK(component_parity(FieldKind::vector3, 2, 0) == Parity::even);
  CHECK(component_parity(FieldKind::vector3, 0, 1) == Parity::even);
  // tensor entries count horizontal indices: rr even at m=0, rz odd, zz even.
  CHECK(component_parity(FieldKind::tensor9, 0, 0) == Parity::even);
  CHECK(component_parity(FieldKind::tensor9, 2, 0) == Parity::odd);
  CHECK(component_parity(FieldKind::tensor9, 8, 0) == Parity::even);
}

TEST_CASE("synthesis convention: Re sum of p(r) exp(i(m theta + k 2 pi z / L))") {
  SpectralGrid g(8, 8, 8, 4.0 * kPi);
  AnalyticBundle b;
  b.kind = FieldKind::scalar;
  const Poly p = {Complex(0, 0), Complex(0, 0), Complex(0.7, -0.3)};  // (0.7 - 0.3 i) r^2
  b.terms.push_back({0, 2, 1, p});
  b.terms.push_back({0, -2, -1, poly_conj(p)});
  const SpectralField f = b.instantiate(g);
  CHECK(f.hermitian_error() < 1e-14);
  const PhysicalField phys = to_physical(f);
  const int j = 3, l = 5, i = 2;
  const Real theta = 2.0 * kPi * j / 8.0;
  const Real z = (4.0 * kPi) * l / 8.0;
  const Real r = g.radial_nodes()[i];
  const Complex expect_c =
      Complex(0.7, -0.3) * r * r * std::exp(Complex(0.0, 2.0 * theta + 0.5 * z));
  CHECK(phys.at(0, j, l, i) == doctest::Approx(2.0 * expect_c.real()).epsilon(1e-12));
}

TEST_CASE("transform round trip on random bundles") {
  SpectralGrid g(12, 12, 12, 2.0 * kPi);
  for (int kindcase = 0; kindcase < 3; ++kindcase) {
    CounterRng rng(11, 100 + kindcase);
    BundleShape shape;
    AnalyticBundle b;
    if (kindcase == 0) b = random_scalar_bundle(shape, rng);
    if (kindcase == 1) b = random_vector_bundle(shape, rng);
    if (kindcase == 2) b = random_tensor_bundle(shape, rng);
    const SpectralField f = b.instantiate(g);
    CHECK(f.hermitian_error() < 1e-13);
    CHECK(linf_size(f) > 1e-3);

    const SpectralField back = from_physical(to_physical(f), &g, f.kind());
    CHECK(linf_distance(f, back) < 1e-12 * std::max<Real>(1.0, linf_size(f)));

    // The padded grid oversamples; analysis still recovers the band exactly.
    const SpectralField back_pad = from_physical(to_physical(f, true), &g, f.kind());
    CHECK(linf_distance(f, back_pad) < 1e-12 * std::max<Real>(1.0, linf_size(f)));
  }
}

TEST_CASE("bundle instantiation is grid independent as a continuum object") {
  CounterRng rng(5, 7);
  const AnalyticBundle b = random_vector_bundle(BundleShape{}, rng);
  SpectralGrid coarse(10, 8, 8, 2.0 * kPi);
  SpectralGrid fine(24, 16, 16, 2.0 * kPi);
  const SpectralField fc = b.instantiate(coarse);
  const SpectralField ff = b.instantiate(fine);
  // Compare the common mode (1, 1) profile at the shared boundary node r = 1.
  const int cc = 1;
  const Complex vc = fc.at(cc, coarse.theta_index(1), coarse.z_index(1), coarse.boundary_index());
  const Complex vf = ff.at(cc, fine.theta_index(1), fine.z_index(1), fine.boundary_index());
  CHECK(std::abs(vc - vf) < 1e-13);
}

TEST_CASE("pole regularity: bundle terms carry only powers of the declared parity") {
  CounterRng rng(3, 9);
  const AnalyticBundle b = random_tensor_bundle(BundleShape{}, rng);
  REQUIRE(!b.terms.empty());
  for (const auto& t : b.terms) {
    const Parity par = component_parity(FieldKind::tensor9, t.c, t.m);
    for (std::size_t j = 0; j < t.poly.size(); ++j) {
      if (std::abs(t.poly[j]) == 0.0) continue;
      const bool odd_power = (j % 2) == 1;
      CHECK(((par == Parity::odd) == odd_power));
    }
  }
}
