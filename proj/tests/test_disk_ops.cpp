#include <algorithm>
#include <cmath>
#include <vector>

#include "core/disk_ops.hpp"
#include "doctest.h"
#include "support/bessel_oracle.hpp"

using namespace cylstokes;

TEST_CASE("bessel oracle reproduces frozen literature values") {
  CHECK(std::abs(oracle::bessel_zeros(0, 1)[0] - oracle::kJ01) < 1e-12);
  CHECK(std::abs(oracle::bessel_zeros(1, 1)[0] - oracle::kJ11) < 1e-12);
  CHECK(std::abs(oracle::bessel_zeros(2, 1)[0] - oracle::kJ21) < 1e-12);
  CHECK(std::abs(oracle::bessel_prime_zeros(0, 1)[0] - oracle::kJp01) < 1e-12);
  CHECK(std::abs(oracle::bessel_prime_zeros(1, 1)[0] - oracle::kJp11) < 1e-12);
  CHECK(std::abs(oracle::bessel_prime_zeros(2, 1)[0] - oracle::kJp21) < 1e-12);
}

namespace {

std::vector<double> reference_spectrum(OperatorKind kind, int m, int count) {
  std::vector<double> vals;
  if (kind == OperatorKind::coupled_velocity) {
    for (double z : oracle::bessel_zeros(m, count)) vals.push_back(z * z);
    for (double z : oracle::bessel_prime_zeros(m, count)) vals.push_back(z * z);
  } else {
    if (m == 0) vals.push_back(0.0);
    for (double z : oracle::bessel_prime_zeros(m, count)) vals.push_back(z * z);
  }
  std::sort(vals.begin(), vals.end());
  vals.resize(count);
  return vals;
}

}  // namespace

TEST_CASE("operator spectra match bessel zeros at n_r = 48") {
  SpectralGrid g(48, 8, 8, 2.0 * kPi);
  for (int m : {0, 1, 2, 5}) {
    for (OperatorKind kind : {OperatorKind::coupled_velocity, OperatorKind::scalar_neumann}) {
      const ModeEigen eig = eigensolve(assemble(kind, m, g));
      const auto ref = reference_spectrum(kind, m, 8);
      for (int j = 0; j < 8; ++j) {
        const Complex lam = eig.values[j];
        const double scale = std::max(1.0, ref[j]);
        CHECK(std::abs(lam.real() - ref[j]) / scale < 1e-8);
        CHECK(std::abs(lam.imag()) / scale < 1e-8);
      }
    }
  }
}

TEST_CASE("resolvent solves have tiny residuals and match the eigen route") {
  SpectralGrid g(24, 8, 8, 2.0 * kPi);
  for (int m : {0, 1, 3}) {
    for (OperatorKind kind : {OperatorKind::coupled_velocity, OperatorKind::scalar_neumann}) {
      const ModeOperator op = assemble(kind, m, g);
      const ModeEigen eig = eigensolve(op);
      const bool coupled = kind == OperatorKind::coupled_velocity;
      for (int t = 0; t < 4; ++t) {
        const Vec f = random_mode_profile(g, m, coupled, 77, 400 + t);
        const Complex mu = std::pow(10.0, -2.0 + 2.0 * t) * std::exp(Complex(0.0, 0.6 * t - 0.9));
        Vec rhs = f;
        const Vec v = resolve(op, mu, rhs);
        CHECK(solve_residual(op, mu, v, f) < 1e-9 * std::max<Real>(1.0, f.norm()));
        const Vec w = resolve_by_eigen(eig, mu, f);
        CHECK((v - w).norm() < 1e-8 * std::max<Real>(1.0, v.norm()));
      }
    }
  }
}

TEST_CASE("coupled solves satisfy the slip boundary rows") {
  SpectralGrid g(24, 8, 8, 2.0 * kPi);
  const int n = g.n_r();
  const int last = g.boundary_index();
  for (int m : {0, 2}) {
    const ModeOperator op = assemble(OperatorKind::coupled_velocity, m, g);
    const Vec f = random_mode_profile(g, m, true, 5, 11);
    const Vec v = resolve(op, Complex(0.3, 1.1), f);
    CHECK(std::abs(v[last]) < 1e-10 * v.norm());
    const Vec vtheta = v.segment(n, n);
    const Complex slip = (g.d1c(vector_parity(m)).row(last) * vtheta).value() + vtheta[last];
    CHECK(std::abs(slip) < 1e-8 * std::max<Real>(1.0, vtheta.norm()));
  }
}

TEST_CASE("neumann poisson at m = 0: bordered solve and compatibility gate") {
  SpectralGrid g(24, 8, 8, 2.0 * kPi);
  const ModeOperator op = assemble(OperatorKind::neumann_poisson, 0, g);
  // Compatible datum: -lap phi = f with int f r dr = 0, d_r phi(1) = 0.
  // Take phi = (1 - r^2)^2 / 4: -lap_0 phi = 2 - 4 r^2; mean over r dr is 0.
  const int n = g.n_r();
  Vec f(n), phi_ref(n);
  for (int i = 0; i < n; ++i) {
    const Real r = g.radial_nodes()[i];
    f[i] = 2.0 - 4.0 * r * r;
    phi_ref[i] = (1.0 - r * r) * (1.0 - r * r) / 4.0;
  }
  Vec phi = resolve(op, Complex(0.0, 0.0), f);
  // Solutions agree up to an additive constant; compare after mean removal.
  remove_radial_mean(g, phi);
  Vec ref = phi_ref;
  remove_radial_mean(g, ref);
  CHECK((phi - ref).norm() < 1e-10 * std::max<Real>(1.0, ref.norm()));

  // Incompatible datum must be rejected.
  Vec bad = f;
  bad.array() += 1.0;
  CHECK_THROWS(resolve(op, Complex(0.0, 0.0), bad));

  // Nonzero mu regularizes: no bordered path, no throw.
  CHECK_NOTHROW(resolve(op, Complex(0.5, 0.0), bad));
}

TEST_CASE("sector sweep produces bounded ratios across four decades") {
  SpectralGrid g(20, 8, 8, 2.0 * kPi);
  DiskSweepConfig cfg;
  cfg.kind = OperatorKind::coupled_velocity;
  cfg.m = 1;
  cfg.n_radii = 10;
  cfg.trials = 3;
  cfg.radius_min = 1e-3;
  cfg.radius_max = 1e3;
  const auto samples = sector_sweep_2d(g, cfg);
  CHECK(static_cast<int>(samples.size()) == 10 * 5 * 3);
  for (const auto& s : samples) {
    CHECK(std::isfinite(s.ratio0));
    CHECK(s.ratio0 < 100.0);
    CHECK(s.ratio_half < 100.0);
    CHECK(s.residual < 1e-9);
  }
}

TEST_CASE("disk norms on closed forms") {
  SpectralGrid g(24, 8, 8, 2.0 * kPi);
  // Constant scalar at m = 0: ||1||_{L2(D)} = sqrt(pi), gradient zero.
  Vec one = Vec::Ones(g.n_r());
  const DiskNorms a = disk_norms(g, 0, false, one, 2.0);
  CHECK(a.value == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
  CHECK(a.grad < 1e-12);
  // f = r^2 at m = 0: ||grad f||^2 = 2 pi int 4 r^2 r dr = 2 pi.
  Vec r2(g.n_r());
  for (int i = 0; i < g.n_r(); ++i) r2[i] = g.radial_nodes()[i] * g.radial_nodes()[i];
  const DiskNorms b = disk_norms(g, 0, false, r2, 2.0);
  CHECK(b.grad == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-12));
  // Hessian of r^2 is 2 I, Frobenius magnitude squared 8, integral 8 pi.
  CHECK(b.grad2 == doctest::Approx(std::sqrt(8.0 * kPi)).epsilon(1e-10));
}
