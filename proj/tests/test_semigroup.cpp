// Semigroup plan: eigenfield decay, smoothing-rate fits, Holder continuity.

#include <cmath>
#include <complex>
#include <vector>

#include "core/cylinder.hpp"
#include "core/diffops.hpp"
#include "core/disk_ops.hpp"
#include "core/field.hpp"
#include "core/helmholtz.hpp"
#include "core/norms.hpp"
#include "core/rng.hpp"
#include "core/semigroup.hpp"
#include "doctest.h"

using namespace cylstokes;

namespace {

SpectralField random_bundle(const SpectralGrid& g, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  return random_vector_bundle(BundleShape{}, rng).instantiate(g);
}

// Single eigenfield of the per-mode generator at azimuthal m, axial k,
// eigenvalue index j; reports the full eigenvalue mu_j + xi^2.
SpectralField eigenfield(const SemigroupPlan& plan, bool coupled, int m, int k, int j,
                         Complex* lambda_out) {
  const SpectralGrid& g = plan.grid();
  const int mi = g.theta_index(m), ki = g.z_index(k);
  const ModeEigen& eig = coupled ? plan.coupled_eigen(mi) : plan.scalar_eigen(mi);
  const Vec full = complete_with_bc(eig, Vec(eig.basis.col(j)));
  SpectralField u(&g, FieldKind::vector3);
  const int n = g.n_r();
  if (coupled) {
    u.profile(0, mi, ki) = full.head(n);
    u.profile(1, mi, ki) = full.tail(n);
  } else {
    u.profile(2, mi, ki) = full;
  }
  const Real xi = g.xi(ki);
  *lambda_out = eig.values[j] + Complex(xi * xi + plan.lambda0(), 0.0);
  return u;
}

SpectralField axial_kernel_field(const SpectralGrid& g) {
  SpectralField ez(&g, FieldKind::vector3);
  ez.profile(2, g.theta_index(0), g.z_index(0)).setConstant(Complex(1.0, 0.0));
  return ez;
}

Real window_decades(const DecayReport& rep) {
  return std::log10(rep.t_grid[rep.window_end - 1] / rep.t_grid[rep.window_begin]);
}

}  // namespace

TEST_CASE("plan summarizes the generator spectrum") {
  SpectralGrid g(16, 12, 12, 2.0 * kPi);
  SemigroupPlan plan(&g);

  CHECK(plan.zero_mode_count() == 1);
  // Smallest positive eigenvalue: the axial-constant family shifted by xi^2
  // at |k| = 1 (period 2 pi makes that shift exactly one).
  CHECK(plan.min_positive_eigenvalue() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(plan.max_eigenvalue() > 1e3);
  CHECK(plan.max_condition() < 1e4);
  // Lowest coupled disk eigenvalue at m = 0: azimuthal branch, j_{0,1}^2.
  CHECK(plan.coupled_eigen(g.theta_index(0)).values[0].real() ==
        doctest::Approx(5.783185962946785).epsilon(1e-10));

  CHECK_THROWS_AS(SemigroupPlan(&g, -0.5), std::invalid_argument);
}

TEST_CASE("eigenfields decay at their exact exponential rate") {
  SpectralGrid g(16, 12, 12, 2.0 * kPi);
  SemigroupPlan plan(&g);

  SUBCASE("coupled velocity family") {
    Complex lam;
    const SpectralField u = eigenfield(plan, true, 1, 2, 2, &lam);
    const Real t = 0.37;
    const SpectralField v = plan.apply(t, u, Generator::laplace);
    SpectralField w = u;
    w *= std::exp(-t * lam);
    CHECK(linf_distance(v, w) <= 1e-11 * linf_size(u));
  }

  SUBCASE("axial scalar family") {
    Complex lam;
    const SpectralField u = eigenfield(plan, false, 2, 1, 1, &lam);
    const Real t = 0.51;
    const SpectralField v = plan.apply(t, u, Generator::laplace);
    SpectralField w = u;
    w *= std::exp(-t * lam);
    CHECK(linf_distance(v, w) <= 1e-11 * linf_size(u));
  }

  SUBCASE("solenoidal family survives the projection inside the Stokes flow") {
    Complex lam;
    const SpectralField u = eigenfield(plan, true, 0, 3, 0, &lam);
    // The lowest m = 0 coupled family is azimuthal, hence divergence free.
    CHECK(linf_size(divergence(u)) <= 1e-13 * linf_size(u));
    const Real t = 0.21;
    const SpectralField v = plan.apply(t, u, Generator::stokes);
    SpectralField w = u;
    w *= std::exp(-t * lam);
    CHECK(linf_distance(v, w) <= 1e-11 * linf_size(u));
  }

  SUBCASE("axial-constant kernel field is invariant") {
    const SpectralField ez = axial_kernel_field(g);
    const SpectralField v = plan.apply(0.7, ez, Generator::stokes);
    CHECK(linf_distance(v, ez) <= 1e-12);
  }
}

TEST_CASE("time zero reproduces the data and bad arguments throw") {
  SpectralGrid g(16, 12, 12, 2.0 * kPi);
  SemigroupPlan plan(&g);
  const SpectralField f = random_bundle(g, 21, 3);

  SpectralField a = plan.apply(0.0, f, Generator::laplace);
  a -= f;
  CHECK(linf_size(a) == 0.0);

  SpectralField b = plan.apply(0.0, f, Generator::stokes);
  const SpectralField pf = project_p(f);
  b -= pf;
  CHECK(linf_size(b) <= 1e-13 * linf_size(pf));

  CHECK_THROWS_AS(plan.apply(-1e-3, f, Generator::laplace), std::invalid_argument);
  SpectralGrid other(12, 8, 8, 2.0 * kPi);
  CHECK_THROWS_AS(plan.apply(0.1, random_bundle(other, 1, 1), Generator::laplace),
                  std::invalid_argument);
  CHECK_THROWS_AS(plan.apply(0.1, SpectralField(&g, FieldKind::scalar), Generator::laplace),
                  std::invalid_argument);
}

TEST_CASE("semigroup law composes to roundoff") {
  SpectralGrid g(16, 12, 12, 2.0 * kPi);
  SemigroupPlan plan(&g);
  const SpectralField f = random_bundle(g, 21, 3);
  const Real scale = parseval_l2(f);

  CounterRng rng(77, 4);
  for (int i = 0; i < 3; ++i) {
    const Real t = 0.02 + 0.9 * rng.uniform(2 * i);
    const Real s = 0.02 + 0.9 * rng.uniform(2 * i + 1);
    for (Generator gen : {Generator::laplace, Generator::stokes}) {
      const SpectralField one = plan.apply(t + s, f, gen);
      SpectralField two = plan.apply(t, plan.apply(s, f, gen), gen);
      two -= one;
      CHECK(parseval_l2(two) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("laplace transform of the flow reproduces the resolvent") {
  SpectralGrid g(12, 8, 8, 2.0 * kPi);
  SemigroupPlan plan(&g);
  const SpectralField f = random_bundle(g, 31, 5);
  const SpectralField u_ref = solve_resolvent(Complex(1.0, 0.0), f);

  // int_0^inf e^{-t} e^{-tB} f dt via composite Simpson on a short head
  // interval plus dyadic intervals out to t ~ 43 (tail below 1e-18).
  SpectralField acc(&g, FieldKind::vector3);
  auto add_simpson = [&](Real a, Real b) {
    const int segments = 32;
    const Real h = (b - a) / segments;
    for (int i = 0; i <= segments; ++i) {
      const Real t = a + h * i;
      Real w = (i == 0 || i == segments) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      w *= h / 3.0 * std::exp(-t);
      SpectralField term = plan.apply(t, f, Generator::laplace);
      term *= Complex(w, 0.0);
      acc += term;
    }
  };
  Real a = 0.0, b = 1e-8;
  for (int j = 0; j <= 32; ++j) {
    add_simpson(a, b);
    a = b;
    b *= 2.0;
  }

  acc -= u_ref;
  CHECK(parseval_l2(acc) <= 1e-6 * parseval_l2(f));
}

TEST_CASE("projection commutes with the heat flow") {
  SpectralGrid g(16, 12, 12, 2.0 * kPi);
  SemigroupPlan plan(&g);
  const SpectralField f = random_bundle(g, 21, 3);
  const Real scale = parseval_l2(f);

  for (Real t : {0.05, 0.7}) {
    const SpectralField pa = project_p(plan.apply(t, f, Generator::laplace));
    SpectralField ap = plan.apply(t, project_p(f), Generator::laplace);
    ap -= pa;
    CHECK(parseval_l2(ap) <= 1e-10 * scale);
  }
}

TEST_CASE("stokes energy decays monotonically") {
  SpectralGrid g(16, 12, 12, 2.0 * kPi);
  SemigroupPlan plan(&g);
  const SpectralField f = plan.rough_field(1.0, 5, 3);

  Real prev = parseval_l2(project_p(f));
  for (Real t : log_grid(1e-4, 2.0, 12)) {
    const Real val = parseval_l2(plan.apply(t, f, Generator::stokes));
    CHECK(val <= prev * (1.0 + 1e-12));
    prev = val;
  }
}

TEST_CASE("axial line data fits the gradient smoothing rate") {
  // Data carried by one disk eigenfamily across a long axial band turns the
  // decay into a one-dimensional exponential sum with a wide power-law window.
  SpectralGrid g(16, 8, 256, kPi);
  SemigroupPlan plan(&g);
  const SpectralField f = plan.rough_axial_field(0.5, 42);

  CHECK(f.hermitian_error() == 0.0);
  CHECK(parseval_l2(divergence(f)) <= 1e-13 * parseval_l2(f));

  const DecayReport rep = smoothing_report(plan, f, 2.0, 2.0, 1, log_grid(5e-5, 0.018, 40));
  CHECK(rep.target_rate == doctest::Approx(-0.5));
  CHECK(std::abs(rep.fitted_exponent + 0.5) <= 0.1);
  CHECK(rep.exponent_stderr <= 0.01);
  CHECK(window_decades(rep) >= 2.0);
  CHECK(rep.sup_scaled > 0.0);
  CHECK(rep.sup_scaled < 10.0);
}

TEST_CASE("tensor data from an axial line fits the half rate") {
  SpectralGrid g(16, 8, 256, kPi);
  SemigroupPlan plan(&g);
  // G with axial-line structure and no mean plane; F = -i/xi G tensor e_z
  // so that div F recovers G exactly.
  const SpectralField gw = plan.rough_axial_field(-0.5, 43, false);
  SpectralField big_f(&g, FieldKind::tensor9);
  const int mi0 = g.theta_index(0);
  for (int ki = 0; ki < g.n_z(); ++ki) {
    const Real xi = g.xi(ki);
    if (xi == 0.0) continue;
    const Complex inv(0.0, -1.0 / xi);
    for (int c = 0; c < 3; ++c) big_f.profile(3 * c + 2, mi0, ki) = inv * Vec(gw.profile(c, mi0, ki));
  }
  CHECK(linf_distance(divergence(big_f), gw) <= 1e-12 * linf_size(gw));

  const DecayReport rep = pdiv_smoothing_report(plan, big_f, 2.0, 2.0, log_grid(5e-5, 0.018, 40));
  CHECK(rep.target_rate == doctest::Approx(-0.5));
  CHECK(std::abs(rep.fitted_exponent + 0.5) <= 0.1);
  CHECK(window_decades(rep) >= 2.0);
}

TEST_CASE("white data fits the p to q smoothing rates") {
  SpectralGrid g(20, 64, 64, kPi);
  SemigroupPlan plan(&g);
  const std::vector<Real> tg = log_grid(2.9e-3, 0.0406, 24);

  SUBCASE("L2 data measured in L6") {
    const SpectralField f = plan.rough_field(0.5, 43, 7, true, true);
    const DecayReport rep = smoothing_report(plan, f, 2.0, 6.0, 0, tg);
    CHECK(rep.target_rate == doctest::Approx(-0.5));
    CHECK(std::abs(rep.fitted_exponent + 0.5) <= 0.1);
  }

  SUBCASE("L3 tensor data through P div measured in L6") {
    const SpectralField gw = plan.rough_field(0.0, 45, 9, true, true);
    SpectralField big_f(&g, FieldKind::tensor9);
    for (int mi = 0; mi < g.n_theta(); ++mi)
      for (int ki = 0; ki < g.n_z(); ++ki) {
        const Real xi = g.xi(ki);
        if (xi == 0.0) continue;
        const Complex inv(0.0, -1.0 / xi);
        for (int c = 0; c < 3; ++c)
          big_f.profile(3 * c + 2, mi, ki) = inv * Vec(gw.profile(c, mi, ki));
      }
    const DecayReport rep = pdiv_smoothing_report(plan, big_f, 3.0, 6.0, tg);
    CHECK(rep.target_rate == doctest::Approx(-0.75));
    CHECK(std::abs(rep.fitted_exponent + 0.75) <= 0.1);
  }
}

TEST_CASE("smooth data stays bounded instead of decaying") {
  SpectralGrid g(16, 12, 12, 2.0 * kPi);
  SemigroupPlan plan(&g);
  const SpectralField f = plan.rough_field(3.0, 45, 11);

  const DecayReport rep = smoothing_report(plan, f, 2.0, 2.0, 0, log_grid(1e-4, 0.3, 30));
  CHECK(std::abs(rep.fitted_exponent) < 0.15);
  // No derivative, p = q: the scaled quantity is |u(t)| / |f| <= 1.
  CHECK(rep.sup_scaled <= 1.0 + 1e-10);
  CHECK(rep.sup_scaled > 0.01);
}

TEST_CASE("degenerate data and bad report arguments are rejected") {
  SpectralGrid g(16, 12, 12, 2.0 * kPi);
  SemigroupPlan plan(&g);
  const SpectralField f = random_bundle(g, 21, 3);
  const std::vector<Real> tg = log_grid(1e-3, 0.3, 12);

  SUBCASE("single-mode tensor data cannot support a power-law fit") {
    SpectralField big_f(&g, FieldKind::tensor9);
    const int mi = g.theta_index(1), ki = g.z_index(2);
    for (int i = 0; i < g.n_r(); ++i) {
      const Real r = g.radial_nodes()[i];
      big_f.at(5, mi, ki, i) = Complex(r * (1.0 - r), 0.0);
    }
    CHECK_THROWS_AS(pdiv_smoothing_report(plan, big_f, 2.0, 2.0, tg), std::runtime_error);
  }

  SUBCASE("exponent and grid preconditions") {
    CHECK_THROWS_AS(smoothing_report(plan, f, 1.0, 2.0, 0, tg), std::invalid_argument);
    CHECK_THROWS_AS(smoothing_report(plan, f, 3.0, 2.0, 0, tg), std::invalid_argument);
    CHECK_THROWS_AS(smoothing_report(plan, f, 2.0, kInfinity, 0, tg), std::invalid_argument);
    CHECK_THROWS_AS(smoothing_report(plan, f, 1.01, 50.0, 0, tg), std::invalid_argument);
    CHECK_THROWS_AS(smoothing_report(plan, f, 2.0, 2.0, 3, tg), std::invalid_argument);
    CHECK_THROWS_AS(smoothing_report(plan, f, 2.0, 2.0, 0, {0.1, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(smoothing_report(plan, f, 2.0, 2.0, 0, {}), std::invalid_argument);
    CHECK_THROWS_AS(pdiv_smoothing_report(plan, f, 2.0, 2.0, tg), std::invalid_argument);
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(log_grid(1e-3, 1.0, 1), std::invalid_argument);
  }

  SUBCASE("holder preconditions") {
    const std::vector<Real> rhos = log_grid(1e-3, 0.2, 8);
    CHECK_THROWS_AS(holder_report(plan, f, 0.25, rhos, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(holder_report(plan, f, 0.25, rhos, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(holder_report(plan, f, 1.5, rhos, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(holder_report(plan, f, 0.25, {2.0}, 0.5), std::invalid_argument);
  }
}

TEST_CASE("holder ratio is bounded and exact on an eigenfield") {
  SpectralGrid g(16, 12, 12, 2.0 * kPi);
  SemigroupPlan plan(&g);

  SUBCASE("rough data keeps the scaled ratio bounded down to rho -> 0") {
    const SpectralField f = plan.rough_field(1.0, 9, 13);
    const DecayReport rep = holder_report(plan, f, 0.25, log_grid(1e-4, 0.25, 20), 0.5);
    CHECK(rep.sup_scaled < 5.0);
    CHECK(rep.sup_scaled > 1e-3);
  }

  SUBCASE("kernel data produces no increment") {
    const SpectralField ez = axial_kernel_field(g);
    const DecayReport rep = holder_report(plan, ez, 0.25, log_grid(1e-4, 0.25, 20), 0.5);
    CHECK(rep.sup_scaled <= 1e-10);
  }

  SUBCASE("single solenoidal eigenfield matches the closed form") {
    Complex clam;
    const SpectralField u = eigenfield(plan, true, 0, 2, 0, &clam);
    const Real lam = clam.real();
    const Real t = 0.3, alpha = 0.3;
    const std::vector<Real> rhos = log_grid(1e-4, 0.2, 15);
    const DecayReport rep = holder_report(plan, u, t, rhos, alpha);
    for (std::size_t i = 0; i < rhos.size(); ++i) {
      const Real expected = std::abs(std::exp(-rhos[i] * lam) - 1.0) * std::exp(-t * lam) *
                            std::pow(t, alpha) / std::pow(rhos[i], alpha);
      CHECK(rep.scaled[i] == doctest::Approx(expected).epsilon(1e-8));
    }
  }
}
