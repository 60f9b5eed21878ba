#include "core/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/diffops.hpp"
#include "core/norms.hpp"
#include "core/parallel.hpp"

namespace cylstokes {

namespace {

struct ModeOps {
  ModeOperator coupled;
  ModeOperator scalar;
};

std::vector<ModeOps> assemble_all(const SpectralGrid& g) {
  std::vector<ModeOps> ops(g.n_theta());
  for (int mi = 0; mi < g.n_theta(); ++mi) {
    const int m = g.theta_mode(mi);
    ops[mi].coupled = assemble(OperatorKind::coupled_velocity, m, g);
    ops[mi].scalar = assemble(OperatorKind::scalar_neumann, m, g);
  }
  return ops;
}

void solve_mode(const ModeOps& ops, const SpectralGrid& g, Complex mu, const SpectralField& f,
                SpectralField& u, int mi, int ki) {
  const int n = g.n_r();
  Vec rhs(2 * n);
  rhs.head(n) = f.profile(0, mi, ki);
  rhs.tail(n) = f.profile(1, mi, ki);
  const Vec vh = resolve(ops.coupled, mu, rhs);
  const Real scale_h = std::max<Real>(rhs.norm(), 1e-300);
  if (solve_residual(ops.coupled, mu, vh, rhs) > 1e-6 * scale_h) {
    ensure(false, "solve_resolvent: spectral collision near mode (m=" +
                      std::to_string(g.theta_mode(mi)) + ", k=" + std::to_string(g.z_mode(ki)) +
                      ")");
  }
  u.profile(0, mi, ki) = vh.head(n);
  u.profile(1, mi, ki) = vh.tail(n);

  const Vec fz = f.profile(2, mi, ki);
  const Vec vz = resolve(ops.scalar, mu, fz);
  const Real scale_z = std::max<Real>(fz.norm(), 1e-300);
  if (solve_residual(ops.scalar, mu, vz, fz) > 1e-6 * scale_z) {
    ensure(false, "solve_resolvent: spectral collision near mode (m=" +
                      std::to_string(g.theta_mode(mi)) + ", k=" + std::to_string(g.z_mode(ki)) +
                      ")");
  }
  u.profile(2, mi, ki) = vz;
}

}  // namespace

SpectralField solve_resolvent(Complex lambda, const SpectralField& f) {
  require(f.kind() == FieldKind::vector3, "solve_resolvent: vector3 input required");
  require(std::abs(lambda) > 1e-13, "solve_resolvent: lambda = 0 hits the axial-constant kernel");
  const SpectralGrid& g = f.grid();
  const auto ops = assemble_all(g);
  SpectralField u(f.grid_ptr(), FieldKind::vector3);
  parallel_for(g.n_theta(), [&](int mi) {
    for (int ki = 0; ki < g.n_z(); ++ki) {
      const Real xi = g.xi(ki);
      solve_mode(ops[mi], g, lambda + xi * xi, f, u, mi, ki);
    }
  });
  return u;
}

ResolventResidual resolvent_residual(Complex lambda, const SpectralField& f,
                                     const SpectralField& u) {
  const SpectralGrid& g = f.grid();
  SpectralField res = laplacian(u);
  res *= Complex(-1.0, 0.0);
  SpectralField lu = u;
  lu *= lambda;
  res += lu;
  res -= f;

  const int last = g.boundary_index();
  ResolventResidual out;
  const Real u_scale = std::max<Real>(parseval_l2(u), 1e-300);
  for (int c = 0; c < 3; ++c)
    for (int mi = 0; mi < g.n_theta(); ++mi)
      for (int ki = 0; ki < g.n_z(); ++ki) res.at(c, mi, ki, last) = Complex(0.0, 0.0);
  out.interior = parseval_l2(res);

  for (int mi = 0; mi < g.n_theta(); ++mi) {
    const int m = g.theta_mode(mi);
    const Mat& dv = g.d1c(vector_parity(m));
    const Mat& ds = g.d1c(scalar_parity(m));
    for (int ki = 0; ki < g.n_z(); ++ki) {
      const Complex wall_r = u.at(0, mi, ki, last);
      const Complex slip =
          (dv.row(last) * Vec(u.profile(1, mi, ki))).value() + u.at(1, mi, ki, last);
      const Complex neum = (ds.row(last) * Vec(u.profile(2, mi, ki))).value();
      out.boundary = std::max(out.boundary, std::abs(wall_r) / u_scale);
      out.boundary = std::max(out.boundary, std::abs(slip) / u_scale);
      out.boundary = std::max(out.boundary, std::abs(neum) / u_scale);
    }
  }
  return out;
}

void remove_kernel_component(SpectralField& f) {
  require(f.kind() == FieldKind::vector3, "remove_kernel_component: vector3 input");
  const SpectralGrid& g = f.grid();
  auto prof = f.profile(2, g.theta_index(0), g.z_index(0));
  Real total = 0.0;
  Complex mean(0.0, 0.0);
  for (int i = 0; i < g.n_r(); ++i) {
    total += g.radial_weights()[i];
    mean += g.radial_weights()[i] * prof[i];
  }
  mean /= total;
  for (int i = 0; i < g.n_r(); ++i) prof[i] -= mean;
}

SectorSweep sector_sweep_3d(const SpectralGrid& g, const CylinderSweepConfig& cfg) {
  require(cfg.theta > kPi / 2.0 && cfg.theta < kPi, "sector_sweep_3d: theta outside (pi/2, pi)");
  require(cfg.n_radii >= 2 && cfg.n_angles >= 1 && cfg.trials >= 1,
          "sector_sweep_3d: degenerate sweep");

  std::vector<SpectralField> trials;
  std::vector<Real> f_norms;
  for (int t = 0; t < cfg.trials; ++t) {
    CounterRng rng(cfg.seed, 8000 + static_cast<std::uint64_t>(t));
    SpectralField f = random_vector_bundle(BundleShape{}, rng).instantiate(g);
    if (cfg.kernel_free) remove_kernel_component(f);
    f_norms.push_back(lp_norm(f, cfg.p));
    trials.push_back(std::move(f));
  }

  const auto ops = assemble_all(g);
  SectorSweep sweep;
  sweep.theta = cfg.theta;
  sweep.p = cfg.p;

  const Real spread = cfg.theta - 0.05;
  for (int ir = 0; ir < cfg.n_radii; ++ir) {
    const Real frac = static_cast<Real>(ir) / static_cast<Real>(cfg.n_radii - 1);
    const Real rho = cfg.radius_min * std::pow(cfg.radius_max / cfg.radius_min, frac);
    for (int ia = 0; ia < cfg.n_angles; ++ia) {
      const Real phi = cfg.n_angles == 1
                           ? 0.0
                           : spread * (2.0 * ia / static_cast<Real>(cfg.n_angles - 1) - 1.0);
      const Complex lambda = rho * Complex(std::cos(phi), std::sin(phi));
      SweepRow row;
      row.lambda = lambda;
      for (int t = 0; t < cfg.trials; ++t) {
        SpectralField u(&g, FieldKind::vector3);
        parallel_for(g.n_theta(), [&](int mi) {
          for (int ki = 0; ki < g.n_z(); ++ki) {
            const Real xi = g.xi(ki);
            solve_mode(ops[mi], g, lambda + xi * xi, trials[t], u, mi, ki);
          }
        });
        const Real fn = std::max<Real>(f_norms[t], 1e-300);
        row.ratio0 = std::max(row.ratio0, std::abs(lambda) * lp_norm(u, cfg.p) / fn);
        row.ratio_half = std::max(
            row.ratio_half, std::sqrt(std::abs(lambda)) * derivative_seminorm(u, cfg.p, 1) / fn);
        row.ratio_two = std::max(row.ratio_two, derivative_seminorm(u, cfg.p, 2) / fn);
      }
      sweep.rows.push_back(row);
      sweep.sup0 = std::max(sweep.sup0, row.ratio0);
      sweep.sup_half = std::max(sweep.sup_half, row.ratio_half);
      sweep.sup_two = std::max(sweep.sup_two, row.ratio_two);
    }
  }
  return sweep;
}

Real scalar_symbol_bound(Complex lambda, Real xi, Real theta) {
  require(std::abs(lambda) > 0.0, "scalar_symbol_bound: lambda = 0");
  require(std::abs(std::arg(lambda)) < theta, "scalar_symbol_bound: lambda outside the sector");
  const Real value = std::abs(lambda) / std::abs(lambda + xi * xi);
  const Real cap = std::max<Real>(1.0, 1.0 / std::abs(std::sin(theta)));
  ensure(value <= cap * (1.0 + 1e-12), "scalar_symbol_bound: sector bound violated");
  return value;
}

}  // namespace cylstokes
