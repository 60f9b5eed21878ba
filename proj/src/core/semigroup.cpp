#include "core/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "core/diffops.hpp"
#include "core/helmholtz.hpp"
#include "core/norms.hpp"
#include "core/parallel.hpp"

namespace cylstokes {

namespace {

/// Disk-weighted L2 norm of each completed eigenvector (components stacked).
Eigen::VectorXd eigen_l2_norms(const ModeEigen& eig, const SpectralGrid& g, int components) {
  const int nf = static_cast<int>(eig.values.size());
  const int n = g.n_r();
  Eigen::VectorXd out(nf);
  for (int j = 0; j < nf; ++j) {
    const Vec full = complete_with_bc(eig, Vec(eig.basis.col(j)));
    Real sum = 0.0;
    for (int c = 0; c < components; ++c)
      for (int i = 0; i < n; ++i) sum += g.radial_weights()[i] * std::norm(full[c * n + i]);
    out[j] = std::sqrt(sum);
    ensure(out[j] > 0.0, "semigroup: eigenvector with vanishing norm");
  }
  return out;
}

/// Apply a(Lambda) on the eigencoefficients of one full-size mode vector.
Vec apply_eigen_function(const ModeEigen& eig, const std::function<Complex(Complex)>& g,
                         Complex shift, const Vec& full) {
  const int n_free = static_cast<int>(eig.free_rows.size());
  Vec free_part(n_free);
  for (int i = 0; i < n_free; ++i) free_part[i] = full[eig.free_rows[i]];
  Vec a = eig.basis_inverse * free_part;
  for (int j = 0; j < n_free; ++j) a[j] *= g(eig.values[j] + shift);
  return complete_with_bc(eig, eig.basis * a);
}

}  // namespace

SemigroupPlan::SemigroupPlan(const SpectralGrid* grid, Real lambda0)
    : grid_(grid), lambda0_(lambda0) {
  require(lambda0 >= 0.0, "semigroup: lambda0 must be nonnegative");
  const SpectralGrid& g = *grid_;
  modes_.resize(g.n_theta());
  parallel_for(g.n_theta(), [&](int mi) {
    const int m = g.theta_mode(mi);
    modes_[mi].coupled = eigensolve(assemble(OperatorKind::coupled_velocity, m, g));
    modes_[mi].scalar = eigensolve(assemble(OperatorKind::scalar_neumann, m, g));
    modes_[mi].coupled_l2 = eigen_l2_norms(modes_[mi].coupled, g, 2);
    modes_[mi].scalar_l2 = eigen_l2_norms(modes_[mi].scalar, g, 1);
  });

  Real min_positive = kInfinity;
  for (int mi = 0; mi < g.n_theta(); ++mi) {
    max_condition_ = std::max({max_condition_, modes_[mi].coupled.condition,
                               modes_[mi].scalar.condition});
    for (int ki = 0; ki < g.n_z(); ++ki) {
      const Real xi2 = g.xi(ki) * g.xi(ki);
      for (const ModeEigen* eig : {&modes_[mi].coupled, &modes_[mi].scalar}) {
        for (int j = 0; j < eig->values.size(); ++j) {
          const Real lam = eig->values[j].real() + xi2;
          ensure(lam >= -1e-10, "semigroup: negative eigenvalue in the plan");
          max_eigenvalue_ = std::max(max_eigenvalue_, lam);
          if (std::abs(lam) <= 1e-10)
            ++zero_modes_;
          else
            min_positive = std::min(min_positive, lam);
        }
      }
    }
  }
  min_positive_ = min_positive;
  ensure(zero_modes_ == 1, "semigroup: expected exactly one kernel mode");
  if (max_condition_ > 1e6)
    std::fprintf(stderr, "semigroup: eigenbasis condition %.3g above 1e6\n", max_condition_);
}

SpectralField SemigroupPlan::apply_spectral_function(const SpectralField& f,
                                                     const std::function<Complex(Complex)>& g,
                                                     bool project_first) const {
  require(f.kind() == FieldKind::vector3, "semigroup: vector3 input required");
  require(f.grid_ptr() == grid_, "semigroup: field grid does not match the plan");
  const SpectralField* src = &f;
  SpectralField projected(grid_, FieldKind::vector3);
  if (project_first) {
    projected = project_p(f);
    src = &projected;
  }
  const SpectralGrid& gr = *grid_;
  const int n = gr.n_r();
  SpectralField out(grid_, FieldKind::vector3);
  parallel_for(gr.n_theta(), [&](int mi) {
    const ModePair& pair = modes_[mi];
    for (int ki = 0; ki < gr.n_z(); ++ki) {
      const Complex shift(gr.xi(ki) * gr.xi(ki) + lambda0_, 0.0);
      Vec horiz(2 * n);
      horiz.head(n) = src->profile(0, mi, ki);
      horiz.tail(n) = src->profile(1, mi, ki);
      const Vec out_h = apply_eigen_function(pair.coupled, g, shift, horiz);
      out.profile(0, mi, ki) = out_h.head(n);
      out.profile(1, mi, ki) = out_h.tail(n);
      out.profile(2, mi, ki) =
          apply_eigen_function(pair.scalar, g, shift, Vec(src->profile(2, mi, ki)));
    }
  });
  return out;
}

SpectralField SemigroupPlan::apply(Real t, const SpectralField& f, Generator which) const {
  require(t >= 0.0, "semigroup: negative time");
  const bool project = (which == Generator::stokes);
  if (t == 0.0) return project ? project_p(f) : f;
  return apply_spectral_function(
      f, [t](Complex lam) { return std::exp(-t * lam); }, project);
}

SpectralField SemigroupPlan::rough_field(Real s, std::uint64_t seed, std::uint64_t stream,
                                         bool kernel_free, bool fixed_modulus) const {
  const SpectralGrid& g = *grid_;
  const int n = g.n_r();
  SpectralField out(grid_, FieldKind::vector3);
  parallel_for(g.n_theta(), [&](int mi) {
    const ModePair& pair = modes_[mi];
    for (int ki = 0; ki < g.n_z(); ++ki) {
      const CounterRng rng(seed, stream * 65536 + static_cast<std::uint64_t>(mi) * g.n_z() + ki);
      const Real xi2 = g.xi(ki) * g.xi(ki);
      auto draw = [&](int idx) {
        if (!fixed_modulus) return rng.cnormal(idx);
        return std::exp(Complex(0.0, 2.0 * kPi * rng.uniform(idx)));
      };

      const int nc = static_cast<int>(pair.coupled.values.size());
      Vec a(nc);
      for (int j = 0; j < nc; ++j) {
        const Real lam = pair.coupled.values[j].real() + xi2;
        a[j] = draw(j) * std::pow(1.0 + lam, -0.5 * s) / pair.coupled_l2[j];
      }
      const Vec full_h = complete_with_bc(pair.coupled, pair.coupled.basis * a);
      out.profile(0, mi, ki) = full_h.head(n);
      out.profile(1, mi, ki) = full_h.tail(n);

      const int ns = static_cast<int>(pair.scalar.values.size());
      Vec b(ns);
      for (int j = 0; j < ns; ++j) {
        const Real lam = pair.scalar.values[j].real() + xi2;
        b[j] = draw(8192 + j) * std::pow(1.0 + lam, -0.5 * s) / pair.scalar_l2[j];
      }
      out.profile(2, mi, ki) = complete_with_bc(pair.scalar, pair.scalar.basis * b);
    }
  });
  out.make_hermitian();
  if (kernel_free) {
    auto prof = out.profile(2, g.theta_index(0), g.z_index(0));
    Real total = 0.0;
    Complex mean(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
      total += g.radial_weights()[i];
      mean += g.radial_weights()[i] * prof[i];
    }
    prof.array() -= mean / total;
  }
  return out;
}

SpectralField SemigroupPlan::rough_axial_field(Real s, std::uint64_t seed, bool with_mean) const {
  const SpectralGrid& g = *grid_;
  const int n = g.n_r();
  const int mi0 = g.theta_index(0);
  const ModeEigen& eig = modes_[mi0].coupled;
  Vec shape = complete_with_bc(eig, Vec(eig.basis.col(0)));
  int peak = 0;
  for (int i = 1; i < shape.size(); ++i)
    if (std::abs(shape[i]) > std::abs(shape[peak])) peak = i;
  // The lowest m = 0 family is real up to an eigensolver phase; strip it so
  // Hermitian pairing below is exact.
  shape *= std::abs(shape[peak]) / shape[peak];
  for (int i = 0; i < shape.size(); ++i) shape[i] = Complex(shape[i].real(), 0.0);
  const Real mu = eig.values[0].real();

  SpectralField out(grid_, FieldKind::vector3);
  const CounterRng rng(seed, 0x11ad);
  for (int ki = 0; ki < g.n_z(); ++ki) {
    const int k = g.z_mode(ki);
    if (k < 0 || !g.z_in_band(-k)) continue;
    if (k == 0 && !with_mean) continue;
    const Real xi = g.xi(ki);
    const Real lam = mu + xi * xi + lambda0_;
    const Real modulus = std::pow(1.0 + lam, -0.5 * s);
    const Complex c = (k == 0)
                          ? Complex(rng.uniform(ki) < 0.5 ? -modulus : modulus, 0.0)
                          : modulus * std::exp(Complex(0.0, 2.0 * kPi * rng.uniform(ki)));
    out.profile(0, mi0, ki) = c * shape.head(n);
    out.profile(1, mi0, ki) = c * shape.tail(n);
    if (k > 0) {
      const int kneg = g.z_index(-k);
      out.profile(0, mi0, kneg) = std::conj(c) * shape.head(n);
      out.profile(1, mi0, kneg) = std::conj(c) * shape.tail(n);
    }
  }
  return out;
}

std::vector<Real> log_grid(Real lo, Real hi, int n) {
  require(lo > 0.0 && hi > lo && n >= 2, "log_grid: need 0 < lo < hi and n >= 2");
  std::vector<Real> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = lo * std::pow(hi / lo, static_cast<Real>(i) / (n - 1));
  return out;
}

namespace {

/// Least-squares slope of log(quantity) vs log(t) over [begin, end).
void fit_window(DecayReport& report) {
  const int n = report.window_end - report.window_begin;
  ensure(n >= 3, "decay report: fit window is degenerate");
  Real sx = 0.0, sy = 0.0;
  for (int i = report.window_begin; i < report.window_end; ++i) {
    sx += std::log(report.t_grid[i]);
    sy += std::log(report.quantity[i]);
  }
  const Real mx = sx / n, my = sy / n;
  Real sxx = 0.0, sxy = 0.0;
  for (int i = report.window_begin; i < report.window_end; ++i) {
    const Real dx = std::log(report.t_grid[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(report.quantity[i]) - my);
  }
  ensure(sxx > 0.0, "decay report: fit window has no spread");
  report.fitted_exponent = sxy / sxx;
  Real ss = 0.0;
  for (int i = report.window_begin; i < report.window_end; ++i) {
    const Real r = std::log(report.quantity[i]) - my -
                   report.fitted_exponent * (std::log(report.t_grid[i]) - mx);
    ss += r * r;
  }
  report.exponent_stderr = (n > 2) ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
}

struct OccupiedRange {
  Real lambda_max = 0.0;
  Real lambda_min_pos = kInfinity;
};

void append_mode_weights(const ModeEigen& eig, const Vec& full, Real shift,
                         std::vector<Real>& lambdas, std::vector<Real>& weights) {
  const int n_free = static_cast<int>(eig.free_rows.size());
  Vec free_part(n_free);
  for (int i = 0; i < n_free; ++i) free_part[i] = full[eig.free_rows[i]];
  const Vec a = eig.basis_inverse * free_part;
  for (int j = 0; j < n_free; ++j) {
    lambdas.push_back(eig.values[j].real() + shift);
    weights.push_back(std::abs(a[j]));
  }
}

/// Spectral support of the data: eigenvalues carrying at least a 1e-12
/// relative coefficient. Fit windows must track the field, not the grid;
/// otherwise sparse spectra (an axial line, a low band) get windows where
/// their own top modes are unresolved or their floor dominates.
OccupiedRange occupied_range(const SemigroupPlan& plan, const SpectralField& f) {
  const SpectralGrid& g = plan.grid();
  const int n = g.n_r();
  std::vector<Real> lambdas, weights;
  for (int mi = 0; mi < g.n_theta(); ++mi) {
    for (int ki = 0; ki < g.n_z(); ++ki) {
      const Real shift = g.xi(ki) * g.xi(ki) + plan.lambda0();
      Vec horiz(2 * n);
      horiz.head(n) = f.profile(0, mi, ki);
      horiz.tail(n) = f.profile(1, mi, ki);
      append_mode_weights(plan.coupled_eigen(mi), horiz, shift, lambdas, weights);
      append_mode_weights(plan.scalar_eigen(mi), Vec(f.profile(2, mi, ki)), shift, lambdas,
                          weights);
    }
  }
  Real top = 0.0;
  for (Real w : weights) top = std::max(top, w);
  ensure(top > 0.0, "decay report: data has no spectral content");
  OccupiedRange occ;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 1e-12 * top) continue;
    occ.lambda_max = std::max(occ.lambda_max, lambdas[i]);
    if (lambdas[i] > 1e-9) occ.lambda_min_pos = std::min(occ.lambda_min_pos, lambdas[i]);
  }
  ensure(occ.lambda_min_pos < kInfinity, "decay report: data has no positive spectral content");
  return occ;
}

int occupied_modes(const SpectralField& f) {
  const SpectralGrid& g = f.grid();
  const Real floor_value = 1e-13 * std::max<Real>(linf_size(f), 1e-300);
  int count = 0;
  for (int mi = 0; mi < g.n_theta(); ++mi)
    for (int ki = 0; ki < g.n_z(); ++ki) {
      Real top = 0.0;
      for (int c = 0; c < f.components(); ++c)
        for (int i = 0; i < g.n_r(); ++i) top = std::max(top, std::abs(f.at(c, mi, ki, i)));
      if (top > floor_value) ++count;
    }
  return count;
}

DecayReport measure_decay(const SemigroupPlan& plan, const SpectralField& data, Real data_norm,
                          Real q, int derivative_order, Real target_rate,
                          const std::vector<Real>& t_grid) {
  require(!t_grid.empty() && t_grid[0] > 0.0, "decay report: empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    require(t_grid[i] > t_grid[i - 1], "decay report: time grid must be positive increasing");
  // e^{-tA} = e^{-tB} P; project once and evolve inside the invariant subspace.
  const SpectralField evolved = project_p(data);
  // A handful of modes decays as a pure exponential sum; a power-law fit needs
  // spectral breadth (conjugate pairs alone do not count as breadth).
  ensure(occupied_modes(evolved) > 4, "decay report: data too mode-sparse for a power-law fit");
  DecayReport report;
  report.t_grid = t_grid;
  report.target_rate = target_rate;
  const Real scale = std::max<Real>(data_norm, 1e-300);
  for (Real t : t_grid) {
    const SpectralField ut = plan.apply(t, evolved, Generator::laplace);
    const Real value = derivative_seminorm(ut, q, derivative_order);
    report.quantity.push_back(value);
    report.scaled.push_back(value * std::pow(t, -target_rate) / scale);
    report.sup_scaled = std::max(report.sup_scaled, report.scaled.back());
  }
  // Fit window: occupied high modes resolved (t Lambda_max >= 3) and the
  // power law not yet exhausted (t Lambda_min_pos <= 0.3).
  const OccupiedRange occ = occupied_range(plan, evolved);
  const Real lo = 3.0 / occ.lambda_max;
  const Real hi = 0.3 / occ.lambda_min_pos;
  int begin = 0, end = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < lo) begin = static_cast<int>(i) + 1;
    if (t_grid[i] <= hi) end = static_cast<int>(i) + 1;
  }
  ensure(end - begin >= 3, "decay report: fit window is degenerate");
  report.window_begin = begin;
  report.window_end = end;
  for (int i = begin; i < end; ++i)
    ensure(report.quantity[i] > 0.0, "decay report: vanishing quantity in fit window");
  fit_window(report);
  return report;
}

}  // namespace

DecayReport smoothing_report(const SemigroupPlan& plan, const SpectralField& f, Real p, Real q,
                             int derivative_order, const std::vector<Real>& t_grid) {
  require(p > 1.0 && q >= p && q < kInfinity, "smoothing report: need 1 < p <= q < inf");
  require(3.0 * (1.0 / p - 1.0 / q) <= 1.0 + 1e-12,
          "smoothing report: (p, q) outside the smoothing hypothesis");
  require(derivative_order >= 0 && derivative_order <= 2,
          "smoothing report: derivative order must be 0, 1, or 2");
  const Real target =
      -0.5 * derivative_order - 1.5 * (1.0 / p - 1.0 / q);
  return measure_decay(plan, f, lp_norm(f, p), q, derivative_order, target, t_grid);
}

DecayReport pdiv_smoothing_report(const SemigroupPlan& plan, const SpectralField& big_f, Real p,
                                  Real q, const std::vector<Real>& t_grid) {
  require(big_f.kind() == FieldKind::tensor9, "pdiv report: tensor9 input required");
  require(p > 1.0 && q >= p && q < kInfinity, "pdiv report: need 1 < p <= q < inf");
  require(3.0 * (1.0 / p - 1.0 / q) <= 1.0 + 1e-12,
          "pdiv report: (p, q) outside the smoothing hypothesis");
  const Real target = -0.5 - 1.5 * (1.0 / p - 1.0 / q);
  const SpectralField pdiv = project_p(divergence(big_f));
  return measure_decay(plan, pdiv, lp_norm(big_f, p), q, 0, target, t_grid);
}

DecayReport holder_report(const SemigroupPlan& plan, const SpectralField& f, Real t,
                          const std::vector<Real>& rho_grid, Real alpha, Real p) {
  require(alpha > 0.0 && alpha < 1.0, "holder report: alpha must lie in (0,1)");
  require(t > 0.0 && t <= 1.0, "holder report: t must lie in (0, T0], T0 = 1");
  require(!rho_grid.empty(), "holder report: empty rho grid");
  DecayReport report;
  report.t_grid = rho_grid;
  report.target_rate = alpha;
  const Real scale = std::max<Real>(lp_norm(f, p), 1e-300);
  const SpectralField base = plan.apply(t, f, Generator::stokes);
  for (Real rho : rho_grid) {
    require(rho > 0.0 && rho <= 1.0, "holder report: rho must lie in (0, T0], T0 = 1");
    SpectralField diff = plan.apply(rho, base, Generator::stokes);
    diff -= base;
    const Real value = lp_norm(diff, p);
    report.quantity.push_back(value);
    report.scaled.push_back(value * std::pow(t, alpha) / std::pow(rho, alpha) / scale);
    report.sup_scaled = std::max(report.sup_scaled, report.scaled.back());
  }
  report.window_begin = 0;
  report.window_end = static_cast<int>(rho_grid.size());
  bool positive = true;
  for (Real v : report.quantity) positive = positive && v > 0.0;
  if (positive && report.quantity.size() >= 3) fit_window(report);
  return report;
}

}  // namespace cylstokes
