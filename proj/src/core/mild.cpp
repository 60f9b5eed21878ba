#include "core/mild.hpp"

#include <algorithm>
#include <cmath>

#include "core/diffops.hpp"
#include "core/helmholtz.hpp"
#include "core/norms.hpp"
#include "core/parallel.hpp"

namespace cylstokes {

namespace {

/**
 * Exact integrals of the exponential kernel against a linear chapeau on one
 * interval of width h: i0 = int_0^h e^{-lam (h - s)} ds and i1 the same with
 * the ramp s/h. Series branch keeps full precision through lam h -> 0
 * (including the kernel eigenvalue at lambda0 = 0).
 */
void phi_weights(Complex lam, Real h, Complex* i0, Complex* i1) {
  const Complex x = lam * h;
  if (std::abs(x) < 1e-4) {
    *i0 = h * (1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0 + x * x * x * x / 120.0);
    *i1 = h * (0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0);
    return;
  }
  *i0 = (1.0 - std::exp(-x)) / lam;
  *i1 = (h - *i0) / x;
}

Vec eigen_coefs(const ModeEigen& eig, const Vec& full) {
  const int n_free = static_cast<int>(eig.free_rows.size());
  Vec fp(n_free);
  for (int i = 0; i < n_free; ++i) fp[i] = full[eig.free_rows[i]];
  return eig.basis_inverse * fp;
}

void check_time_grid(const std::vector<Real>& tg, std::size_t n_forcing) {
  require(tg.size() >= 2, "duhamel: need at least two time samples");
  require(n_forcing == tg.size(), "duhamel: forcing count does not match the time grid");
  require(tg.front() == 0.0, "duhamel: time grid must start at zero");
  for (std::size_t i = 0; i + 1 < tg.size(); ++i)
    require(tg[i] < tg[i + 1], "duhamel: time grid must increase strictly");
}

/**
 * Duhamel coefficients for one eigen branch of one mode: marches the path
 * v_{i+1} = e^{-lam h} v_i + F_i i0 + (F_next - F_i) i1 over the sample
 * intervals, clamped at evaluation time t (forcing interpolated there).
 * Columns of `coef` are forcing eigencoefficients per sample; the result
 * column i holds the integral at min(t_grid[i], t).
 */
Mat branch_march(const ModeEigen& eig, Complex shift, const std::vector<Real>& tg,
                 const Mat& coef, Real t_stop) {
  const int nj = static_cast<int>(eig.values.size());
  const int nt = static_cast<int>(tg.size());
  Mat path = Mat::Zero(nj, nt);
  for (int i = 0; i + 1 < nt; ++i) {
    if (tg[i] >= t_stop - 1e-15) {
      for (int k = i + 1; k < nt; ++k) path.col(k) = path.col(i);
      break;
    }
    const Real h_full = tg[i + 1] - tg[i];
    const Real h = std::min(tg[i + 1], t_stop) - tg[i];
    const Real frac = h / h_full;
    for (int j = 0; j < nj; ++j) {
      const Complex lam = eig.values[j] + shift;
      Complex i0, i1;
      phi_weights(lam, h, &i0, &i1);
      const Complex fa = coef(j, i);
      const Complex slope_part = (coef(j, i + 1) - fa) * frac;
      path(j, i + 1) = std::exp(-lam * h) * path(j, i) + fa * i0 + slope_part * i1;
    }
  }
  return path;
}

struct PathOutput {
  std::vector<SpectralField>* fields = nullptr;  // one per time sample
  SpectralField* single = nullptr;               // or one field at t_stop
  int single_column = 0;
};

/// Shared Duhamel driver: integrates the sampled forcing per mode and writes
/// either the whole path or the single state at t_stop.
void duhamel_drive(const SemigroupPlan& plan, const std::vector<Real>& tg,
                   const std::vector<SpectralField>& forcing, Real t_stop, PathOutput out) {
  const SpectralGrid& g = plan.grid();
  const int n = g.n_r();
  const int nt = static_cast<int>(tg.size());
  parallel_for(g.n_theta(), [&](int mi) {
    const ModeEigen& ce = plan.coupled_eigen(mi);
    const ModeEigen& se = plan.scalar_eigen(mi);
    const int ncj = static_cast<int>(ce.values.size());
    const int nsj = static_cast<int>(se.values.size());
    Vec stacked(2 * n);
    for (int ki = 0; ki < g.n_z(); ++ki) {
      const Complex shift(g.xi(ki) * g.xi(ki) + plan.lambda0(), 0.0);
      Mat coef_c(ncj, nt), coef_s(nsj, nt);
      for (int i = 0; i < nt; ++i) {
        stacked.head(n) = forcing[i].profile(0, mi, ki);
        stacked.tail(n) = forcing[i].profile(1, mi, ki);
        coef_c.col(i) = eigen_coefs(ce, stacked);
        coef_s.col(i) = eigen_coefs(se, Vec(forcing[i].profile(2, mi, ki)));
      }
      const Mat path_c = branch_march(ce, shift, tg, coef_c, t_stop);
      const Mat path_s = branch_march(se, shift, tg, coef_s, t_stop);
      auto write = [&](SpectralField& dst, int col) {
        const Vec full_h = complete_with_bc(ce, ce.basis * path_c.col(col));
        dst.profile(0, mi, ki) = full_h.head(n);
        dst.profile(1, mi, ki) = full_h.tail(n);
        dst.profile(2, mi, ki) = complete_with_bc(se, se.basis * path_s.col(col));
      };
      if (out.fields) {
        for (int i = 0; i < nt; ++i) write((*out.fields)[i], i);
      } else {
        write(*out.single, out.single_column);
      }
    }
  });
}

std::vector<SpectralField> duhamel_grid(const SemigroupPlan& plan, const std::vector<Real>& tg,
                                        const std::vector<SpectralField>& forcing) {
  std::vector<SpectralField> out(tg.size(), SpectralField(&plan.grid(), FieldKind::vector3));
  PathOutput sink;
  sink.fields = &out;
  duhamel_drive(plan, tg, forcing, tg.back() + 1.0, sink);
  return out;
}

Real weighted_sup(const std::vector<Real>& tg, const std::vector<SpectralField>& path, Real gamma,
                  Real q) {
  Real sup = 0.0;
  for (std::size_t i = 0; i < tg.size(); ++i)
    if (tg[i] > 0.0) sup = std::max(sup, std::pow(tg[i], gamma) * lp_norm(path[i], q));
  return sup;
}

void check_initial_state(const SpectralField& u0) {
  const Real scale = parseval_l2(u0);
  if (scale == 0.0) return;
  require(parseval_l2(divergence(u0)) <= 1e-6 * scale, "picard: u0 must be solenoidal");
  const SpectralGrid& g = u0.grid();
  const int last = g.boundary_index();
  Real wall = 0.0;
  for (int mi = 0; mi < g.n_theta(); ++mi)
    for (int ki = 0; ki < g.n_z(); ++ki) wall = std::max(wall, std::abs(u0.at(0, mi, ki, last)));
  require(wall <= 1e-8 * linf_size(u0), "picard: u0 must be tangential at the wall");
}

}  // namespace

SpectralField nonlinear_term(const SpectralField& u) {
  require(u.kind() == FieldKind::vector3, "nonlinear term: vector3 input required");
  const Real scale = parseval_l2(u);
  if (scale > 0.0) {
    require(parseval_l2(divergence(u)) <= 1e-6 * scale,
            "nonlinear term: input must be solenoidal (divergence form mismatch)");
  }
  const PhysicalField phys = to_physical(u, true);
  PhysicalField prod;
  prod.components = 9;
  prod.n_theta = phys.n_theta;
  prod.n_z = phys.n_z;
  prod.n_r = phys.n_r;
  prod.data.assign(static_cast<std::size_t>(9) * phys.n_theta * phys.n_z * phys.n_r, 0.0);
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col)
      for (int j = 0; j < phys.n_theta; ++j)
        for (int l = 0; l < phys.n_z; ++l)
          for (int i = 0; i < phys.n_r; ++i)
            prod.at(3 * row + col, j, l, i) = phys.at(row, j, l, i) * phys.at(col, j, l, i);
  const SpectralField tensor = from_physical(prod, u.grid_ptr(), FieldKind::tensor9);
  return project_p(divergence(tensor));
}

std::vector<Real> picard_time_grid(Real horizon, int n_time) {
  require(horizon > 0.0, "picard: horizon must be positive");
  require(n_time >= 2, "picard: need at least two time points");
  const Real h = horizon / (n_time - 1);
  std::vector<Real> tg;
  tg.push_back(0.0);
  for (int lvl = 8; lvl >= 1; --lvl) tg.push_back(h / std::pow(2.0, lvl));
  for (int i = 1; i < n_time; ++i) tg.push_back(h * i);
  return tg;
}

SpectralField duhamel(const SemigroupPlan& plan, const std::vector<Real>& time_grid,
                      const std::vector<SpectralField>& forcing, Real t) {
  check_time_grid(time_grid, forcing.size());
  for (const SpectralField& f : forcing) {
    require(f.kind() == FieldKind::vector3, "duhamel: vector3 forcing required");
    require(f.grid_ptr() == &plan.grid(), "duhamel: forcing grid does not match the plan");
  }
  require(t >= 0.0 && t <= time_grid.back() + 1e-14, "duhamel: time outside the sampled grid");
  SpectralField out(&plan.grid(), FieldKind::vector3);
  // March to the last grid point at or before t, then the clamped remainder.
  int col = static_cast<int>(time_grid.size()) - 1;
  while (col > 0 && time_grid[col - 1] >= t) --col;
  PathOutput sink;
  sink.single = &out;
  sink.single_column = col;
  duhamel_drive(plan, time_grid, forcing, t, sink);
  return out;
}

MildSolution picard_solve(const SemigroupPlan& plan, const SpectralField& u0,
                          const PicardConfig& config) {
  const SpectralGrid& g = plan.grid();
  require(u0.kind() == FieldKind::vector3, "picard: vector3 initial state required");
  require(u0.grid_ptr() == &g, "picard: initial state grid does not match the plan");
  require(config.q > 3.0, "picard: auxiliary exponent q must exceed 3");
  require(config.max_iters >= 1, "picard: max_iters must be positive");
  require(config.tol_fixed_point > 0.0, "picard: tolerance must be positive");
  require(config.lambda0 == plan.lambda0(), "picard: plan shift does not match the config");
  check_initial_state(u0);

  MildSolution sol;
  sol.time_grid = picard_time_grid(config.horizon, config.n_time);
  sol.gamma = 1.5 * (1.0 / 3.0 - 1.0 / config.q);
  sol.q = config.q;
  const std::vector<Real>& tg = sol.time_grid;
  const int nt = static_cast<int>(tg.size());

  std::vector<SpectralField> linear;
  linear.reserve(nt);
  for (int i = 0; i < nt; ++i) linear.push_back(plan.apply(tg[i], u0, Generator::stokes));
  sol.states = linear;
  const Real k1 = weighted_sup(tg, sol.states, sol.gamma, sol.q);
  sol.k_history.push_back(k1);
  const Real step_scale = std::max<Real>(k1, 1e-300);

  auto forcing_of = [&](const std::vector<SpectralField>& path) {
    std::vector<SpectralField> forcing;
    forcing.reserve(nt);
    for (int i = 0; i < nt; ++i) {
      SpectralField f = nonlinear_term(path[i]);
      if (config.lambda0 != 0.0) f *= Complex(std::exp(config.lambda0 * tg[i]), 0.0);
      forcing.push_back(std::move(f));
    }
    return forcing;
  };

  for (int iter = 1; iter < config.max_iters; ++iter) {
    const std::vector<SpectralField> integral = duhamel_grid(plan, tg, forcing_of(sol.states));
    std::vector<SpectralField> next = linear;
    Real step = 0.0;
    for (int i = 0; i < nt; ++i) {
      next[i] -= integral[i];
      SpectralField diff = next[i];
      diff -= sol.states[i];
      if (tg[i] > 0.0) step = std::max(step, std::pow(tg[i], sol.gamma) * lp_norm(diff, sol.q));
    }
    sol.states = std::move(next);
    sol.step_history.push_back(step);
    sol.k_history.push_back(weighted_sup(tg, sol.states, sol.gamma, sol.q));
    if (step < config.tol_fixed_point * step_scale) {
      sol.converged = true;
      break;
    }
  }

  // Defect of the integral equation for the returned path.
  const std::vector<SpectralField> check = duhamel_grid(plan, tg, forcing_of(sol.states));
  Real defect = 0.0;
  for (int i = 0; i < nt; ++i) {
    SpectralField r = linear[i];
    r -= check[i];
    r -= sol.states[i];
    if (tg[i] > 0.0) defect = std::max(defect, std::pow(tg[i], sol.gamma) * lp_norm(r, sol.q));
  }
  sol.residual = defect / step_scale;

  if (sol.k_history.size() >= 2 && k1 > 0.0)
    sol.c0_measured = std::max<Real>(0.0, sol.k_history[1] - k1) / (k1 * k1);
  sol.diverging = !sol.converged && sol.c0_measured > 0.0 && k1 > 0.25 / sol.c0_measured;
  return sol;
}

RegularityReport regularity_probe(const MildSolution& solution, Real mu, Real p) {
  require(solution.converged, "regularity probe: converged solution required");
  require(mu > 0.0 && mu < 0.5, "regularity probe: mu must lie in (0, 1/2)");
  require(p >= 1.0, "regularity probe: p must be at least 1");
  const std::vector<Real>& tg = solution.time_grid;
  const Real cutoff = tg.back() / 10.0;

  RegularityReport rep;
  rep.mu = mu;
  rep.p = p;
  for (std::size_t i = 0; i < tg.size(); ++i)
    rep.weighted_gradient.push_back(std::sqrt(tg[i]) *
                                    derivative_seminorm(solution.states[i], p, 1));

  std::vector<int> window;
  for (std::size_t i = 0; i < tg.size(); ++i)
    if (tg[i] >= cutoff - 1e-15) window.push_back(static_cast<int>(i));
  // Cap the pair count: evenly thin the window to at most 12 sample times.
  if (window.size() > 12) {
    std::vector<int> thin;
    for (std::size_t k = 0; k < 12; ++k)
      thin.push_back(window[k * (window.size() - 1) / 11]);
    window = thin;
  }
  ensure(window.size() >= 3, "regularity probe: time grid too sparse away from zero");

  rep.holder_sup.assign(3, 0.0);
  for (std::size_t a = 0; a < window.size(); ++a)
    for (std::size_t b = a + 1; b < window.size(); ++b) {
      const int ia = window[a], ib = window[b];
      SpectralField diff = solution.states[ib];
      diff -= solution.states[ia];
      const Real dt = std::pow(tg[ib] - tg[ia], mu);
      for (int order = 0; order <= 2; ++order)
        rep.holder_sup[order] =
            std::max(rep.holder_sup[order], derivative_seminorm(diff, p, order) / dt);
    }
  rep.bounded = std::isfinite(rep.holder_sup[0]) && std::isfinite(rep.holder_sup[1]) &&
                std::isfinite(rep.holder_sup[2]);
  return rep;
}

}  // namespace cylstokes
