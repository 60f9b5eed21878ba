#include "core/disk_ops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/norms.hpp"
#include "core/rng.hpp"

namespace cylstokes {

namespace {

Mat scalar_minus_laplacian(const SpectralGrid& g, int m) {
  const Parity sigma = scalar_parity(m);
  const int n = g.n_r();
  Mat op = -g.d2c(sigma);
  const Mat& d1 = g.d1c(sigma);
  for (int i = 0; i < n; ++i) {
    const Real ir = g.inv_r()[i];
    op.row(i) -= ir * d1.row(i);
    op(i, i) += static_cast<Real>(m) * static_cast<Real>(m) * ir * ir;
  }
  return op;
}

}  // namespace

const char* operator_kind_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::coupled_velocity: return "coupled_velocity";
    case OperatorKind::scalar_neumann: return "scalar_neumann";
    case OperatorKind::neumann_poisson: return "neumann_poisson";
  }
  return "unknown";
}

ModeOperator assemble(OperatorKind kind, int m, const SpectralGrid& grid) {
  ModeOperator op;
  op.grid = &grid;
  op.kind = kind;
  op.m = m;
  const int n = grid.n_r();
  const int last = grid.boundary_index();

  if (kind == OperatorKind::scalar_neumann || kind == OperatorKind::neumann_poisson) {
    op.size = n;
    op.matrix = scalar_minus_laplacian(grid, m);
    op.matrix.row(last) = grid.d1c(scalar_parity(m)).row(last);
    op.bc_rows = {last};
    return op;
  }

  // Coupled (v^r, v^theta) pair: minus vector Laplacian with frame coupling.
  const Parity sigma = vector_parity(m);
  const int nn = 2 * n;
  op.size = nn;
  op.matrix = Mat::Zero(nn, nn);
  Mat diag_block = -grid.d2c(sigma);
  const Mat& d1 = grid.d1c(sigma);
  const Real mm = static_cast<Real>(m);
  for (int i = 0; i < n; ++i) {
    const Real ir = grid.inv_r()[i];
    diag_block.row(i) -= ir * d1.row(i);
    diag_block(i, i) += (mm * mm + 1.0) * ir * ir;
  }
  op.matrix.block(0, 0, n, n) = diag_block;
  op.matrix.block(n, n, n, n) = diag_block;
  for (int i = 0; i < n; ++i) {
    const Real ir2 = grid.inv_r()[i] * grid.inv_r()[i];
    op.matrix(i, n + i) = Complex(0.0, 2.0 * mm) * ir2;
    op.matrix(n + i, i) = Complex(0.0, -2.0 * mm) * ir2;
  }
  // Slip rows: v^r(1) = 0 and (d_r + 1) v^theta(1) = 0.
  op.matrix.row(last).setZero();
  op.matrix(last, last) = Complex(1.0, 0.0);
  op.matrix.row(n + last).setZero();
  op.matrix.block(n + last, n, 1, n) = d1.row(last);
  op.matrix(n + last, n + last) += Complex(1.0, 0.0);
  op.bc_rows = {last, n + last};
  return op;
}

namespace {

bool is_bc_row(const ModeOperator& op, int row) {
  return std::find(op.bc_rows.begin(), op.bc_rows.end(), row) != op.bc_rows.end();
}

Mat shifted_system(const ModeOperator& op, Complex mu) {
  Mat sys = op.matrix;
  for (int i = 0; i < op.size; ++i) {
    if (!is_bc_row(op, i)) sys(i, i) += mu;
  }
  return sys;
}

}  // namespace

Vec resolve(const ModeOperator& op, Complex mu, const Vec& rhs, const Vec* bc_data) {
  require(rhs.size() == op.size, "resolve: rhs size mismatch");
  if (bc_data != nullptr) {
    require(bc_data->size() == static_cast<Eigen::Index>(op.bc_rows.size()),
            "resolve: bc data size mismatch");
  }
  Mat sys = shifted_system(op, mu);
  Vec b = rhs;
  for (std::size_t j = 0; j < op.bc_rows.size(); ++j) {
    b[op.bc_rows[j]] = bc_data ? (*bc_data)[static_cast<Eigen::Index>(j)] : Complex(0.0, 0.0);
  }

  const bool singular_neumann =
      op.kind == OperatorKind::neumann_poisson && op.m == 0 && std::abs(mu) < 1e-11;
  if (!singular_neumann) {
    return sys.partialPivLu().solve(b);
  }

  // Solvability at the quadrature level: integrating -lap phi = rhs over the
  // disk gives int_0^1 rhs r dr + phi'(1) = 0. The quadrature is exact on the
  // collocation space, so data assembled from discrete fields passes to
  // roundoff no matter how rough it is, while genuinely incompatible data
  // violates the identity at O(1).
  const int n = op.size;
  Complex compat = b[n - 1];
  for (int i = 0; i < n; ++i) compat += Complex(op.grid->radial_weights()[i], 0.0) * rhs[i];
  ensure(std::abs(compat) <= 1e-8 * std::max<Real>(1.0, rhs.norm()),
         "neumann_poisson: zero-mean precondition violated at m = 0");

  // Compatible problem: border with the left-null direction and pin the
  // r-weighted mean. The multiplier absorbs the discrete-null defect left by
  // the boundary row replacement (a least-squares-consistent solve).
  Eigen::JacobiSVD<Mat> svd(sys, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec left_null = svd.matrixU().col(n - 1);
  Mat bordered = Mat::Zero(n + 1, n + 1);
  bordered.block(0, 0, n, n) = sys;
  bordered.block(0, n, n, 1) = left_null;
  for (int i = 0; i < n; ++i) bordered(n, i) = Complex(op.grid->radial_weights()[i], 0.0);
  Vec bb = Vec::Zero(n + 1);
  bb.head(n) = b;
  const Vec x = bordered.partialPivLu().solve(bb);
  return x.head(n);
}

Real solve_residual(const ModeOperator& op, Complex mu, const Vec& v, const Vec& rhs) {
  const Mat sys = shifted_system(op, mu);
  const Vec res = sys * v - rhs;
  const int n = op.grid->n_r();
  Real acc = 0.0;
  for (int i = 0; i < op.size; ++i) {
    if (is_bc_row(op, i)) continue;
    acc += op.grid->radial_weights()[i % n] * std::norm(res[i]);
  }
  return std::sqrt(acc);
}

ModeEigen eigensolve(const ModeOperator& op) {
  ModeEigen out;
  out.bc_rows = op.bc_rows;
  for (int i = 0; i < op.size; ++i) {
    if (!is_bc_row(op, i)) out.free_rows.push_back(i);
  }
  const int nf = static_cast<int>(out.free_rows.size());
  const int nc = static_cast<int>(out.bc_rows.size());

  Mat r_cc(nc, nc), r_cf(nc, nf);
  for (int a = 0; a < nc; ++a) {
    for (int b = 0; b < nc; ++b) r_cc(a, b) = op.matrix(op.bc_rows[a], op.bc_rows[b]);
    for (int b = 0; b < nf; ++b) r_cf(a, b) = op.matrix(op.bc_rows[a], out.free_rows[b]);
  }
  out.bc_map = -r_cc.partialPivLu().solve(r_cf);

  Mat m_ff(nf, nf), m_fc(nf, nc);
  for (int a = 0; a < nf; ++a) {
    for (int b = 0; b < nf; ++b) m_ff(a, b) = op.matrix(out.free_rows[a], out.free_rows[b]);
    for (int b = 0; b < nc; ++b) m_fc(a, b) = op.matrix(out.free_rows[a], op.bc_rows[b]);
  }
  const Mat reduced = m_ff + m_fc * out.bc_map;

  Eigen::ComplexEigenSolver<Mat> solver(reduced);
  ensure(solver.info() == Eigen::Success, "eigensolve: eigen decomposition failed");
  std::vector<int> order(nf);
  std::iota(order.begin(), order.end(), 0);
  const Vec& raw_values = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (raw_values[a].real() != raw_values[b].real())
      return raw_values[a].real() < raw_values[b].real();
    return raw_values[a].imag() < raw_values[b].imag();
  });

  out.values.resize(nf);
  out.basis.resize(nf, nf);
  for (int j = 0; j < nf; ++j) {
    out.values[j] = raw_values[order[j]];
    out.basis.col(j) = solver.eigenvectors().col(order[j]);
  }
  Eigen::PartialPivLU<Mat> lu(out.basis);
  out.basis_inverse = lu.inverse();
  out.condition = out.basis.cwiseAbs().rowwise().sum().maxCoeff() *
                  out.basis_inverse.cwiseAbs().rowwise().sum().maxCoeff();

  const Mat constrained = out.bc_map * out.basis;
  out.vectors = Mat::Zero(op.size, nf);
  for (int a = 0; a < nf; ++a) out.vectors.row(out.free_rows[a]) = out.basis.row(a);
  for (int a = 0; a < nc; ++a) out.vectors.row(out.bc_rows[a]) = constrained.row(a);
  return out;
}

Vec resolve_by_eigen(const ModeEigen& eig, Complex mu, const Vec& rhs) {
  const int nf = static_cast<int>(eig.free_rows.size());
  Vec rhs_free(nf);
  for (int a = 0; a < nf; ++a) rhs_free[a] = rhs[eig.free_rows[a]];
  Vec coeff = eig.basis_inverse * rhs_free;
  for (int j = 0; j < nf; ++j) {
    const Complex denom = mu + eig.values[j];
    ensure(std::abs(denom) > 1e-300, "resolve_by_eigen: mu hits the spectrum");
    coeff[j] /= denom;
  }
  return complete_with_bc(eig, eig.basis * coeff);
}

Vec complete_with_bc(const ModeEigen& eig, const Vec& free_values) {
  const int size = static_cast<int>(eig.free_rows.size() + eig.bc_rows.size());
  const Vec constrained = eig.bc_map * free_values;
  Vec full(size);
  for (std::size_t a = 0; a < eig.free_rows.size(); ++a)
    full[eig.free_rows[a]] = free_values[static_cast<Eigen::Index>(a)];
  for (std::size_t a = 0; a < eig.bc_rows.size(); ++a)
    full[eig.bc_rows[a]] = constrained[static_cast<Eigen::Index>(a)];
  return full;
}

namespace {

struct SpinComponent {
  Real weight;
  int order;
  Vec profile;
};

std::vector<SpinComponent> spin_derivative_set(const SpectralGrid& g,
                                               const std::vector<SpinComponent>& in) {
  std::vector<SpinComponent> out;
  out.reserve(2 * in.size());
  for (const auto& comp : in) {
    const Parity sigma = scalar_parity(comp.order);
    const Vec df = g.d1c(sigma) * comp.profile;
    Vec over_r = comp.profile;
    for (int i = 0; i < g.n_r(); ++i) over_r[i] *= g.inv_r()[i];
    const Real mu = static_cast<Real>(comp.order);
    out.push_back({comp.weight / 2.0, comp.order + 1, df - mu * over_r});
    out.push_back({comp.weight / 2.0, comp.order - 1, df + mu * over_r});
  }
  return out;
}

Real disk_lp_of_set(const SpectralGrid& g, const std::vector<SpinComponent>& set, Real p) {
  const int n = g.n_r();
  RealVec mag2 = RealVec::Zero(n);
  for (const auto& comp : set) {
    for (int i = 0; i < n; ++i) mag2[i] += comp.weight * std::norm(comp.profile[i]);
  }
  if (p == kInfinity) {
    Real best = 0.0;
    for (int i = 0; i < n; ++i) best = std::max(best, mag2[i]);
    return std::sqrt(best);
  }
  Real acc = 0.0;
  for (int i = 0; i < n; ++i) acc += g.radial_weights()[i] * std::pow(mag2[i], p / 2.0);
  return std::pow(2.0 * kPi * acc, 1.0 / p);
}

}  // namespace

DiskNorms disk_norms(const SpectralGrid& g, int m, bool coupled, const Vec& v, Real p) {
  std::vector<SpinComponent> base;
  if (coupled) {
    require(v.size() == 2 * g.n_r(), "disk_norms: coupled profile size");
    const Complex iu(0.0, 1.0);
    Vec plus(g.n_r()), minus(g.n_r());
    for (int i = 0; i < g.n_r(); ++i) {
      plus[i] = v[i] + iu * v[g.n_r() + i];
      minus[i] = v[i] - iu * v[g.n_r() + i];
    }
    // s_+ = v^r + i v^theta transforms as a scalar at angular order m + 1,
    // s_- at order m - 1.
    base.push_back({0.5, m + 1, plus});
    base.push_back({0.5, m - 1, minus});
  } else {
    require(v.size() == g.n_r(), "disk_norms: scalar profile size");
    base.push_back({1.0, m, v});
  }

  DiskNorms out;
  out.value = disk_lp_of_set(g, base, p);
  const auto first = spin_derivative_set(g, base);
  out.grad = disk_lp_of_set(g, first, p);
  const auto second = spin_derivative_set(g, first);
  out.grad2 = disk_lp_of_set(g, second, p);
  return out;
}

Vec random_mode_profile(const SpectralGrid& g, int m, bool coupled, std::uint64_t seed,
                        std::uint64_t stream, int degree) {
  CounterRng rng(seed, stream);
  const int n = g.n_r();
  auto eval_pole_poly = [&](int pole, std::uint64_t base) {
    Vec out = Vec::Zero(n);
    for (int j = 0; j <= degree; ++j) {
      const Complex c = rng.cnormal(base + static_cast<std::uint64_t>(j)) * std::pow(0.6, j);
      for (int i = 0; i < n; ++i) {
        const Real r = g.radial_nodes()[i];
        out[i] += c * std::pow(r, pole + 2 * j);
      }
    }
    return out;
  };
  if (!coupled) return eval_pole_poly(std::abs(m), 0);

  const Vec plus = eval_pole_poly(std::abs(m + 1), 0);
  const Vec minus = eval_pole_poly(std::abs(m - 1), 64);
  Vec v(2 * n);
  const Complex half_i(0.0, -0.5);
  for (int i = 0; i < n; ++i) {
    v[i] = 0.5 * (plus[i] + minus[i]);
    v[n + i] = half_i * (plus[i] - minus[i]);
  }
  return v;
}

void remove_radial_mean(const SpectralGrid& g, Vec& profile) {
  Real total = 0.0;
  Complex mean(0.0, 0.0);
  for (int i = 0; i < g.n_r(); ++i) {
    total += g.radial_weights()[i];
    mean += g.radial_weights()[i] * profile[i];
  }
  mean /= total;
  for (int i = 0; i < g.n_r(); ++i) profile[i] -= mean;
}

std::vector<ResolventSample> sector_sweep_2d(const SpectralGrid& g, const DiskSweepConfig& cfg) {
  require(cfg.n_radii >= 2, "sector_sweep_2d: need at least two radii");
  require(cfg.theta > kPi / 2.0 && cfg.theta < kPi, "sector_sweep_2d: theta outside (pi/2, pi)");
  const ModeOperator op = assemble(cfg.kind, cfg.m, g);
  const bool coupled = cfg.kind == OperatorKind::coupled_velocity;

  std::vector<Vec> trials;
  std::vector<DiskNorms> trial_norms;
  for (int t = 0; t < cfg.trials; ++t) {
    Vec f = random_mode_profile(g, cfg.m, coupled, cfg.seed, 7000 + static_cast<std::uint64_t>(t));
    trials.push_back(f);
    trial_norms.push_back(disk_norms(g, cfg.m, coupled, f, cfg.p));
  }

  const Real angles[] = {0.0, kPi / 2.0, -kPi / 2.0, cfg.theta - 0.05, -(cfg.theta - 0.05)};
  std::vector<ResolventSample> samples;
  for (int ir = 0; ir < cfg.n_radii; ++ir) {
    const Real frac = static_cast<Real>(ir) / static_cast<Real>(cfg.n_radii - 1);
    const Real rho = cfg.radius_min * std::pow(cfg.radius_max / cfg.radius_min, frac);
    for (const Real phi : angles) {
      const Complex mu = rho * Complex(std::cos(phi), std::sin(phi));
      Mat sys = op.matrix;
      for (int i = 0; i < op.size; ++i) {
        if (std::find(op.bc_rows.begin(), op.bc_rows.end(), i) == op.bc_rows.end())
          sys(i, i) += mu;
      }
      Eigen::PartialPivLU<Mat> lu(sys);
      for (int t = 0; t < cfg.trials; ++t) {
        Vec b = trials[t];
        for (const int row : op.bc_rows) b[row] = Complex(0.0, 0.0);
        const Vec v = lu.solve(b);
        const DiskNorms vn = disk_norms(g, cfg.m, coupled, v, cfg.p);
        ResolventSample s;
        s.kind = cfg.kind;
        s.m = cfg.m;
        s.p = cfg.p;
        s.mu = mu;
        const Real gnorm = trial_norms[t].value;
        s.ratio0 = std::abs(mu) * vn.value / gnorm;
        s.ratio_half = std::sqrt(std::abs(mu)) * vn.grad / gnorm;
        s.ratio_two = vn.grad2 / gnorm;
        s.residual = solve_residual(op, mu, v, trials[t]) /
                     std::max<Real>(1e-300, trials[t].norm());
        samples.push_back(s);
      }
    }
  }
  return samples;
}

}  // namespace cylstokes
