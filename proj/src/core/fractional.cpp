#include "core/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "core/diffops.hpp"
#include "core/helmholtz.hpp"
#include "core/norms.hpp"
#include "core/parallel.hpp"

namespace cylstokes {

namespace {

// Golub-Welsch: nodes and weights from the symmetric tridiagonal recurrence
// matrix (diagonal alpha_k, off-diagonal sqrt(beta_k)), mu0 the weight mass.
QuadRule golub_welsch(const RealVec& alpha, const RealVec& beta, Real mu0) {
  const int n = static_cast<int>(alpha.size());
  RealMat jac = RealMat::Zero(n, n);
  for (int i = 0; i < n; ++i) jac(i, i) = alpha[i];
  for (int i = 1; i < n; ++i) jac(i, i - 1) = jac(i - 1, i) = std::sqrt(beta[i]);
  Eigen::SelfAdjointEigenSolver<RealMat> es(jac);
  QuadRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const Real head = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * head * head;
  }
  return rule;
}

struct ContourNode {
  Complex lambda;
  Complex coeff;  // quadrature weight folded with orientation, ray phase,
                  // lambda^{-z}, 1/(2 pi i), and the (lambda - B0) sign
};

/**
 * Node list for (1/2. pi i) times the counterclockwise wedge integral of
 * lambda^{-z} R(lambda) over arg(lambda - a) = +-psi. The orientation enters
 * the wedge along the upper ray and leaves along the lower, and R(lambda) =
 * -(lambda0 - lambda + B)^{-1}; both signs are folded into coeff so that the
 * result is sum_j coeff_j (lambda0 - lambda_j + xi^2 + op)^{-1} f.
 */
std::vector<ContourNode> build_wedge_nodes(Complex z, const ContourSpec& spec, bool jacobi_tail) {
  struct SNode {
    Real s;
    Real w;
  };
  std::vector<SNode> snodes;
  snodes.reserve(spec.n_quad);

  const int m_head = std::max(8, spec.n_quad / 16);
  const int m_tail = std::max(12, spec.n_quad / 8);
  const int n_body = spec.n_quad - m_head - m_tail;
  require(n_body >= 8, "fractional: n_quad too small (need at least 40 per ray)");

  const QuadRule head = gauss_legendre(m_head);
  for (int i = 0; i < m_head; ++i) {
    snodes.push_back({spec.s_lo * 0.5 * (1.0 + head.nodes[i]), spec.s_lo * 0.5 * head.weights[i]});
  }

  const Real u_lo = std::log(spec.s_lo);
  const Real u_hi = std::log(spec.s_hi);
  const int panels = std::max(1, static_cast<int>(std::ceil((u_hi - u_lo) / 1.5)));
  const int base = n_body / panels;
  const int extra = n_body - base * panels;
  require(base >= 2, "fractional: n_quad too small for the contour span");
  Real edge = u_lo;
  const Real width = (u_hi - u_lo) / panels;
  for (int pnl = 0; pnl < panels; ++pnl) {
    const int count = base + (pnl < extra ? 1 : 0);
    const QuadRule body = gauss_legendre(count);
    for (int i = 0; i < count; ++i) {
      const Real u = edge + 0.5 * width * (1.0 + body.nodes[i]);
      const Real s = std::exp(u);
      snodes.push_back({s, 0.5 * width * body.weights[i] * s});
    }
    edge += width;
  }

  // Tail [s_hi, inf) through w = s_hi / s: the integrand becomes an analytic
  // function times w^{alpha - 1}, handled exactly by the matching Gauss rule.
  // Only valid for real exponents; imaginary parts make w^{z-1} non-analytic
  // at w = 0, so those runs truncate at s_hi instead.
  std::vector<SNode> tnodes;
  if (jacobi_tail) {
    const QuadRule tail = gauss_power_weight(m_tail, z.real() - 1.0);
    tnodes.reserve(m_tail);
    for (int i = 0; i < m_tail; ++i) {
      const Real w = tail.nodes[i];
      const Real s = spec.s_hi / w;
      tnodes.push_back({s, tail.weights[i] * (spec.s_hi / (w * w)) * std::pow(w, 1.0 - z.real())});
    }
  }

  std::vector<ContourNode> nodes;
  nodes.reserve(2 * (snodes.size() + tnodes.size()));
  for (const Real sign : {1.0, -1.0}) {
    const Complex ray = std::exp(Complex(0.0, sign * spec.psi));
    const Complex orient = sign / (2.0 * kPi * Complex(0.0, 1.0));
    auto push = [&](const SNode& sn) {
      const Complex lambda = spec.a + sn.s * ray;
      nodes.push_back({lambda, orient * std::pow(lambda, -z) * ray * sn.w});
    };
    for (const SNode& sn : snodes) push(sn);
    for (const SNode& sn : tnodes) push(sn);
  }
  return nodes;
}

ContourSpec resolved_spec(const SemigroupPlan& plan, ContourSpec spec) {
  if (spec.a == 0.0) spec.a = 0.5 * plan.lambda0();
  require(spec.a > 0.0 && spec.a < plan.lambda0(),
          "fractional: contour/spectrum collision (need 0 < a < lambda0)");
  require(spec.psi > 0.0 && spec.psi < kPi / 2.0, "fractional: psi must lie in (0, pi/2)");
  require(spec.n_quad >= 40, "fractional: n_quad too small (need at least 40 per ray)");
  if (spec.s_lo <= 0.0) spec.s_lo = 0.2 * (plan.lambda0() - spec.a);
  if (spec.s_hi <= 0.0) spec.s_hi = 8.0 * (plan.max_eigenvalue() + plan.lambda0());
  require(spec.s_hi > 4.0 * spec.s_lo, "fractional: s_hi must exceed s_lo");
  return spec;
}

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

SpectralField contour_apply(const SemigroupPlan& plan, Complex z, const SpectralField& f,
                            const ContourSpec& contour, Generator which) {
  const SpectralGrid& g = plan.grid();
  require(f.kind() == FieldKind::vector3, "fractional: vector3 input required");
  require(f.grid_ptr() == &g, "fractional: field grid does not match the plan");
  require(plan.lambda0() > 0.0, "fractional: positive shift lambda0 required");
  const ContourSpec spec = resolved_spec(plan, contour);
  const auto nodes = build_wedge_nodes(z, spec, z.imag() == 0.0);

  std::optional<SpectralField> projected;
  if (which == Generator::stokes) projected = project_p(f);
  const SpectralField& work = projected ? *projected : f;
  const auto ops = assemble_all(g);
  SpectralField out(f.grid_ptr(), FieldKind::vector3);
  const int n = g.n_r();
  parallel_for(g.n_theta(), [&](int mi) {
    Vec rhs2(2 * n);
    for (int ki = 0; ki < g.n_z(); ++ki) {
      const Real xisq = g.xi(ki) * g.xi(ki);
      rhs2.head(n) = work.profile(0, mi, ki);
      rhs2.tail(n) = work.profile(1, mi, ki);
      const Vec fz = work.profile(2, mi, ki);
      Vec acc2 = Vec::Zero(2 * n);
      Vec accz = Vec::Zero(n);
      for (const ContourNode& node : nodes) {
        const Complex mu = plan.lambda0() - node.lambda + xisq;
        acc2 += node.coeff * resolve(ops[mi].coupled, mu, rhs2);
        accz += node.coeff * resolve(ops[mi].scalar, mu, fz);
      }
      out.profile(0, mi, ki) = acc2.head(n);
      out.profile(1, mi, ki) = acc2.tail(n);
      out.profile(2, mi, ki) = accz;
    }
  });
  return out;
}

}  // namespace

QuadRule gauss_legendre(int n) {
  require(n >= 1, "fractional: quadrature order must be positive");
  RealVec alpha = RealVec::Zero(n);
  RealVec beta = RealVec::Zero(n);
  for (int k = 1; k < n; ++k) {
    const Real kk = k;
    beta[k] = kk * kk / ((2.0 * kk - 1.0) * (2.0 * kk + 1.0));
  }
  return golub_welsch(alpha, beta, 2.0);
}

QuadRule gauss_power_weight(int n, Real beta_exp) {
  require(n >= 1, "fractional: quadrature order must be positive");
  require(beta_exp > -1.0, "fractional: power weight exponent must exceed -1");
  // Jacobi recurrence (A = 0, B = beta_exp) on [-1, 1]; k = 0 has its own
  // formula because the general one divides by 2k + A + B.
  const Real b = beta_exp;
  RealVec alpha(n);
  RealVec beta = RealVec::Zero(n);
  alpha[0] = b / (b + 2.0);
  for (int k = 1; k < n; ++k) {
    const Real t = 2.0 * k + b;
    alpha[k] = b * b / (t * (t + 2.0));
    beta[k] = 4.0 * k * k * (k + b) * (k + b) / (t * t * (t + 1.0) * (t - 1.0));
  }
  const Real mu0 = std::pow(2.0, b + 1.0) / (b + 1.0);
  QuadRule rule = golub_welsch(alpha, beta, mu0);
  // Map to w = (1 + x) / 2 on [0, 1]: int_0^1 h(w) w^b dw = sum W_i h(w_i).
  const Real map = std::pow(2.0, -(b + 1.0));
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (1.0 + rule.nodes[i]);
    rule.weights[i] *= map;
  }
  return rule;
}

SpectralField apply_neg_power(const SemigroupPlan& plan, Real alpha, const SpectralField& f,
                              const ContourSpec& contour, Generator which) {
  require(alpha > 0.0 && alpha <= 1.0, "fractional: alpha must lie in (0, 1]");
  return contour_apply(plan, Complex(alpha, 0.0), f, contour, which);
}

SpectralField eigen_neg_power(const SemigroupPlan& plan, Real alpha, const SpectralField& f,
                              Generator which) {
  require(alpha > 0.0 && alpha <= 1.0, "fractional: alpha must lie in (0, 1]");
  require(plan.lambda0() > 0.0, "fractional: positive shift lambda0 required");
  return plan.apply_spectral_function(
      f, [alpha](Complex lam) { return std::pow(lam, Complex(-alpha, 0.0)); },
      which == Generator::stokes);
}

SpectralField apply_imaginary_power(const SemigroupPlan& plan, Real s, const SpectralField& f) {
  require(std::abs(s) <= 1.0, "fractional: |s| must not exceed 1");
  require(plan.lambda0() > 0.0, "fractional: positive shift lambda0 required");
  return plan.apply_spectral_function(
      f, [s](Complex lam) { return std::pow(lam, Complex(0.0, s)); }, false);
}

SpectralField contour_imaginary_power(const SemigroupPlan& plan, Real s, const SpectralField& f,
                                      const ContourSpec& contour) {
  require(std::abs(s) <= 1.0, "fractional: |s| must not exceed 1");
  return contour_apply(plan, Complex(1.0, -s), f, contour, Generator::laplace);
}

SpectralField band_limited_sample(const SemigroupPlan& plan, int per_mode, std::uint64_t seed,
                                  std::uint64_t stream) {
  require(per_mode > 0, "fractional: per_mode must be positive");
  const SpectralGrid& g = plan.grid();
  const int n = g.n_r();
  SpectralField out(&g, FieldKind::vector3);
  CounterRng rng(seed, stream);
  std::uint64_t draw = 0;
  for (int mi = 0; mi < g.n_theta(); ++mi) {
    if (!g.theta_in_band(-g.theta_mode(mi))) continue;  // unpaired edge mode
    for (int ki = 0; ki < g.n_z(); ++ki) {
      if (!g.z_in_band(-g.z_mode(ki))) continue;
      const ModeEigen& ce = plan.coupled_eigen(mi);
      const int nc = std::min<int>(per_mode, static_cast<int>(ce.values.size()));
      for (int j = 0; j < nc; ++j) {
        const Vec full = complete_with_bc(ce, Vec(ce.basis.col(j)));
        const Complex c = rng.cnormal(draw++);
        out.profile(0, mi, ki) += c * full.head(n);
        out.profile(1, mi, ki) += c * full.tail(n);
      }
      const ModeEigen& se = plan.scalar_eigen(mi);
      const int ns = std::min<int>(per_mode, static_cast<int>(se.values.size()));
      for (int j = 0; j < ns; ++j) {
        const Vec full = complete_with_bc(se, Vec(se.basis.col(j)));
        out.profile(2, mi, ki) += rng.cnormal(draw++) * full;
      }
    }
  }
  out.make_hermitian();
  return out;
}

PowerReport sqrt_embedding_report(const SemigroupPlan& plan, int samples, Real p,
                                  std::uint64_t seed) {
  require(samples > 0, "fractional: sample count must be positive");
  require(p >= 1.0 && p < kInfinity, "fractional: p must lie in [1, inf)");
  const SpectralGrid& g = plan.grid();
  const Real plane = 2.0 * kPi * g.period();  // theta-z measure of the boundary modes
  PowerReport rep;
  rep.exponent = 0.5;
  for (int t = 0; t < samples; ++t) {
    const SpectralField data = band_limited_sample(plan, 4, seed, static_cast<std::uint64_t>(t));
    const SpectralField u = eigen_neg_power(plan, 0.5, data, Generator::laplace);
    const Real denom = std::max<Real>(lp_norm(data, p), 1e-300);
    const Real ratio = derivative_seminorm(u, p, 1) / denom;
    rep.ratios.push_back(ratio);
    rep.sup_ratio = std::max(rep.sup_ratio, ratio);

    // L2 Dirichlet-form identity: |grad u|^2 + lambda0 |u|^2 + the boundary
    // slip term |u_theta(1)|^2 integrated over the wall equals |g|^2.
    Real wall = 0.0;
    const int last = g.boundary_index();
    for (int mi = 0; mi < g.n_theta(); ++mi)
      for (int ki = 0; ki < g.n_z(); ++ki) wall += std::norm(u.at(1, mi, ki, last));
    const Real grad2 = derivative_seminorm(u, 2.0, 1);
    const Real u2 = lp_norm(u, 2.0);
    const Real g2 = std::max<Real>(lp_norm(data, 2.0), 1e-300);
    const Real defect =
        std::abs((grad2 * grad2 + plan.lambda0() * u2 * u2 + plane * wall) / (g2 * g2) - 1.0);
    rep.oracle_error = std::max(rep.oracle_error, defect);
  }
  return rep;
}

SpectralField pdiv_composite(const SemigroupPlan& plan, const SpectralField& big_f,
                             const ContourSpec& contour) {
  require(big_f.kind() == FieldKind::tensor9, "fractional: tensor9 input required");
  const SpectralField projected = project_p(divergence(big_f));
  return apply_neg_power(plan, 0.5, projected, contour, Generator::laplace);
}

PowerReport pdiv_boundedness_report(const SemigroupPlan& plan, int samples, Real p,
                                    std::uint64_t seed) {
  require(samples > 0, "fractional: sample count must be positive");
  require(p >= 1.0 && p < kInfinity, "fractional: p must lie in [1, inf)");
  require(plan.lambda0() > 0.0, "fractional: positive shift lambda0 required");
  PowerReport rep;
  rep.exponent = 0.5;
  BundleShape shape;
  for (int t = 0; t < samples; ++t) {
    const CounterRng rng(seed, static_cast<std::uint64_t>(t));
    const SpectralField big_f = random_tensor_bundle(shape, rng).instantiate(plan.grid());
    const SpectralField u =
        eigen_neg_power(plan, 0.5, project_p(divergence(big_f)), Generator::laplace);
    const Real ratio = lp_norm(u, p) / std::max<Real>(lp_norm(big_f, p), 1e-300);
    rep.ratios.push_back(ratio);
    rep.sup_ratio = std::max(rep.sup_ratio, ratio);
    if (t == 0) {
      SpectralField diff = pdiv_composite(plan, big_f, ContourSpec{});
      diff -= u;
      rep.oracle_error = parseval_l2(diff) / std::max<Real>(parseval_l2(u), 1e-300);
    }
  }
  return rep;
}

}  // namespace cylstokes
