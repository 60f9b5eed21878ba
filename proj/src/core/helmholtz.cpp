#include "core/helmholtz.hpp"

#include <algorithm>
#include <utility>

#include "core/cylinder.hpp"
#include "core/diffops.hpp"
#include "core/disk_ops.hpp"
#include "core/norms.hpp"
#include "core/parallel.hpp"

namespace cylstokes {

HelmholtzResult project(const SpectralField& f) {
  require(f.kind() == FieldKind::vector3, "project: vector3 input required");
  const SpectralGrid& g = f.grid();
  const SpectralField divf = divergence(f);
  SpectralField phi(f.grid_ptr(), FieldKind::scalar);
  const int last = g.boundary_index();
  parallel_for(g.n_theta(), [&](int mi) {
    const int m = g.theta_mode(mi);
    const ModeOperator op = assemble(OperatorKind::neumann_poisson, m, g);
    for (int ki = 0; ki < g.n_z(); ++ki) {
      const Real xi = g.xi(ki);
      const Vec rhs = -Vec(divf.profile(0, mi, ki));
      Vec bc(1);
      bc[0] = f.at(0, mi, ki, last);
      phi.profile(0, mi, ki) = resolve(op, Complex(xi * xi, 0.0), rhs, &bc);
    }
  });
  SpectralField grad_part = gradient(phi);
  SpectralField sol = f;
  sol -= grad_part;
  return HelmholtzResult{std::move(sol), std::move(grad_part), std::move(phi)};
}

SpectralField project_p(const SpectralField& f) {
  return std::move(project(f).solenoidal_part);
}

CommutationReport commutation_check(const std::vector<SpectralField>& u_samples,
                                    const std::vector<Complex>& lambda_samples) {
  CommutationReport report;
  for (const SpectralField& u : u_samples) {
    const Real scale = std::max<Real>(parseval_l2(u), 1e-300);

    SpectralField bu = laplacian(u);
    bu *= Complex(-1.0, 0.0);
    SpectralField diff = project_p(bu);
    diff -= [&] {
      SpectralField bpu = laplacian(project_p(u));
      bpu *= Complex(-1.0, 0.0);
      return bpu;
    }();
    report.laplace_commutator =
        std::max(report.laplace_commutator, parseval_l2(diff) / scale);

    for (Complex lambda : lambda_samples) {
      SpectralField lhs = project_p(solve_resolvent(lambda, u));
      lhs -= solve_resolvent(lambda, project_p(u));
      report.resolvent_commutator =
          std::max(report.resolvent_commutator, parseval_l2(lhs) / scale);
    }
  }
  return report;
}

}  // namespace cylstokes
