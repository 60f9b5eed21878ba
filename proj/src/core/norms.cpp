#include "core/norms.hpp"

#include <cmath>

#include "core/diffops.hpp"

namespace cylstokes {

namespace {

Real integrate_magnitude(const SpectralGrid& g, const std::vector<Real>& mag2, Real p,
                         bool padded) {
  const int pt = padded ? g.pad_theta() : g.n_theta();
  const int pz = padded ? g.pad_z() : g.n_z();
  const int nr = g.n_r();
  if (p == kInfinity) {
    Real top = 0.0;
    for (Real v : mag2) top = std::max(top, v);
    return std::sqrt(top);
  }
  const Real cell = (2.0 * kPi / pt) * (g.period() / pz);
  Real acc = 0.0;
  for (int j = 0; j < pt; ++j)
    for (int l = 0; l < pz; ++l)
      for (int i = 0; i < nr; ++i) {
        const Real m2 = mag2[(static_cast<std::size_t>(j) * pz + l) * nr + i];
        acc += g.radial_weights()[i] * std::pow(m2, 0.5 * p);
      }
  return std::pow(cell * acc, 1.0 / p);
}

Real stack_norm(const SpectralGrid& g, const std::vector<SpectralField>& stack, Real p) {
  const bool padded = (p == kInfinity);
  const int pt = padded ? g.pad_theta() : g.n_theta();
  const int pz = padded ? g.pad_z() : g.n_z();
  std::vector<Real> mag2(static_cast<std::size_t>(pt) * pz * g.n_r(), 0.0);
  for (const auto& h : stack) accumulate_magnitude_squared(h, padded, mag2);
  return integrate_magnitude(g, mag2, p, padded);
}

}  // namespace

Real derivative_seminorm(const SpectralField& f, Real p, int order) {
  require(p >= 1.0, "norm: p must be >= 1");
  const SpectralGrid& g = f.grid();
  if (order == 0) {
    const bool padded = (p == kInfinity);
    const int pt = padded ? g.pad_theta() : g.n_theta();
    const int pz = padded ? g.pad_z() : g.n_z();
    std::vector<Real> mag2(static_cast<std::size_t>(pt) * pz * g.n_r(), 0.0);
    accumulate_magnitude_squared(f, padded, mag2);
    return integrate_magnitude(g, mag2, p, padded);
  }
  require(f.kind() != FieldKind::tensor9, "norm: derivative orders need scalar or vector3");
  // Spin shifts move angular content by one order per Cartesian derivative
  // (plus one for the frame rotation of a vector); widen the band so nothing
  // falls off the edge.
  SpectralGrid wide(g.n_r(), g.n_theta() + 2 * (order + 1), g.n_z(), g.period());
  std::vector<SpectralField> stack = cartesian_scalars(transfer_modes(f, &wide));
  for (int j = 0; j < order; ++j) stack = cartesian_derivatives(stack);
  return stack_norm(wide, stack, p);
}

Real lp_norm(const SpectralField& f, Real p, int sobolev) {
  require(p >= 1.0, "norm: p must be >= 1");
  require(sobolev >= 0 && sobolev <= 4, "norm: sobolev order out of range");
  if (sobolev == 0) return derivative_seminorm(f, p, 0);
  require(f.kind() != FieldKind::tensor9, "norm: sobolev orders need scalar or vector3");
  const SpectralGrid& g = f.grid();
  SpectralGrid wide(g.n_r(), g.n_theta() + 2 * (sobolev + 1), g.n_z(), g.period());
  std::vector<SpectralField> stack = cartesian_scalars(transfer_modes(f, &wide));
  Real acc = 0.0, top = 0.0;
  for (int j = 0; j <= sobolev; ++j) {
    if (j > 0) stack = cartesian_derivatives(stack);
    const Real s = stack_norm(wide, stack, p);
    if (p == kInfinity)
      top = std::max(top, s);
    else
      acc += std::pow(s, p);
  }
  return p == kInfinity ? top : std::pow(acc, 1.0 / p);
}

Complex inner_product(const SpectralField& a, const SpectralField& b) {
  ensure(a.kind() == b.kind() && a.grid_ptr() == b.grid_ptr(), "inner_product: shape mismatch");
  const SpectralGrid& g = a.grid();
  Complex acc(0, 0);
  for (int c = 0; c < a.components(); ++c)
    for (int mi = 0; mi < g.n_theta(); ++mi)
      for (int ki = 0; ki < g.n_z(); ++ki)
        for (int i = 0; i < g.n_r(); ++i)
          acc += g.radial_weights()[i] * a.at(c, mi, ki, i) * std::conj(b.at(c, mi, ki, i));
  return acc * (2.0 * kPi * g.period());
}

Real parseval_l2(const SpectralField& f) {
  return std::sqrt(std::abs(inner_product(f, f).real()));
}

}  // namespace cylstokes
