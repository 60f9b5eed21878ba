#include "core/field.hpp"

#include <algorithm>
#include <cmath>

#include "core/parallel.hpp"
#include "core/polytools.hpp"

namespace cylstokes {

int horizontal_rank(FieldKind kind, int c) {
  switch (kind) {
    case FieldKind::scalar:
      return 0;
    case FieldKind::vector3:
      return c < 2 ? 1 : 0;
    default: {
      const int row = c / 3, col = c % 3;
      return (row < 2 ? 1 : 0) + (col < 2 ? 1 : 0);
    }
  }
}

Parity component_parity(FieldKind kind, int c, int m) {
  const int n_h = horizontal_rank(kind, c);
  return ((m + n_h) % 2 == 0) ? Parity::even : Parity::odd;
}

SpectralField::SpectralField(const SpectralGrid* grid, FieldKind kind)
    : grid_(grid), kind_(kind), components_(component_count(kind)) {
  data_.assign(static_cast<std::size_t>(components_) * grid_->n_theta() * grid_->n_z() *
                   grid_->n_r(),
               Complex(0, 0));
}

void SpectralField::set_zero() { std::fill(data_.begin(), data_.end(), Complex(0, 0)); }

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  ensure(other.data_.size() == data_.size() && other.kind_ == kind_, "field: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  ensure(other.data_.size() == data_.size() && other.kind_ == kind_, "field: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(Complex s) {
  for (auto& v : data_) v *= s;
  return *this;
}

Real SpectralField::hermitian_error() const {
  const int nt = grid_->n_theta(), nz = grid_->n_z(), nr = grid_->n_r();
  Real scale = 0.0, err = 0.0;
  for (const auto& v : data_) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  for (int c = 0; c < components_; ++c)
    for (int mi = 0; mi < nt; ++mi)
      for (int ki = 0; ki < nz; ++ki) {
        const int mj = (nt - mi) % nt, kj = (nz - ki) % nz;
        for (int i = 0; i < nr; ++i)
          err = std::max(err, std::abs(at(c, mi, ki, i) - std::conj(at(c, mj, kj, i))));
      }
  return err / scale;
}

void SpectralField::make_hermitian() {
  const int nt = grid_->n_theta(), nz = grid_->n_z(), nr = grid_->n_r();
  for (int c = 0; c < components_; ++c)
    for (int mi = 0; mi < nt; ++mi)
      for (int ki = 0; ki < nz; ++ki) {
        const int mj = (nt - mi) % nt, kj = (nz - ki) % nz;
        if (std::make_pair(mi, ki) > std::make_pair(mj, kj)) continue;
        for (int i = 0; i < nr; ++i) {
          const Complex avg = 0.5 * (at(c, mi, ki, i) + std::conj(at(c, mj, kj, i)));
          at(c, mi, ki, i) = avg;
          at(c, mj, kj, i) = std::conj(avg);
        }
      }
}

PhysicalField to_physical(const SpectralField& field, bool padded) {
  const SpectralGrid& g = field.grid();
  const int pt = padded ? g.pad_theta() : g.n_theta();
  const int pz = padded ? g.pad_z() : g.n_z();
  const int nt = g.n_theta(), nz = g.n_z(), nr = g.n_r(), nc = field.components();
  PhysicalField out;
  out.components = nc;
  out.n_theta = pt;
  out.n_z = pz;
  out.n_r = nr;
  out.data.assign(static_cast<std::size_t>(nc) * pt * pz * nr, 0.0);

  const Mat& st = g.theta_synthesis(pt);
  const Mat& sz = g.z_synthesis(pz);
  parallel_for(nc * nr, [&](int slot) {
    const int c = slot / nr, i = slot % nr;
    Mat modes(nt, nz);
    for (int mi = 0; mi < nt; ++mi)
      for (int ki = 0; ki < nz; ++ki) modes(mi, ki) = field.at(c, mi, ki, i);
    const Mat phys = st * modes * sz.transpose();
    PhysicalField& target = out;
    for (int j = 0; j < pt; ++j)
      for (int l = 0; l < pz; ++l) target.at(c, j, l, i) = phys(j, l).real();
  });
  return out;
}

SpectralField from_physical(const PhysicalField& phys, const SpectralGrid* grid, FieldKind kind) {
  const SpectralGrid& g = *grid;
  const int nt = g.n_theta(), nz = g.n_z(), nr = g.n_r();
  require(phys.components == component_count(kind) && phys.n_r == nr,
          "from_physical: shape mismatch");
  SpectralField out(grid, kind);
  const Mat& at_mat = g.theta_analysis(phys.n_theta);
  const Mat& az = g.z_analysis(phys.n_z);
  parallel_for(phys.components * nr, [&](int slot) {
    const int c = slot / nr, i = slot % nr;
    Mat u(phys.n_theta, phys.n_z);
    for (int j = 0; j < phys.n_theta; ++j)
      for (int l = 0; l < phys.n_z; ++l) u(j, l) = phys.at(c, j, l, i);
    const Mat modes = at_mat * u * az.transpose();
    for (int mi = 0; mi < nt; ++mi)
      for (int ki = 0; ki < nz; ++ki) out.at(c, mi, ki, i) = modes(mi, ki);
  });
  return out;
}

Real linf_distance(const SpectralField& a, const SpectralField& b) {
  ensure(a.raw().size() == b.raw().size(), "linf_distance: shape mismatch");
  Real err = 0.0;
  for (std::size_t i = 0; i < a.raw().size(); ++i)
    err = std::max(err, std::abs(a.raw()[i] - b.raw()[i]));
  return err;
}

Real linf_size(const SpectralField& a) {
  Real s = 0.0;
  for (const auto& v : a.raw()) s = std::max(s, std::abs(v));
  return s;
}

SpectralField transfer_modes(const SpectralField& f, const SpectralGrid* target) {
  const SpectralGrid& g = f.grid();
  require(target->n_r() == g.n_r() && target->period() == g.period(),
          "transfer_modes: radial nodes and period must match");
  SpectralField out(target, f.kind());
  for (int c = 0; c < f.components(); ++c)
    for (int mi = 0; mi < g.n_theta(); ++mi) {
      const int m = g.theta_mode(mi);
      if (!target->theta_in_band(m)) continue;
      for (int ki = 0; ki < g.n_z(); ++ki) {
        const int k = g.z_mode(ki);
        if (!target->z_in_band(k)) continue;
        out.profile(c, target->theta_index(m), target->z_index(k)) = f.profile(c, mi, ki);
      }
    }
  return out;
}

SpectralField AnalyticBundle::instantiate(const SpectralGrid& grid) const {
  SpectralField out(&grid, kind);
  for (const auto& term : terms) {
    require(grid.theta_in_band(term.m) && std::abs(term.m) < grid.n_theta() / 2,
            "bundle: angular mode outside grid band");
    require(grid.z_in_band(term.k) && std::abs(term.k) < grid.n_z() / 2,
            "bundle: axial mode outside grid band");
    const int mi = grid.theta_index(term.m), ki = grid.z_index(term.k);
    auto prof = out.profile(term.c, mi, ki);
    for (int i = 0; i < grid.n_r(); ++i) prof[i] += poly_eval(term.poly, grid.radial_nodes()[i]);
  }
  return out;
}

namespace {

/// Even polynomial factor scaled for smooth decay across modes and degrees.
Poly draw_even_poly(const CounterRng& rng, std::uint64_t base, int degree_count, int pole,
                    Real amplitude, bool real_only) {
  Poly poly(pole + 2 * degree_count - 1, Complex(0, 0));
  for (int j = 0; j < degree_count; ++j) {
    Complex a = real_only ? Complex(rng.normal(base + j), 0) : rng.cnormal(base + j);
    poly[pole + 2 * j] = amplitude * std::pow(0.5, j) * a;
  }
  return poly;
}

std::uint64_t term_counter(int m, int k, int lane) {
  return (static_cast<std::uint64_t>(m + 64) * 131 + (k + 64)) * 8 + lane;
}

void push_term(AnalyticBundle& b, int c, int m, int k, const Poly& poly) {
  if (poly.empty()) return;
  b.terms.push_back({c, m, k, poly});
}

}  // namespace

AnalyticBundle random_scalar_bundle(const BundleShape& shape, const CounterRng& rng) {
  AnalyticBundle b;
  b.kind = FieldKind::scalar;
  for (int m = 0; m <= shape.max_abs_m; ++m)
    for (int k = -shape.max_abs_k; k <= shape.max_abs_k; ++k) {
      if (m == 0 && k < 0) continue;
      const bool self = (m == 0 && k == 0);
      const Real amp = shape.amplitude * std::pow(0.7, std::abs(m) + std::abs(k));
      const Poly poly = draw_even_poly(rng, term_counter(m, k, 0) * 64, shape.radial_degree, m,
                                       amp, self);
      push_term(b, 0, m, k, poly);
      if (!self) push_term(b, 0, -m, -k, poly_conj(poly));
    }
  return b;
}

AnalyticBundle random_vector_bundle(const BundleShape& shape, const CounterRng& rng) {
  AnalyticBundle b;
  b.kind = FieldKind::vector3;
  const Complex half(0.5, 0), mhalf_i(0, -0.5);
  for (int m = 0; m <= shape.max_abs_m; ++m)
    for (int k = -shape.max_abs_k; k <= shape.max_abs_k; ++k) {
      if (m == 0 && k < 0) continue;
      const bool self = (m == 0 && k == 0);
      const Real amp = shape.amplitude * std::pow(0.7, std::abs(m) + std::abs(k));
      // Spin profiles: u^r + i u^theta feeds u_x + i u_y at angular order
      // m + 1, so it carries pole |m + 1|; u^r - i u^theta carries |m - 1|.
      Poly plus = draw_even_poly(rng, term_counter(m, k, 1) * 64, shape.radial_degree,
                                 std::abs(m + 1), amp, false);
      Poly minus = self ? poly_conj(plus)
                        : draw_even_poly(rng, term_counter(m, k, 2) * 64, shape.radial_degree,
                                         std::abs(m - 1), amp, false);
      const Poly ur = poly_scale(poly_add(plus, minus), half);
      const Poly ut = poly_scale(poly_add(plus, poly_scale(minus, Complex(-1, 0))), mhalf_i);
      const Poly uz = draw_even_poly(rng, term_counter(m, k, 3) * 64, shape.radial_degree, m,
                                     amp, self);
      push_term(b, 0, m, k, ur);
      push_term(b, 1, m, k, ut);
      push_term(b, 2, m, k, uz);
      if (!self) {
        push_term(b, 0, -m, -k, poly_conj(ur));
        push_term(b, 1, -m, -k, poly_conj(ut));
        push_term(b, 2, -m, -k, poly_conj(uz));
      }
    }
  return b;
}

AnalyticBundle random_tensor_bundle(const BundleShape& shape, const CounterRng& rng, int rank) {
  AnalyticBundle b;
  b.kind = FieldKind::tensor9;
  const int half_m = std::max(1, shape.max_abs_m / 2);
  const int half_k = std::max(1, shape.max_abs_k / 2);
  for (int t = 0; t < rank; ++t) {
    // Two single-mode real vector factors; the outer product stays pole regular.
    auto draw_factor = [&](int lane) {
      const std::uint64_t base = (static_cast<std::uint64_t>(t) * 2 + lane) * 4096 + 1;
      const int m = static_cast<int>(rng.uniform(base) * (2 * half_m + 1)) - half_m;
      const int k = static_cast<int>(rng.uniform(base + 1) * (2 * half_k + 1)) - half_k;
      AnalyticBundle v;
      v.kind = FieldKind::vector3;
      Poly plus = draw_even_poly(rng, base * 64, shape.radial_degree, std::abs(m + 1),
                                 shape.amplitude, false);
      Poly minus = draw_even_poly(rng, base * 64 + 32, shape.radial_degree, std::abs(m - 1),
                                  shape.amplitude, false);
      if (m == 0 && k == 0) minus = poly_conj(plus);
      const Poly ur = poly_scale(poly_add(plus, minus), Complex(0.5, 0));
      const Poly ut = poly_scale(poly_add(plus, poly_scale(minus, Complex(-1, 0))),
                                 Complex(0, -0.5));
      const Poly uz = draw_even_poly(rng, base * 64 + 48, shape.radial_degree, std::abs(m),
                                     shape.amplitude, m == 0 && k == 0);
      push_term(v, 0, m, k, ur);
      push_term(v, 1, m, k, ut);
      push_term(v, 2, m, k, uz);
      if (!(m == 0 && k == 0)) {
        push_term(v, 0, -m, -k, poly_conj(ur));
        push_term(v, 1, -m, -k, poly_conj(ut));
        push_term(v, 2, -m, -k, poly_conj(uz));
      }
      return v;
    };
    const AnalyticBundle u = draw_factor(0);
    const AnalyticBundle v = draw_factor(1);
    for (const auto& a : u.terms)
      for (const auto& c : v.terms)
        push_term(b, 3 * a.c + c.c, a.m + c.m, a.k + c.k, poly_mul(a.poly, c.poly));
  }
  return b;
}

}  // namespace cylstokes
