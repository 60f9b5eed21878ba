#include "core/diffops.hpp"

#include "core/parallel.hpp"

namespace cylstokes {

namespace {

using ProfileOp = std::function<void(const SpectralGrid&, int m, Real xi, const SpectralField&,
                                     SpectralField&, int mi, int ki)>;

void for_each_mode(const SpectralGrid& g, const std::function<void(int mi, int ki)>& body) {
  parallel_for(g.n_theta() * g.n_z(), [&](int slot) {
    body(slot / g.n_z(), slot % g.n_z());
  });
}

inline Vec diag_inv_r(const SpectralGrid& g, const Eigen::Map<const Vec>& p) {
  return g.inv_r().cast<Complex>().cwiseProduct(Vec(p));
}

}  // namespace

SpectralField gradient(const SpectralField& f) {
  const SpectralGrid& g = f.grid();
  if (f.kind() == FieldKind::scalar) {
    SpectralField out(f.grid_ptr(), FieldKind::vector3);
    for_each_mode(g, [&](int mi, int ki) {
      const int m = g.theta_mode(mi);
      const Complex im(0, m), ixi(0, g.xi(ki));
      const auto p = f.profile(0, mi, ki);
      out.profile(0, mi, ki) = g.d1c(scalar_parity(m)) * p;
      out.profile(1, mi, ki) = im * diag_inv_r(g, p);
      out.profile(2, mi, ki) = ixi * Vec(p);
    });
    return out;
  }
  require(f.kind() == FieldKind::vector3, "gradient: scalar or vector3 input only");
  SpectralField out(f.grid_ptr(), FieldKind::tensor9);
  for_each_mode(g, [&](int mi, int ki) {
    const int m = g.theta_mode(mi);
    const Complex im(0, m), ixi(0, g.xi(ki));
    const auto ur = f.profile(0, mi, ki), ut = f.profile(1, mi, ki), uz = f.profile(2, mi, ki);
    const Mat& dv = g.d1c(vector_parity(m));
    const Mat& ds = g.d1c(scalar_parity(m));
    out.profile(0, mi, ki) = dv * ur;
    out.profile(1, mi, ki) = im * diag_inv_r(g, ur) - diag_inv_r(g, ut);
    out.profile(2, mi, ki) = ixi * Vec(ur);
    out.profile(3, mi, ki) = dv * ut;
    out.profile(4, mi, ki) = im * diag_inv_r(g, ut) + diag_inv_r(g, ur);
    out.profile(5, mi, ki) = ixi * Vec(ut);
    out.profile(6, mi, ki) = ds * uz;
    out.profile(7, mi, ki) = im * diag_inv_r(g, uz);
    out.profile(8, mi, ki) = ixi * Vec(uz);
  });
  return out;
}

SpectralField divergence(const SpectralField& f) {
  const SpectralGrid& g = f.grid();
  if (f.kind() == FieldKind::vector3) {
    SpectralField out(f.grid_ptr(), FieldKind::scalar);
    for_each_mode(g, [&](int mi, int ki) {
      const int m = g.theta_mode(mi);
      const Complex im(0, m), ixi(0, g.xi(ki));
      const auto ur = f.profile(0, mi, ki), ut = f.profile(1, mi, ki), uz = f.profile(2, mi, ki);
      out.profile(0, mi, ki) = g.d1c(vector_parity(m)) * ur + diag_inv_r(g, ur) +
                               im * diag_inv_r(g, ut) + ixi * Vec(uz);
    });
    return out;
  }
  require(f.kind() == FieldKind::tensor9, "divergence: vector3 or tensor9 input only");
  SpectralField out(f.grid_ptr(), FieldKind::vector3);
  for_each_mode(g, [&](int mi, int ki) {
    const int m = g.theta_mode(mi);
    const Complex im(0, m), ixi(0, g.xi(ki));
    auto entry = [&](int row, int col) { return f.profile(3 * row + col, mi, ki); };
    auto dmat = [&](int row, int col) {
      return g.d1c(component_parity(FieldKind::tensor9, 3 * row + col, m));
    };
    out.profile(0, mi, ki) = dmat(0, 0) * entry(0, 0) + im * diag_inv_r(g, entry(0, 1)) +
                             ixi * Vec(entry(0, 2)) + diag_inv_r(g, entry(0, 0)) -
                             diag_inv_r(g, entry(1, 1));
    out.profile(1, mi, ki) = dmat(1, 0) * entry(1, 0) + im * diag_inv_r(g, entry(1, 1)) +
                             ixi * Vec(entry(1, 2)) + diag_inv_r(g, entry(1, 0)) +
                             diag_inv_r(g, entry(0, 1));
    out.profile(2, mi, ki) = dmat(2, 0) * entry(2, 0) + im * diag_inv_r(g, entry(2, 1)) +
                             ixi * Vec(entry(2, 2)) + diag_inv_r(g, entry(2, 0));
  });
  return out;
}

SpectralField curl(const SpectralField& f) {
  require(f.kind() == FieldKind::vector3, "curl: vector3 input only");
  const SpectralGrid& g = f.grid();
  SpectralField out(f.grid_ptr(), FieldKind::vector3);
  for_each_mode(g, [&](int mi, int ki) {
    const int m = g.theta_mode(mi);
    const Complex im(0, m), ixi(0, g.xi(ki));
    const auto ur = f.profile(0, mi, ki), ut = f.profile(1, mi, ki), uz = f.profile(2, mi, ki);
    out.profile(0, mi, ki) = im * diag_inv_r(g, uz) - ixi * Vec(ut);
    out.profile(1, mi, ki) = ixi * Vec(ur) - g.d1c(scalar_parity(m)) * uz;
    out.profile(2, mi, ki) =
        g.d1c(vector_parity(m)) * ut + diag_inv_r(g, ut) - im * diag_inv_r(g, ur);
  });
  return out;
}

SpectralField laplacian(const SpectralField& f) {
  const SpectralGrid& g = f.grid();
  require(f.kind() != FieldKind::tensor9, "laplacian: scalar or vector3 input only");
  SpectralField out(f.grid_ptr(), f.kind());
  for_each_mode(g, [&](int mi, int ki) {
    const int m = g.theta_mode(mi);
    const Real xi = g.xi(ki);
    const Real m2 = static_cast<Real>(m) * m;
    auto scalar_lap = [&](const Eigen::Map<const Vec>& p, Parity parity) -> Vec {
      Vec lap = g.d2c(parity) * p + g.inv_r().cast<Complex>().cwiseProduct(g.d1c(parity) * p);
      lap -= (m2 * g.inv_r().cwiseProduct(g.inv_r())).cast<Complex>().cwiseProduct(Vec(p));
      lap -= (xi * xi) * Vec(p);
      return lap;
    };
    if (f.kind() == FieldKind::scalar) {
      out.profile(0, mi, ki) = scalar_lap(f.profile(0, mi, ki), scalar_parity(m));
      return;
    }
    const auto ur = f.profile(0, mi, ki), ut = f.profile(1, mi, ki), uz = f.profile(2, mi, ki);
    const Vec inv_r2 = g.inv_r().cwiseProduct(g.inv_r()).cast<Complex>();
    const Complex titm(0, 2.0 * m);
    out.profile(0, mi, ki) = scalar_lap(ur, vector_parity(m)) - inv_r2.cwiseProduct(Vec(ur)) -
                             titm * inv_r2.cwiseProduct(Vec(ut));
    out.profile(1, mi, ki) = scalar_lap(ut, vector_parity(m)) - inv_r2.cwiseProduct(Vec(ut)) +
                             titm * inv_r2.cwiseProduct(Vec(ur));
    out.profile(2, mi, ki) = scalar_lap(uz, scalar_parity(m));
  });
  return out;
}

namespace {

/// Spin shift: out at mode m is built from in at mode m - dir (dir = +1 or -1),
/// with profile f' - dir * (m - dir) f / r. Out-of-band sources vanish.
SpectralField spin_derivative(const SpectralField& f, int c, int dir) {
  const SpectralGrid& g = f.grid();
  SpectralField out(f.grid_ptr(), FieldKind::scalar);
  for_each_mode(g, [&](int mi, int ki) {
    const int m_out = g.theta_mode(mi);
    const int m_src = m_out - dir;
    if (!g.theta_in_band(m_src)) return;
    const auto p = f.profile(c, g.theta_index(m_src), ki);
    const Parity parity = scalar_parity(m_src);
    Vec d = g.d1c(parity) * p;
    d -= static_cast<Real>(dir * m_src) * g.inv_r().cast<Complex>().cwiseProduct(Vec(p));
    out.profile(0, mi, ki) = d;
  });
  return out;
}

SpectralField combine(const SpectralField& a, Complex ca, const SpectralField& b, Complex cb) {
  SpectralField out = a;
  out *= ca;
  SpectralField t = b;
  t *= cb;
  out += t;
  return out;
}

/// (x, y) pair from (r-like, theta-like) components via e^{+-i theta} shifts.
std::pair<SpectralField, SpectralField> rotate_pair_to_cartesian(const SpectralField& f, int cr,
                                                                 int ct) {
  const SpectralGrid& g = f.grid();
  SpectralField plus(f.grid_ptr(), FieldKind::scalar);   // (f_r + i f_t) shifted up
  SpectralField minus(f.grid_ptr(), FieldKind::scalar);  // (f_r - i f_t) shifted down
  for_each_mode(g, [&](int mi, int ki) {
    const int m_out = g.theta_mode(mi);
    if (g.theta_in_band(m_out - 1)) {
      const int src = g.theta_index(m_out - 1);
      plus.profile(0, mi, ki) = Vec(f.profile(cr, src, ki)) + Complex(0, 1) * Vec(f.profile(ct, src, ki));
    }
    if (g.theta_in_band(m_out + 1)) {
      const int src = g.theta_index(m_out + 1);
      minus.profile(0, mi, ki) = Vec(f.profile(cr, src, ki)) - Complex(0, 1) * Vec(f.profile(ct, src, ki));
    }
  });
  SpectralField x = combine(plus, 0.5, minus, 0.5);
  SpectralField y = combine(plus, Complex(0, -0.5), minus, Complex(0, 0.5));
  return {std::move(x), std::move(y)};
}

SpectralField copy_component(const SpectralField& f, int c) {
  SpectralField out(f.grid_ptr(), FieldKind::scalar);
  const SpectralGrid& g = f.grid();
  for (int mi = 0; mi < g.n_theta(); ++mi)
    for (int ki = 0; ki < g.n_z(); ++ki) out.profile(0, mi, ki) = f.profile(c, mi, ki);
  return out;
}

}  // namespace

std::vector<SpectralField> cartesian_scalars(const SpectralField& f) {
  std::vector<SpectralField> stack;
  if (f.kind() == FieldKind::scalar) {
    stack.push_back(f);
    return stack;
  }
  require(f.kind() == FieldKind::vector3, "cartesian_scalars: tensor9 not supported");
  auto [x, y] = rotate_pair_to_cartesian(f, 0, 1);
  stack.push_back(std::move(x));
  stack.push_back(std::move(y));
  stack.push_back(copy_component(f, 2));
  return stack;
}

std::vector<SpectralField> cartesian_derivatives(const std::vector<SpectralField>& stack) {
  std::vector<SpectralField> out;
  out.reserve(stack.size() * 3);
  for (const auto& h : stack) {
    const SpectralGrid& g = h.grid();
    SpectralField dp = spin_derivative(h, 0, +1);
    SpectralField dm = spin_derivative(h, 0, -1);
    out.push_back(combine(dp, 0.5, dm, 0.5));
    out.push_back(combine(dp, Complex(0, -0.5), dm, Complex(0, 0.5)));
    SpectralField dz(h.grid_ptr(), FieldKind::scalar);
    for (int mi = 0; mi < g.n_theta(); ++mi)
      for (int ki = 0; ki < g.n_z(); ++ki)
        dz.profile(0, mi, ki) = Complex(0, g.xi(ki)) * Vec(h.profile(0, mi, ki));
    out.push_back(std::move(dz));
  }
  return out;
}

void accumulate_magnitude_squared(const SpectralField& f, bool padded, std::vector<Real>& acc) {
  const SpectralGrid& g = f.grid();
  const int pt = padded ? g.pad_theta() : g.n_theta();
  const int pz = padded ? g.pad_z() : g.n_z();
  const int nt = g.n_theta(), nz = g.n_z(), nr = g.n_r();
  const std::size_t need = static_cast<std::size_t>(pt) * pz * nr;
  if (acc.empty()) acc.assign(need, 0.0);
  ensure(acc.size() == need, "accumulate: buffer mismatch");
  const Mat& st = g.theta_synthesis(pt);
  const Mat& sz = g.z_synthesis(pz);
  for (int c = 0; c < f.components(); ++c) {
    parallel_for(nr, [&](int i) {
      Mat modes(nt, nz);
      for (int mi = 0; mi < nt; ++mi)
        for (int ki = 0; ki < nz; ++ki) modes(mi, ki) = f.at(c, mi, ki, i);
      const Mat phys = st * modes * sz.transpose();
      for (int j = 0; j < pt; ++j)
        for (int l = 0; l < pz; ++l)
          acc[(static_cast<std::size_t>(j) * pz + l) * nr + i] += std::norm(phys(j, l));
    });
  }
}

}  // namespace cylstokes
