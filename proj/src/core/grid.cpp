#include "core/grid.hpp"

#include <cmath>
#include <functional>

namespace cylstokes {

namespace {

/// Full Chebyshev-Gauss-Lobatto differentiation matrix on cos(j pi / (n-1)), j = 0..n-1.
RealMat full_cheb_d(int n) {
  RealMat d(n, n);
  RealVec x(n), c(n);
  for (int j = 0; j < n; ++j) {
    x[j] = std::cos(kPi * j / (n - 1));
    c[j] = (j == 0 || j == n - 1) ? 2.0 : 1.0;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Real sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = (c[i] / c[j]) * sign / (x[i] - x[j]);
    }
  }
  for (int i = 0; i < n; ++i) {
    Real s = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) s += d(i, j);
    d(i, i) = -s;
  }
  return d;
}

/// Restriction of a full-grid operator to positive nodes for a given input parity.
RealMat fold(const RealMat& full, int n_r, Real sigma) {
  // Positive nodes are full indices 0..n_r-1 in descending order; output uses
  // increasing-r indexing i -> full index n_r-1-i, reflection J -> 2 n_r - 1 - J.
  const int n_full = 2 * n_r;
  RealMat out(n_r, n_r);
  for (int a = 0; a < n_r; ++a) {
    const int ia = n_r - 1 - a;
    for (int b = 0; b < n_r; ++b) {
      const int jb = n_r - 1 - b;
      out(a, b) = full(ia, jb) + sigma * full(ia, n_full - 1 - jb);
    }
  }
  return out;
}

/// int_0^1 T_n(t) dt in closed form.
Real cheb_integral(int n) {
  if (n == 0) return 1.0;
  if (n == 1) return 0.5;
  const Real at_one = -1.0 / (static_cast<Real>(n) * n - 1.0);
  if (n % 2 == 0) return at_one;
  const Real sign = ((n + 1) / 2 % 2 == 0) ? 1.0 : -1.0;
  return at_one - sign * static_cast<Real>(n) / (static_cast<Real>(n) * n - 1.0);
}

/// int_0^1 t T_k(t) dt via t T_k = (T_{k+1} + T_{|k-1|}) / 2.
Real cheb_moment(int k) {
  if (k == 0) return cheb_integral(1);
  return 0.5 * (cheb_integral(k + 1) + cheb_integral(k - 1));
}

Mat dft_synthesis(int n_phys, int n_modes, const std::function<int(int)>& mode_of) {
  Mat s(n_phys, n_modes);
  for (int j = 0; j < n_phys; ++j) {
    const Real angle = 2.0 * kPi * j / n_phys;
    for (int mi = 0; mi < n_modes; ++mi) {
      const Real phase = angle * mode_of(mi);
      s(j, mi) = Complex(std::cos(phase), std::sin(phase));
    }
  }
  return s;
}

}  // namespace

SpectralGrid::SpectralGrid(int n_r, int n_theta, int n_z, Real period)
    : n_r_(n_r), n_theta_(n_theta), n_z_(n_z), period_(period) {
  require(n_r >= 8 && n_r % 2 == 0, "grid: n_r must be even and >= 8");
  require(n_theta >= 8 && n_theta % 2 == 0, "grid: n_theta must be even and >= 8");
  require(n_z >= 8 && n_z % 2 == 0, "grid: n_z must be even and >= 8");
  require(period > 0.0, "grid: period must be positive");

  const int n_full = 2 * n_r;
  nodes_.resize(n_r);
  inv_r_.resize(n_r);
  for (int i = 0; i < n_r; ++i) {
    nodes_[i] = std::cos(kPi * (n_r - 1 - i) / (n_full - 1));
    inv_r_[i] = 1.0 / nodes_[i];
  }
  ensure(nodes_[0] > 0.0 && nodes_[n_r - 1] == 1.0, "grid: radial node layout broken");

  const RealMat d_full = full_cheb_d(n_full);
  const RealMat d2_full = d_full * d_full;
  d1_even_ = fold(d_full, n_r, 1.0);
  d1_odd_ = fold(d_full, n_r, -1.0);
  d2_even_ = fold(d2_full, n_r, 1.0);
  d2_odd_ = fold(d2_full, n_r, -1.0);
  d1c_even_ = d1_even_.cast<Complex>();
  d1c_odd_ = d1_odd_.cast<Complex>();
  d2c_even_ = d2_even_.cast<Complex>();
  d2c_odd_ = d2_odd_.cast<Complex>();

  // Weights from the even-Chebyshev moment system sum_i w_i T_2j(r_i) = int_0^1 T_2j r dr.
  RealMat vand(n_r, n_r);
  RealVec rhs(n_r);
  for (int i = 0; i < n_r; ++i) {
    Real t_prev = 1.0;                       // T_0
    Real t_curr = 2.0 * nodes_[i] * nodes_[i] - 1.0;  // T_2
    vand(0, i) = t_prev;
    for (int j = 1; j < n_r; ++j) {
      vand(j, i) = t_curr;
      // T_{2j+2}(r) = 2 T_2(r) T_2j(r) - T_{2j-2}(r)
      const Real t_next = 2.0 * (2.0 * nodes_[i] * nodes_[i] - 1.0) * t_curr - t_prev;
      t_prev = t_curr;
      t_curr = t_next;
    }
  }
  for (int j = 0; j < n_r; ++j) rhs[j] = cheb_moment(2 * j);
  weights_ = vand.fullPivLu().solve(rhs);
  for (int i = 0; i < n_r; ++i)
    ensure(weights_[i] > 0.0, "grid: nonpositive quadrature weight");

  auto theta_mode_fn = [this](int mi) { return theta_mode(mi); };
  auto z_mode_fn = [this](int ki) { return z_mode(ki); };
  for (int p : {n_theta_, 3 * n_theta_ / 2}) {
    theta_syn_[p] = dft_synthesis(p, n_theta_, theta_mode_fn);
    theta_ana_[p] = theta_syn_[p].adjoint() / static_cast<Real>(p);
  }
  for (int p : {n_z_, 3 * n_z_ / 2}) {
    z_syn_[p] = dft_synthesis(p, n_z_, z_mode_fn);
    z_ana_[p] = z_syn_[p].adjoint() / static_cast<Real>(p);
  }
}

const Mat& SpectralGrid::theta_synthesis(int n_phys) const {
  auto it = theta_syn_.find(n_phys);
  ensure(it != theta_syn_.end(), "grid: unsupported theta physical size");
  return it->second;
}

const Mat& SpectralGrid::theta_analysis(int n_phys) const {
  auto it = theta_ana_.find(n_phys);
  ensure(it != theta_ana_.end(), "grid: unsupported theta physical size");
  return it->second;
}

const Mat& SpectralGrid::z_synthesis(int n_phys) const {
  auto it = z_syn_.find(n_phys);
  ensure(it != z_syn_.end(), "grid: unsupported z physical size");
  return it->second;
}

const Mat& SpectralGrid::z_analysis(int n_phys) const {
  auto it = z_ana_.find(n_phys);
  ensure(it != z_ana_.end(), "grid: unsupported z physical size");
  return it->second;
}

}  // namespace cylstokes
