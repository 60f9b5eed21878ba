#pragma once

/**
 * Spectral fields on the periodized cylinder.
 *
 * Coefficients are indexed (component, m, k, radial) with the radial profile
 * contiguous. Components are cylindrical-frame values: a vector3 stores
 * (u^r, u^theta, u^z); a tensor9 stores T[row][col] at component 3*row + col,
 * where divergence contracts the second (col) index. Real physical fields
 * satisfy coeff(c, m, k, .) = conj(coeff(c, -m, -k, .)).
 *
 * The pole condition is a parity statement: the profile of component c at
 * angular mode m is even or odd under r -> -r according to (-1)^(m + n_h),
 * n_h = number of r/theta indices in the component label.
 */

#include <vector>

#include "core/common.hpp"
#include "core/grid.hpp"
#include "core/rng.hpp"

namespace cylstokes {

enum class FieldKind { scalar, vector3, tensor9 };

inline int component_count(FieldKind kind) {
  switch (kind) {
    case FieldKind::scalar: return 1;
    case FieldKind::vector3: return 3;
    default: return 9;
  }
}

/// Number of horizontal (r or theta) indices in component c of a field kind.
int horizontal_rank(FieldKind kind, int c);

/// Radial parity of component c at angular mode m.
Parity component_parity(FieldKind kind, int c, int m);

class SpectralField {
 public:
  SpectralField(const SpectralGrid* grid, FieldKind kind);

  const SpectralGrid& grid() const { return *grid_; }
  const SpectralGrid* grid_ptr() const { return grid_; }
  FieldKind kind() const { return kind_; }
  int components() const { return components_; }

  Complex& at(int c, int mi, int ki, int i) { return data_[index(c, mi, ki, i)]; }
  const Complex& at(int c, int mi, int ki, int i) const { return data_[index(c, mi, ki, i)]; }

  Eigen::Map<Vec> profile(int c, int mi, int ki) {
    return Eigen::Map<Vec>(data_.data() + index(c, mi, ki, 0), grid_->n_r());
  }
  Eigen::Map<const Vec> profile(int c, int mi, int ki) const {
    return Eigen::Map<const Vec>(data_.data() + index(c, mi, ki, 0), grid_->n_r());
  }

  std::vector<Complex>& raw() { return data_; }
  const std::vector<Complex>& raw() const { return data_; }

  void set_zero();
  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(Complex s);

  /// Max deviation from conjugate symmetry, relative to the max coefficient.
  Real hermitian_error() const;
  /// Project onto the conjugate-symmetric part (pairs averaged).
  void make_hermitian();

  std::size_t index(int c, int mi, int ki, int i) const {
    return ((static_cast<std::size_t>(c) * grid_->n_theta() + mi) * grid_->n_z() + ki) *
               grid_->n_r() + i;
  }

 private:
  const SpectralGrid* grid_;
  FieldKind kind_;
  int components_;
  std::vector<Complex> data_;
};

/// Physical samples (component, theta_j, z_l, r_i) on an n_theta_phys x n_z_phys grid.
struct PhysicalField {
  int components = 0;
  int n_theta = 0;
  int n_z = 0;
  int n_r = 0;
  std::vector<Real> data;

  Real& at(int c, int j, int l, int i) {
    return data[((static_cast<std::size_t>(c) * n_theta + j) * n_z + l) * n_r + i];
  }
  Real at(int c, int j, int l, int i) const {
    return data[((static_cast<std::size_t>(c) * n_theta + j) * n_z + l) * n_r + i];
  }
};

/// Synthesize physical samples; padded=true uses the 3/2 dealiasing grid.
PhysicalField to_physical(const SpectralField& field, bool padded = false);

/// Analyze physical samples back to spectral coefficients (exact truncation).
SpectralField from_physical(const PhysicalField& phys, const SpectralGrid* grid, FieldKind kind);

Real linf_distance(const SpectralField& a, const SpectralField& b);
Real linf_size(const SpectralField& a);

/// Copy the (m, k) modes shared with the target band onto another grid with the
/// same radial nodes and period; out-of-band modes are dropped, new ones zero.
SpectralField transfer_modes(const SpectralField& f, const SpectralGrid* target);

/**
 * Grid-independent random smooth field: a finite list of single-mode terms with
 * polynomial radial profiles r^j restricted to the pole-regular parity class.
 * Instantiating the same bundle on two grids yields the same continuum field,
 * which is what refinement-stability checks compare.
 */
struct AnalyticBundle {
  struct Term {
    int c = 0;
    int m = 0;
    int k = 0;
    std::vector<Complex> poly;  // coefficient of r^j at position j
  };
  FieldKind kind = FieldKind::scalar;
  std::vector<Term> terms;

  SpectralField instantiate(const SpectralGrid& grid) const;
};

struct BundleShape {
  int max_abs_m = 3;
  int max_abs_k = 3;
  int radial_degree = 4;  // even-polynomial degree count on top of the pole factor
  Real amplitude = 1.0;
};

AnalyticBundle random_scalar_bundle(const BundleShape& shape, const CounterRng& rng);
AnalyticBundle random_vector_bundle(const BundleShape& shape, const CounterRng& rng);
/// Sum of rank-one outer products of single-mode vector terms (pole regular by construction).
AnalyticBundle random_tensor_bundle(const BundleShape& shape, const CounterRng& rng, int rank = 3);

}  // namespace cylstokes
