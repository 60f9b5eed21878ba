#pragma once

/**
 * Small helpers for radial polynomials sum_j a[j] r^j used by analytic bundles
 * and manufactured solutions. Division by r demands the corresponding low-order
 * coefficients vanish, which is exactly the pole-regularity bookkeeping.
 */

#include <vector>

#include "core/common.hpp"

namespace cylstokes {

using Poly = std::vector<Complex>;

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), Complex(0, 0));
  for (std::size_t j = 0; j < a.size(); ++j) out[j] += a[j];
  for (std::size_t j = 0; j < b.size(); ++j) out[j] += b[j];
  return out;
}

inline Poly poly_scale(const Poly& a, Complex s) {
  Poly out(a);
  for (auto& v : out) v *= s;
  return out;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, Complex(0, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline Poly poly_deriv(const Poly& a) {
  if (a.size() <= 1) return {};
  Poly out(a.size() - 1);
  for (std::size_t j = 1; j < a.size(); ++j) out[j - 1] = static_cast<Real>(j) * a[j];
  return out;
}

/// Multiply by r^s; for negative s the discarded coefficients must be zero.
inline Poly poly_shift(const Poly& a, int s) {
  if (a.empty()) return {};
  if (s >= 0) {
    Poly out(a.size() + s, Complex(0, 0));
    for (std::size_t j = 0; j < a.size(); ++j) out[j + s] = a[j];
    return out;
  }
  const int drop = -s;
  Real scale = 0.0;
  for (const auto& v : a) scale = std::max(scale, std::abs(v));
  for (int j = 0; j < drop && j < static_cast<int>(a.size()); ++j)
    ensure(std::abs(a[j]) <= 1e-13 * std::max(scale, 1.0), "poly_shift: division by r of irregular profile");
  if (static_cast<int>(a.size()) <= drop) return {};
  return Poly(a.begin() + drop, a.end());
}

inline Complex poly_eval(const Poly& a, Real r) {
  Complex acc(0, 0);
  for (std::size_t j = a.size(); j-- > 0;) acc = acc * r + a[j];
  return acc;
}

inline Poly poly_conj(const Poly& a) {
  Poly out(a);
  for (auto& v : out) v = std::conj(v);
  return out;
}

/// Scalar Laplacian at angular order mu: f'' + f'/r - mu^2 f / r^2 on pole-regular polys.
inline Poly poly_laplacian(const Poly& a, int mu) {
  Poly out;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const Real jj = static_cast<Real>(j);
    const Real factor = jj * jj - static_cast<Real>(mu) * mu;
    if (factor == 0.0 || a[j] == Complex(0, 0)) continue;
    const int pos = static_cast<int>(j) - 2;
    ensure(pos >= 0, "poly_laplacian: profile not pole regular for this order");
    if (static_cast<int>(out.size()) <= pos) out.resize(pos + 1, Complex(0, 0));
    out[pos] += factor * a[j];
  }
  return out;
}

}  // namespace cylstokes
