#pragma once

/**
 * Independent Bessel-zero oracle for spectrum checks.
 *
 * Roots are located by sign-change scanning plus bisection on
 * std::cyl_bessel_j, with a short Newton polish. This file is the reference
 * the operator spectra are judged against; it deliberately shares no code
 * with the library.
 */

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double bessel_j(int m, double x) { return std::cyl_bessel_j(m, x); }

inline double bessel_j_prime(int m, double x) {
  if (m == 0) return -std::cyl_bessel_j(1, x);
  return 0.5 * (std::cyl_bessel_j(m - 1, x) - std::cyl_bessel_j(m + 1, x));
}

inline double bessel_j_second(int m, double x) {
  // J_m'' = ((m^2 / x^2) - 1) J_m - J_m' / x.
  const double mm = static_cast<double>(m);
  return (mm * mm / (x * x) - 1.0) * bessel_j(m, x) - bessel_j_prime(m, x) / x;
}

template <typename F>
double bisect_root(F f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// First `count` positive zeros of J_m.
inline std::vector<double> bessel_zeros(int m, int count) {
  std::vector<double> roots;
  const double step = 0.02;
  double x = 0.05;
  double fx = bessel_j(m, x);
  while (static_cast<int>(roots.size()) < count) {
    const double y = x + step;
    const double fy = bessel_j(m, y);
    if ((fx < 0.0) != (fy < 0.0)) {
      double r = bisect_root([m](double t) { return bessel_j(m, t); }, x, y);
      for (int it = 0; it < 4; ++it) r -= bessel_j(m, r) / bessel_j_prime(m, r);
      roots.push_back(r);
    }
    x = y;
    fx = fy;
    if (x > 1e4) throw std::runtime_error("bessel_zeros: scan overran");
  }
  return roots;
}

/// First `count` positive zeros of J_m' (x = 0 is never counted).
inline std::vector<double> bessel_prime_zeros(int m, int count) {
  std::vector<double> roots;
  const double step = 0.02;
  double x = 0.05;
  double fx = bessel_j_prime(m, x);
  while (static_cast<int>(roots.size()) < count) {
    const double y = x + step;
    const double fy = bessel_j_prime(m, y);
    if ((fx < 0.0) != (fy < 0.0)) {
      double r = bisect_root([m](double t) { return bessel_j_prime(m, t); }, x, y);
      for (int it = 0; it < 4; ++it) r -= bessel_j_prime(m, r) / bessel_j_second(m, r);
      roots.push_back(r);
    }
    x = y;
    fx = fy;
    if (x > 1e4) throw std::runtime_error("bessel_prime_zeros: scan overran");
  }
  return roots;
}

// Frozen literature values used to validate the oracle itself.
constexpr double kJ01 = 2.404825557695773;
constexpr double kJ11 = 3.831705970207512;
constexpr double kJ21 = 5.135622301840683;
constexpr double kJp01 = 3.831705970207512;
constexpr double kJp11 = 1.841183781340659;
constexpr double kJp21 = 3.054236928227140;

}  // namespace oracle
