#pragma once
// Independent reference computations used by the tests. None of these touch the jet arithmetic.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace oracle {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Quad precision (GCC extension) keeps fourth differences far above roundoff.
using Real = __float128;

inline Real ipow(Real x, int k) {
  Real r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// k-th central difference quotient of f at x with step h (second-order accurate).
inline Real central_difference(const std::function<Real(Real)>& f, Real x, int k, Real h) {
  Real s = 0;
  for (int j = 0; j <= k; ++j) {
    const Real sign = (j % 2 == 0) ? 1 : -1;
    s += sign * static_cast<Real>(binomial(k, j)) * f(static_cast<Real>(x) + (static_cast<Real>(k) / 2 - j) * h);
  }
  return s / ipow(h, k);
}

// Richardson extrapolation of central differences over h, h/2, ..., h/2^(levels-1).
// Evaluated in extended precision so that fourth differences keep enough digits.
inline double richardson_derivative(const std::function<Real(Real)>& f, double x, int k, double h, int levels = 3) {
  std::vector<Real> table;
  for (int i = 0; i < levels; ++i) table.push_back(central_difference(f, x, k, static_cast<Real>(h) / ipow(2, i)));
  for (int col = 1; col < levels; ++col) {
    const Real factor = ipow(4, col);
    for (int i = levels - 1; i >= col; --i) table[i] = (factor * table[i] - table[i - 1]) / (factor - 1);
  }
  return static_cast<double>(table.back());
}

// Direct barrier formula with plain pow, for cross-checks.
inline double barrier(double alpha, double a, int n, double q) {
  return alpha / (std::pow(q, 2 * n) + std::pow(a, 2 * n));
}

inline Real barrier_quad(double alpha, double a, int n, Real q) {
  return static_cast<Real>(alpha) / (ipow(q, 2 * n) + ipow(static_cast<Real>(a), 2 * n));
}

// Root of V(x) = E on (0, 2a) by bisection, V decreasing there.
inline double bisect_turning_point(double alpha, double a, int n, double energy) {
  double lo = 0.0, hi = 2.0 * a;
  while (barrier(alpha, a, n, hi) > energy) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (barrier(alpha, a, n, mid) > energy) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
