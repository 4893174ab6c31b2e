#pragma once

#include <array>
#include <cstddef>

namespace momentous {

// Truncated Taylor series c[0] + c[1] h + ... + c[N] h^N around a fixed point.
// Coefficients are normalized (c[k] = f^(k) / k!).
template <std::size_t N>
class Jet {
 public:
  using Coeffs = std::array<double, N + 1>;

  constexpr Jet() : c_{} {}
  constexpr explicit Jet(double constant) : c_{} { c_[0] = constant; }

  // Identity function x evaluated at x0.
  static constexpr Jet variable(double x0) {
    Jet j(x0);
    if constexpr (N >= 1) j.c_[1] = 1.0;
    return j;
  }

  constexpr double operator[](std::size_t k) const { return c_[k]; }
  constexpr double& operator[](std::size_t k) { return c_[k]; }
  constexpr const Coeffs& coeffs() const { return c_; }

  friend constexpr Jet operator+(Jet lhs, const Jet& rhs) {
    for (std::size_t k = 0; k <= N; ++k) lhs.c_[k] += rhs.c_[k];
    return lhs;
  }

  friend constexpr Jet operator*(double s, Jet j) {
    for (auto& v : j.c_) v *= s;
    return j;
  }

  friend constexpr Jet operator*(const Jet& lhs, const Jet& rhs) {
    Jet out;
    for (std::size_t k = 0; k <= N; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j <= k; ++j) acc += lhs.c_[j] * rhs.c_[k - j];
      out.c_[k] = acc;
    }
    return out;
  }

  // 1 / f; requires f(x0) != 0.
  constexpr Jet reciprocal() const {
    Jet out;
    const double inv0 = 1.0 / c_[0];
    out.c_[0] = inv0;
    for (std::size_t k = 1; k <= N; ++k) {
      double acc = 0.0;
      for (std::size_t j = 1; j <= k; ++j) acc += c_[j] * out.c_[k - j];
      out.c_[k] = -acc * inv0;
    }
    return out;
  }

  // k-th derivative f^(k)(x0) = k! c[k].
  constexpr double derivative(std::size_t k) const {
    double fact = 1.0;
    for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
    return fact * c_[k];
  }

 private:
  Coeffs c_;
};

// x^e for a non-negative integer exponent, expanded exactly by the binomial theorem.
template <std::size_t N>
constexpr Jet<N> monomial_jet(double x0, unsigned e) {
  Jet<N> out;
  double binom = 1.0;  // C(e, k)
  for (std::size_t k = 0; k <= N && k <= e; ++k) {
    double pw = 1.0;
    for (unsigned i = 0; i < e - k; ++i) pw *= x0;
    out[k] = binom * pw;
    binom = binom * static_cast<double>(e - k) / static_cast<double>(k + 1);
  }
  return out;
}

}  // namespace momentous
