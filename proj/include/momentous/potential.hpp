#pragma once

#include <array>
#include <utility>

#include "momentous/jet.hpp"

namespace momentous {

/// Highest derivative order supplied by BarrierPotential::derivative.
inline constexpr int kMaxDerivativeOrder = 8;

/// Dimensionless ratio V0 / E of barrier height to particle energy.
struct EnergyRatio {
  double gamma;

  bool classically_forbidden() const { return gamma >= 1.0; }
};

/// Smoothed barrier V(q) = alpha / (q^{2n} + a^{2n}).
///
/// Larger n sharpens the profile towards a rectangular barrier of half-width a.
/// All derivatives are exact: they come from truncated Taylor arithmetic on the
/// rational expression, never from differencing.
class BarrierPotential {
 public:
  /// Throws InvalidArgument unless a > 0, alpha != 0 and n >= 1.
  BarrierPotential(double alpha, double a, int n);

  double alpha() const { return alpha_; }
  double width() const { return a_; }
  int exponent() const { return n_; }

  /// Barrier height V(0) = alpha / a^{2n}.
  double height() const { return height_; }

  double evaluate(double q) const;

  /// k-th derivative at q for 0 <= k <= kMaxDerivativeOrder; throws UnsupportedOrder otherwise.
  double derivative(double q, int k) const;

  /// V, V', ..., V^(K) at q from a single Taylor expansion.
  std::array<double, kMaxDerivativeOrder + 1> derivatives(double q) const;

  /// Taylor jet of V around q.
  Jet<kMaxDerivativeOrder> jet(double q) const;

  /// gamma = V0 / E; throws InvalidEnergy for E <= 0.
  EnergyRatio gamma(double energy) const;

  /// Classical return points (-x, +x) with V(+-x) = E.
  /// Throws InvalidEnergy for E <= 0 and NoTurningPoint when E exceeds the barrier.
  std::pair<double, double> turning_points(double energy) const;

  friend bool operator==(const BarrierPotential&, const BarrierPotential&) = default;

 private:
  double alpha_;
  double a_;
  int n_;
  double a2n_;
  double height_;
};

}  // namespace momentous
