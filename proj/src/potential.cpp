#include "momentous/potential.hpp"

#include <cmath>
#include <string>

#include "momentous/error.hpp"

namespace momentous {
namespace {

// q^{2n} through powers of q*q so that evaluate(q) and evaluate(-q) take identical paths.
double even_power(double q, int n) {
  const double q2 = q * q;
  double out = 1.0;
  for (int i = 0; i < n; ++i) out *= q2;
  return out;
}

}  // namespace

BarrierPotential::BarrierPotential(double alpha, double a, int n) : alpha_(alpha), a_(a), n_(n) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("potential: width a must be positive, got " + std::to_string(a));
  if (alpha == 0.0 || !std::isfinite(alpha)) throw InvalidArgument("potential: alpha must be finite and non-zero");
  if (n < 1) throw InvalidArgument("potential: exponent n must be >= 1, got " + std::to_string(n));
  a2n_ = even_power(a, n);
  height_ = alpha_ / a2n_;
}

double BarrierPotential::evaluate(double q) const { return alpha_ / (even_power(q, n_) + a2n_); }

Jet<kMaxDerivativeOrder> BarrierPotential::jet(double q) const {
  auto denom = monomial_jet<kMaxDerivativeOrder>(q, static_cast<unsigned>(2 * n_));
  denom[0] += a2n_;
  return alpha_ * denom.reciprocal();
}

double BarrierPotential::derivative(double q, int k) const {
  if (k < 0 || k > kMaxDerivativeOrder) {
    throw UnsupportedOrder("potential: derivative order " + std::to_string(k) + " outside [0, " +
                           std::to_string(kMaxDerivativeOrder) + "]");
  }
  if (k == 0) return evaluate(q);
  return jet(q).derivative(static_cast<std::size_t>(k));
}

std::array<double, kMaxDerivativeOrder + 1> BarrierPotential::derivatives(double q) const {
  const auto j = jet(q);
  std::array<double, kMaxDerivativeOrder + 1> out{};
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = j.derivative(k);
  out[0] = evaluate(q);
  return out;
}

EnergyRatio BarrierPotential::gamma(double energy) const {
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw InvalidEnergy("potential: energy must be positive, got " + std::to_string(energy));
  }
  return EnergyRatio{height_ / energy};
}

std::pair<double, double> BarrierPotential::turning_points(double energy) const {
  const double g = gamma(energy).gamma;
  if (g < 1.0) throw NoTurningPoint("potential: energy " + std::to_string(energy) + " exceeds barrier height");

  // x^{2n} = alpha/E - a^{2n}, i.e. x = a (gamma - 1)^{1/2n}.
  const double target = alpha_ / energy - a2n_;
  if (target <= 0.0) return {0.0, 0.0};
  const int m = 2 * n_;
  double x = a_ * std::pow(g - 1.0, 1.0 / m);
  // One Newton pass on x^{2n} - target.
  const double xm1 = std::pow(x, m - 1);
  const double corrected = x - (xm1 * x - target) / (m * xm1);
  if (corrected > 0.0 && std::abs(evaluate(corrected) - energy) <= std::abs(evaluate(x) - energy)) x = corrected;
  return {-x, x};
}

}  // namespace momentous
