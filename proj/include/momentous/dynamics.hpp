#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "momentous/moment_algebra.hpp"
#include "momentous/potential.hpp"

namespace momentous {

/// Number of slots in the largest (third-order) state vector.
inline constexpr std::size_t kMaxStateSize = 9;

/// Number of state entries for truncation order 0, 2 or 3.
std::size_t state_size(int order);

/// Slot of G^{a,b} in the state vector, or -1 if the moment is not tracked at any order.
int moment_slot(MomentIndex m);

/// Expectation values and central moments at one instant.
///
/// Layout: q, p, G^{2,0}, G^{1,1}, G^{0,2}, G^{3,0}, G^{2,1}, G^{1,2}, G^{0,3}. Moments above the
/// truncation order are held at zero, which is the closure of the truncated system.
class MomentState {
 public:
  using Vector = std::array<double, kMaxStateSize>;

  MomentState() = default;
  /// Throws InvalidOrder unless order is 0, 2 or 3.
  MomentState(int order, double t, double q, double p);

  int order() const { return order_; }
  std::size_t size() const { return state_size(order_); }

  double t() const { return t_; }
  double q() const { return y_[0]; }
  double p() const { return y_[1]; }
  /// G^{a,b}; zero for moments beyond the truncation order.
  double g(int a, int b) const;

  void set_t(double t) { t_ = t; }
  void set_q(double q) { y_[0] = q; }
  void set_p(double p) { y_[1] = p; }
  /// Throws InvalidArgument when G^{a,b} is not part of this truncation.
  void set_g(int a, int b, double value);

  const Vector& vector() const { return y_; }
  Vector& vector() { return y_; }
  std::span<const double> active() const { return {y_.data(), size()}; }

  bool finite() const;
  /// G^{2,0} >= 0 and G^{0,2} >= 0.
  bool dispersions_nonnegative() const;

  friend bool operator==(const MomentState&, const MomentState&) = default;

 private:
  int order_ = 0;
  double t_ = 0.0;
  Vector y_{};
};

struct ModelConfig {
  double mass = 1.0;
  double hbar = 1.0;
  BarrierPotential potential{1.0, 1.0, 4};
  int order = 2;  // 0 (classical), 2 or 3
  /// Include (1/6) V''' G^{3,0} in the third-order effective potential.
  bool veff_third_order_term = true;

  /// Throws InvalidArgument / InvalidOrder on bad values.
  void validate() const;
};

/// Authoritative equations of motion for truncation order 0, 2 or 3.
///
/// Order 3 is the full third-order system; order 2 is that system with all third moments set
/// to zero (its momentum equation carries the -V' force and the -V'''G^{2,0}/2 correction).
const EomTable& eom_table(int order);

/// Numeric values needed to evaluate a symbolic expression.
struct EvalContext {
  double mass = 1.0;
  double hbar = 1.0;
  const MomentState* state = nullptr;
  std::span<const double> potential_derivatives;  // V, V', V'', ... at state->q()
};

/// Evaluates a symbolic polynomial at the given context.
double evaluate(const MomentPolynomial& poly, const EvalContext& ctx);

/// Time derivative of the state under the model's truncation. Entries beyond the active size are zero.
MomentState::Vector rhs(const MomentState& state, const ModelConfig& cfg);

/// H_Q = p^2/2m + V + G^{0,2}/2m + V''G^{2,0}/2 [+ V'''G^{3,0}/6 at order 3]; classical H at order 0.
double effective_hamiltonian(const MomentState& state, const ModelConfig& cfg);

/// V_eff(q) = V(q) + V''(q) G^{2,0}/2 + G^{0,2}/2m [+ V'''(q) G^{3,0}/6 at order 3],
/// with moments frozen from `state` and position free.
double effective_potential(double q, const MomentState& state, const ModelConfig& cfg);

}  // namespace momentous
