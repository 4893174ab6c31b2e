#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "momentous/dynamics.hpp"

namespace momentous {

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-10;
  double t_max = 20.0;
  double max_step = 0.1;
  /// Outbound motion (q p > 0) beyond this |q| ends the run; non-positive disables the check.
  double escape_radius = 10.0;
  double sample_dt = 0.01;
  /// Accepted-step budget; exhausting it ends the run with StepFailure.
  std::size_t max_steps = 500000;
  /// When false a violated uncertainty relation is only recorded and the run continues.
  bool stop_on_constraint_violation = true;
  /// Extra instants (beyond the sample_dt grid) at which states are sampled.
  std::vector<double> extra_sample_times;
  /// Positions whose crossings are recorded as events (typically the classical turning points).
  std::vector<double> watch_levels;

  /// Throws InvalidArgument on non-positive tolerances, horizon or sampling interval.
  void validate() const;
};

enum class Termination { ReachedTmax, Escaped, ConstraintViolated, StepFailure };

std::string to_string(Termination t);

struct Event {
  enum class Kind { MomentumSignChange, LevelCrossing };
  Kind kind = Kind::MomentumSignChange;
  double t = 0.0;
  /// +1 when the monitored quantity increases through zero, -1 otherwise.
  int direction = 0;
  /// Crossed position for LevelCrossing events; 0 for momentum sign changes.
  double level = 0.0;
  MomentState state;
};

struct Trajectory {
  std::vector<MomentState> samples;
  std::vector<double> hamiltonian;            // H_Q per sample
  std::vector<double> uncertainty_residual;   // per sample; NaN at order 0
  std::vector<double> effective_potential;    // V_eff(q(t), t) per sample
  std::vector<Event> events;
  Termination termination = Termination::ReachedTmax;
  std::string message;
  /// First step end at which the uncertainty residual fell below the tolerated floor.
  std::optional<double> constraint_violation_time;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  const MomentState& initial() const { return samples.front(); }
  const MomentState& final() const { return samples.back(); }
  /// max_t |H_Q(t) - H_Q(0)| / |H_Q(0)| (absolute when H_Q(0) == 0).
  double max_energy_drift() const;
};

/// G^{2,0} G^{0,2} - (G^{1,1})^2 - hbar^2/4; negative values violate the uncertainty relation.
/// Throws InvalidOrder for classical (order 0) states.
double uncertainty_residual(const MomentState& state, double hbar);

/// Generic embedded Dormand-Prince 5(4) integrator with PI step-size control and
/// fourth-order continuous output, over the first `dim` entries of a fixed-size vector.
class DormandPrince {
 public:
  using Vector = MomentState::Vector;
  using Rhs = std::function<Vector(double, const Vector&)>;

  struct Step {
    double t0 = 0.0;
    double h = 0.0;
    Vector y0{};
    Vector y1{};
    /// State at t0 + theta h, theta in [0, 1].
    Vector interpolate(double theta) const;
    std::array<Vector, 5> dense{};
  };

  DormandPrince(Rhs f, std::size_t dim, double rtol, double atol, double max_step);

  /// Resets the integrator at (t, y).
  void reset(double t, const Vector& y);

  /// Advances by one accepted step not exceeding t_end. Returns false if the step size underflows
  /// or the state becomes non-finite.
  bool advance(double t_end);

  const Step& last_step() const { return step_; }
  double t() const { return t_; }
  const Vector& y() const { return y_; }
  std::size_t accepted() const { return accepted_; }
  std::size_t rejected() const { return rejected_; }

 private:
  double initial_step(double t_end);
  double error_norm(const Vector& y0, const Vector& y1, const Vector& err) const;

  Rhs f_;
  std::size_t dim_;
  double rtol_;
  double atol_;
  double max_step_;
  double t_ = 0.0;
  Vector y_{};
  Vector k1_{};
  double h_ = 0.0;
  double err_old_ = 1e-4;
  bool last_rejected_ = false;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
  Step step_;
};

/// Integrates the model from `init` up to icfg.t_max, sampling every sample_dt and at events.
/// Stops early on escape, on an uncertainty residual below -10 atol (scaled by max(1, G20 G02)),
/// on step-size underflow or an exhausted step budget;
/// the partial trajectory is always returned.
Trajectory integrate(const MomentState& init, const ModelConfig& model, const IntegratorConfig& icfg);

}  // namespace momentous
