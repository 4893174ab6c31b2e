#pragma once

#include <optional>
#include <string>

#include "momentous/integrator.hpp"
#include "momentous/potential.hpp"

namespace momentous {

enum class OutcomeTag { Reflected, Tunneled, Trapped, Undetermined };

std::string to_string(OutcomeTag tag);

struct Outcome {
  OutcomeTag tag = OutcomeTag::Undetermined;
  std::string reason;
  double turning_point = 0.0;  // x >= 0; the return points are -x and +x
  double horizon = 0.0;        // time of the last sample
  std::optional<double> entry_time;  // first time with |q| < x + margin
  std::optional<double> exit_time;   // first later time with |q| >= x + margin
  int exit_side = 0;                 // -1 left, +1 right, 0 no exit
  int sign_changes_inside = 0;       // momentum sign changes while |q| < x + margin
  double closest_approach = 0.0;     // min |q| over the samples
  double final_q = 0.0;
  double final_p = 0.0;
};

/// Default classification margin for a barrier of half-width a.
inline double default_margin(double width) { return 0.05 * width; }

/// Labels a finished trajectory using the classical return points of energy E.
///
/// Tunneled: ends at q > x + margin moving right. Reflected: ends at q < -x - margin moving left
/// after coming within 2x of the barrier centre. Trapped: at the horizon still inside
/// |q| < x + margin with at least two momentum reversals there. Everything else, including
/// above-barrier energies and constraint violations, is Undetermined.
/// Throws InvalidMargin for margin < 0.
Outcome classify(const Trajectory& traj, const BarrierPotential& pot, double energy, double margin);

}  // namespace momentous
