#include "momentous/classify.hpp"

#include <algorithm>
#include <cmath>

#include "momentous/error.hpp"

namespace momentous {

std::string to_string(OutcomeTag tag) {
  switch (tag) {
    case OutcomeTag::Reflected:
      return "Reflected";
    case OutcomeTag::Tunneled:
      return "Tunneled";
    case OutcomeTag::Trapped:
      return "Trapped";
    case OutcomeTag::Undetermined:
      return "Undetermined";
  }
  return "Undetermined";
}

Outcome classify(const Trajectory& traj, const BarrierPotential& pot, double energy, double margin) {
  if (!(margin >= 0.0)) throw InvalidMargin("classify: margin must be non-negative");
  Outcome out;
  if (traj.samples.empty()) {
    out.reason = "empty trajectory";
    return out;
  }
  const MomentState& last = traj.final();
  out.final_q = last.q();
  out.final_p = last.p();
  out.horizon = last.t();

  double closest = std::abs(traj.samples.front().q());
  for (const auto& s : traj.samples) closest = std::min(closest, std::abs(s.q()));
  out.closest_approach = closest;

  if (!(energy > 0.0)) {
    out.reason = "non-positive energy";
    return out;
  }
  if (pot.gamma(energy).gamma <= 1.0) {
    out.reason = "energy at or above the barrier top (gamma <= 1)";
    return out;
  }
  const double x = pot.turning_points(energy).second;
  out.turning_point = x;
  const double inner = x + margin;

  for (const auto& s : traj.samples) {
    const bool inside = std::abs(s.q()) < inner;
    if (!out.entry_time && inside) {
      out.entry_time = s.t();
    } else if (out.entry_time && !out.exit_time && !inside) {
      out.exit_time = s.t();
      out.exit_side = s.q() > 0.0 ? 1 : -1;
    }
  }
  for (const auto& ev : traj.events) {
    if (ev.kind == Event::Kind::MomentumSignChange && std::abs(ev.state.q()) < inner) ++out.sign_changes_inside;
  }

  if (traj.termination == Termination::ConstraintViolated) {
    out.reason = "uncertainty constraint violated";
    return out;
  }
  if (traj.termination == Termination::StepFailure) {
    out.reason = "integration failed";
    return out;
  }

  if (last.q() > inner && last.p() > 0.0) {
    out.tag = OutcomeTag::Tunneled;
  } else if (last.q() < -inner && last.p() < 0.0) {
    if (closest <= 2.0 * x) {
      out.tag = OutcomeTag::Reflected;
    } else {
      out.reason = "never approached within 2x of the barrier";
    }
  } else if (std::abs(last.q()) < inner && out.sign_changes_inside >= 2) {
    out.tag = OutcomeTag::Trapped;
  } else {
    out.reason = "final state does not meet any outcome rule";
  }
  return out;
}

}  // namespace momentous
