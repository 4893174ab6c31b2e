#include "momentous/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "momentous/error.hpp"

namespace momentous {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

// PI controller constants.
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - 0.75 * kBeta;
constexpr double kMinFactor = 0.2;  // h_new >= 0.2 h
constexpr double kMaxFactor = 10.0;

constexpr double kEventTimeTol = 1e-13;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) throw InvalidArgument("integrator: rtol and atol must be positive");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("integrator: t_max must be positive");
  if (!(max_step > 0.0)) throw InvalidArgument("integrator: max_step must be positive");
  if (!(sample_dt > 0.0)) throw InvalidArgument("integrator: sample_dt must be positive");
  if (max_steps == 0) throw InvalidArgument("integrator: max_steps must be positive");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::ReachedTmax:
      return "ReachedTmax";
    case Termination::Escaped:
      return "Escaped";
    case Termination::ConstraintViolated:
      return "ConstraintViolated";
    case Termination::StepFailure:
      return "StepFailure";
  }
  return "Unknown";
}

double Trajectory::max_energy_drift() const {
  if (hamiltonian.empty()) return 0.0;
  const double h0 = hamiltonian.front();
  const double scale = h0 != 0.0 ? std::abs(h0) : 1.0;
  double worst = 0.0;
  for (double h : hamiltonian) worst = std::max(worst, std::abs(h - h0) / scale);
  return worst;
}

double uncertainty_residual(const MomentState& state, double hbar) {
  if (state.order() < 2) throw InvalidOrder("uncertainty_residual: state has no second moments");
  const double g11 = state.g(1, 1);
  return state.g(2, 0) * state.g(0, 2) - g11 * g11 - 0.25 * hbar * hbar;
}

DormandPrince::Vector DormandPrince::Step::interpolate(double theta) const {
  Vector out{};
  const double s = 1.0 - theta;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = dense[0][i] +
             theta * (dense[1][i] + s * (dense[2][i] + theta * (dense[3][i] + s * dense[4][i])));
  }
  return out;
}

DormandPrince::DormandPrince(Rhs f, std::size_t dim, double rtol, double atol, double max_step)
    : f_(std::move(f)), dim_(dim), rtol_(rtol), atol_(atol), max_step_(max_step) {}

void DormandPrince::reset(double t, const Vector& y) {
  t_ = t;
  y_ = y;
  k1_ = f_(t_, y_);
  h_ = 0.0;
  err_old_ = 1e-4;
  last_rejected_ = false;
}

double DormandPrince::error_norm(const Vector& y0, const Vector& y1, const Vector& err) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sk = atol_ + rtol_ * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sk;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(dim_));
}

// Starting step from the derivative scale (Hairer, Norsett & Wanner, II.4).
double DormandPrince::initial_step(double t_end) {
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sk = atol_ + rtol_ * std::abs(y_[i]);
    dnf += (k1_[i] / sk) * (k1_[i] / sk);
    dny += (y_[i] / sk) * (y_[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min({h, max_step_, t_end - t_});
  Vector y1{};
  for (std::size_t i = 0; i < dim_; ++i) y1[i] = y_[i] + h * k1_[i];
  const Vector k2 = f_(t_ + h, y1);
  double der2 = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sk = atol_ + rtol_ * std::abs(y_[i]);
    der2 += ((k2[i] - k1_[i]) / sk) * ((k2[i] - k1_[i]) / sk);
  }
  der2 = std::sqrt(der2) / h;
  const double der = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = der <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der, 0.2);
  return std::min({100.0 * h, h1, max_step_, t_end - t_});
}

bool DormandPrince::advance(double t_end) {
  if (h_ == 0.0) h_ = initial_step(t_end);
  const std::size_t n = dim_;
  Vector y2{}, y3{}, y4{}, y5{}, y6{}, y7{}, err{};

  while (true) {
    double h = std::min({h_, max_step_, t_end - t_});
    const bool hits_end = h >= t_end - t_;
    if (h <= 1e-14 * std::max(1.0, std::abs(t_))) return false;

    for (std::size_t i = 0; i < n; ++i) y2[i] = y_[i] + h * a21 * k1_[i];
    const Vector k2 = f_(t_ + c2 * h, y2);
    for (std::size_t i = 0; i < n; ++i) y3[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2[i]);
    const Vector k3 = f_(t_ + c3 * h, y3);
    for (std::size_t i = 0; i < n; ++i) y4[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
    const Vector k4 = f_(t_ + c4 * h, y4);
    for (std::size_t i = 0; i < n; ++i) {
      y5[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    }
    const Vector k5 = f_(t_ + c5 * h, y5);
    for (std::size_t i = 0; i < n; ++i) {
      y6[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    const Vector k6 = f_(t_ + h, y6);
    for (std::size_t i = 0; i < n; ++i) {
      y7[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    const Vector k7 = f_(t_ + h, y7);
    for (std::size_t i = 0; i < n; ++i) {
      err[i] = h * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }

    const double e = error_norm(y_, y7, err);
    if (!std::isfinite(e)) {
      h_ = h * kMinFactor;
      ++rejected_;
      last_rejected_ = true;
      continue;
    }
    const double fac11 = std::pow(e, kExpo);
    if (e <= 1.0) {
      double fac = fac11 / std::pow(err_old_, kBeta) / kSafety;
      fac = std::clamp(fac, 1.0 / kMaxFactor, 1.0 / kMinFactor);
      double h_new = h / fac;
      if (last_rejected_) h_new = std::min(h_new, h);
      err_old_ = std::max(e, 1e-4);

      step_.t0 = t_;
      step_.h = h;
      step_.y0 = y_;
      step_.y1 = y7;
      for (std::size_t i = 0; i < kMaxStateSize; ++i) {
        const double diff = y7[i] - y_[i];
        const double bspl = h * k1_[i] - diff;
        step_.dense[0][i] = y_[i];
        step_.dense[1][i] = diff;
        step_.dense[2][i] = bspl;
        step_.dense[3][i] = diff - h * k7[i] - bspl;
        step_.dense[4][i] = h * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }

      t_ = hits_end ? t_end : t_ + h;
      y_ = y7;
      k1_ = k7;
      // Keep the controller's proposal unless the end clamp shortened this step.
      if (!hits_end || h_new < h_) h_ = h_new;
      last_rejected_ = false;
      ++accepted_;
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(y_[i])) return false;
      }
      return true;
    }
    h_ = h / std::min(1.0 / kMinFactor, fac11 / kSafety);
    ++rejected_;
    last_rejected_ = true;
  }
}

namespace {

MomentState make_state(const MomentState& proto, double t, const MomentState::Vector& y) {
  MomentState s = proto;
  s.set_t(t);
  s.vector() = y;
  return s;
}

// Root of a scalar function of theta on [0, 1] with a sign change, by bisection on the interpolant.
template <typename F>
double bisect_theta(F&& fn, double h) {
  double lo = 0.0, hi = 1.0;
  const int s_lo = sign_of(fn(lo));
  while ((hi - lo) * h > kEventTimeTol) {
    const double mid = 0.5 * (lo + hi);
    const int s_mid = sign_of(fn(mid));
    if (s_mid == 0) return mid;
    if (s_mid == s_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Trajectory integrate(const MomentState& init, const ModelConfig& model, const IntegratorConfig& icfg) {
  model.validate();
  icfg.validate();
  if (init.order() != model.order) throw InvalidOrder("integrate: state order does not match model order");

  Trajectory traj;
  const MomentState proto(init.order(), 0.0, 0.0, 0.0);
  const std::size_t dim = init.size();
  auto f = [&model, &proto](double t, const MomentState::Vector& y) { return rhs(make_state(proto, t, y), model); };

  DormandPrince solver(f, dim, icfg.rtol, icfg.atol, icfg.max_step);
  solver.reset(init.t(), init.vector());
  traj.samples.push_back(init);

  const double t_start = init.t();
  const double t_end = t_start + icfg.t_max;
  const double violation_floor = -10.0 * icfg.atol;
  std::size_t next_sample = 1;
  std::vector<double> extra;
  for (double te : icfg.extra_sample_times) {
    if (te > t_start && te <= t_end) extra.push_back(te);
  }
  std::sort(extra.begin(), extra.end());
  std::size_t next_extra = 0;

  auto push_sample = [&traj](MomentState s) {
    if (s.t() > traj.samples.back().t()) traj.samples.push_back(std::move(s));
  };

  traj.termination = Termination::ReachedTmax;
  while (solver.t() < t_end) {
    if (solver.accepted() >= icfg.max_steps) {
      traj.termination = Termination::StepFailure;
      traj.message = "step budget of " + std::to_string(icfg.max_steps) + " exhausted at t=" + std::to_string(solver.t());
      push_sample(make_state(proto, solver.t(), solver.y()));
      break;
    }
    if (!solver.advance(t_end)) {
      traj.termination = Termination::StepFailure;
      traj.message = "step size underflow or non-finite state near t=" + std::to_string(solver.t());
      break;
    }
    const auto& step = solver.last_step();
    const double t0 = step.t0;
    const double t1 = solver.t();

    // Events inside (t0, t1].
    std::vector<Event> found;
    auto scan = [&](Event::Kind kind, double level, auto&& value) {
      const double v0 = value(step.y0);
      const double v1 = value(step.y1);
      const int s0 = sign_of(v0), s1 = sign_of(v1);
      // starting on zero is not a crossing; landing on it counts for this step
      if (s0 == 0 || s0 == s1) return;
      const double theta =
          s1 == 0 ? 1.0 : bisect_theta([&](double th) { return value(step.interpolate(th)); }, step.h);
      Event ev;
      ev.kind = kind;
      ev.t = t0 + theta * step.h;
      ev.direction = s0 < 0 ? 1 : -1;
      ev.level = level;
      ev.state = make_state(proto, ev.t, step.interpolate(theta));
      found.push_back(std::move(ev));
    };
    scan(Event::Kind::MomentumSignChange, 0.0, [](const MomentState::Vector& y) { return y[1]; });
    for (double level : icfg.watch_levels) {
      scan(Event::Kind::LevelCrossing, level, [level](const MomentState::Vector& y) { return y[0] - level; });
    }
    std::sort(found.begin(), found.end(), [](const Event& a, const Event& b) { return a.t < b.t; });

    // Interleave grid samples and event states in time order.
    std::size_t ev_i = 0;
    while (true) {
      const double t_regular = t_start + static_cast<double>(next_sample) * icfg.sample_dt;
      const bool use_extra = next_extra < extra.size() && extra[next_extra] <= t_regular;
      const double t_grid = use_extra ? extra[next_extra] : t_regular;
      const bool grid_due = t_grid <= t1;
      const bool event_due = ev_i < found.size();
      if (!grid_due && !event_due) break;
      if (event_due && (!grid_due || found[ev_i].t < t_grid)) {
        push_sample(found[ev_i].state);
        traj.events.push_back(found[ev_i]);
        ++ev_i;
      } else {
        const double theta = step.h > 0.0 ? std::clamp((t_grid - t0) / step.h, 0.0, 1.0) : 1.0;
        push_sample(make_state(proto, t_grid, theta == 1.0 ? step.y1 : step.interpolate(theta)));
        if (use_extra) {
          // An extra time coinciding with a grid point consumes both.
          if (extra[next_extra] == t_regular) ++next_sample;
          ++next_extra;
        } else {
          ++next_sample;
        }
      }
    }

    const MomentState current = make_state(proto, t1, solver.y());
    if (icfg.escape_radius > 0.0 && std::abs(current.q()) > icfg.escape_radius && current.q() * current.p() > 0.0) {
      traj.termination = Termination::Escaped;
      push_sample(current);
      break;
    }
    if (current.order() >= 2 && !traj.constraint_violation_time &&
        uncertainty_residual(current, model.hbar) <
            violation_floor * std::max(1.0, current.g(2, 0) * current.g(0, 2))) {
      traj.constraint_violation_time = t1;
      if (icfg.stop_on_constraint_violation) {
        traj.termination = Termination::ConstraintViolated;
        traj.message = "uncertainty residual below tolerance at t=" + std::to_string(t1);
        push_sample(current);
        break;
      }
    }
  }
  if (traj.termination == Termination::ReachedTmax) push_sample(make_state(proto, solver.t(), solver.y()));

  traj.accepted_steps = solver.accepted();
  traj.rejected_steps = solver.rejected();
  traj.hamiltonian.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    traj.hamiltonian.push_back(effective_hamiltonian(s, model));
    traj.uncertainty_residual.push_back(s.order() >= 2 ? uncertainty_residual(s, model.hbar)
                                                       : std::numeric_limits<double>::quiet_NaN());
    traj.effective_potential.push_back(effective_potential(s.q(), s, model));
  }
  return traj;
}

}  // namespace momentous
