#include <cmath>

#include "doctest.h"
#include "momentous/error.hpp"
#include "momentous/integrator.hpp"
#include "momentous/packet.hpp"

using namespace momentous;

namespace {

const MomentState* sample_at(const Trajectory& tr, double t) {
  for (const auto& s : tr.samples) {
    if (std::abs(s.t() - t) < 1e-12) return &s;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("dormand-prince on linear problems") {
  using V = DormandPrince::Vector;
  DormandPrince growth([](double, const V& y) { V d{}; d[0] = y[0]; return d; }, 1, 1e-12, 1e-12, 0.5);
  V y0{};
  y0[0] = 1.0;
  growth.reset(0.0, y0);
  while (growth.t() < 2.0) REQUIRE(growth.advance(2.0));
  CHECK(growth.t() == 2.0);
  CHECK(growth.y()[0] == doctest::Approx(std::exp(2.0)).epsilon(1e-10));

  DormandPrince osc([](double, const V& y) { V d{}; d[0] = y[1]; d[1] = -y[0]; return d; }, 2, 1e-11, 1e-11, 0.3);
  osc.reset(0.0, y0);
  while (osc.t() < 10.0) {
    REQUIRE(osc.advance(10.0));
    // dense output in the middle of the step
    const auto& st = osc.last_step();
    const double tm = st.t0 + 0.5 * st.h;
    CHECK(st.interpolate(0.5)[0] == doctest::Approx(std::cos(tm)).epsilon(1e-7));
    CHECK(st.interpolate(0.0)[0] == st.y0[0]);
  }
  CHECK(osc.y()[0] == doctest::Approx(std::cos(10.0)).epsilon(1e-9));
  CHECK(osc.accepted() > 0);
}

TEST_CASE("uncertainty residual") {
  CHECK(std::abs(uncertainty_residual(initial_moments({0.0, 1.0, 0.7, 1.0}, 2), 1.0)) < 1e-15);
  MomentState s(2, 0.0, 0.0, 0.0);
  s.set_g(2, 0, 1.0);
  s.set_g(0, 2, 0.1);
  CHECK(uncertainty_residual(s, 1.0) == doctest::Approx(-0.15));
  CHECK_THROWS_AS(uncertainty_residual(MomentState(0, 0, 0, 0), 1.0), InvalidOrder);
}

TEST_CASE("free classical motion") {
  ModelConfig model;
  model.order = 0;
  IntegratorConfig ic;
  ic.t_max = 10.0;
  const auto tr = integrate(MomentState(0, 0.0, -50.0, 1.0), model, ic);
  CHECK(tr.termination == Termination::ReachedTmax);
  CHECK(tr.final().t() == doctest::Approx(10.0));
  CHECK(std::abs(tr.final().q() + 40.0) <= 1e-9);
  CHECK(std::isnan(tr.uncertainty_residual.front()));
}

TEST_CASE("free spreading at order 2") {
  ModelConfig model;
  model.mass = 1.3;
  model.hbar = 0.9;
  IntegratorConfig ic;
  ic.t_max = 5.0;
  ic.escape_radius = 0.0;
  const double sigma = 0.4, m = 1.3, hb = 0.9;
  const auto tr = integrate(initial_moments({-1e4, 0.5, sigma, hb}, 2), model, ic);
  REQUIRE(tr.termination == Termination::ReachedTmax);
  for (const auto& s : tr.samples) {
    const double t = s.t();
    const double g20 = sigma * sigma + hb * hb * t * t / (4 * m * m * sigma * sigma);
    CHECK(std::abs(s.g(2, 0) - g20) <= 1e-8 * g20);
    CHECK(s.g(1, 1) == doctest::Approx(-hb * hb * t / (4 * m * sigma * sigma)).epsilon(1e-8));
    CHECK(s.g(0, 2) == doctest::Approx(hb * hb / (4 * sigma * sigma)).epsilon(1e-12));
  }
}

TEST_CASE("classical reflection is complete") {
  ModelConfig model;
  model.order = 0;
  const double energy = 1.0 / 1.46484;
  const double p0 = std::sqrt(2.0 * (energy - model.potential.evaluate(-5.0)));
  const double x = model.potential.turning_points(energy).second;
  IntegratorConfig ic;
  ic.watch_levels = {-5.0};
  const auto tr = integrate(MomentState(0, 0.0, -5.0, p0), model, ic);
  CHECK(tr.termination == Termination::Escaped);
  // the far field is not exactly flat, so compare at the starting point
  CHECK(std::abs(tr.final().p() + p0) <= 1e-5);
  for (const auto& s : tr.samples) CHECK(s.q() <= -x + 1e-9);
  int reversals = 0, returns = 0;
  for (const auto& e : tr.events) {
    if (e.kind == Event::Kind::MomentumSignChange) {
      CHECK(e.state.q() == doctest::Approx(-x).epsilon(1e-6));
      ++reversals;
    } else {
      REQUIRE(e.level == -5.0);
      if (e.direction != -1) continue;
      CHECK(std::abs(e.state.p() + p0) <= 1e-6);
      ++returns;
    }
  }
  CHECK(reversals == 1);
  CHECK(returns == 1);
  CHECK(tr.max_energy_drift() <= 1e-8);
}

TEST_CASE("sampling, events and determinism") {
  ModelConfig model;
  IntegratorConfig ic;
  ic.t_max = 8.0;
  ic.extra_sample_times = {0.123, 3.0, 7.777, 9.5};
  ic.watch_levels = {-0.615, 0.615};
  const MomentState init = initial_moments({-1.8, 1.2, 0.35, 1.0}, 2);
  const auto a = integrate(init, model, ic);
  const auto b = integrate(init, model, ic);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i] == b.samples[i]);

  for (std::size_t i = 1; i < a.samples.size(); ++i) CHECK(a.samples[i].t() > a.samples[i - 1].t());
  CHECK(sample_at(a, 0.123) != nullptr);
  CHECK(sample_at(a, 0.5) != nullptr);
  if (a.final().t() > 7.777) CHECK(sample_at(a, 7.777) != nullptr);
  CHECK(sample_at(a, 9.5) == nullptr);

  int last = 0;
  for (const auto& e : a.events) {
    if (e.kind != Event::Kind::MomentumSignChange) continue;
    if (last != 0) CHECK(e.direction == -last);
    last = e.direction;
    const double pdot = rhs(e.state, model)[1];
    CHECK(std::abs(e.state.p()) <= std::abs(pdot) * 1e-9 + 1e-15);
  }
}

TEST_CASE("tolerance convergence") {
  ModelConfig model;
  IntegratorConfig coarse;
  coarse.escape_radius = 0.0;
  IntegratorConfig fine = coarse;
  fine.rtol = fine.atol = 0.5e-10;
  const double p0 = std::sqrt(2.0 * (0.98 - model.potential.evaluate(-3.0)));
  const MomentState init = initial_moments({-3.0, p0, 0.5, 1.0}, 2);
  const auto a = integrate(init, model, coarse);
  const auto b = integrate(init, model, fine);
  REQUIRE(a.termination == Termination::ReachedTmax);
  REQUIRE(b.termination == Termination::ReachedTmax);
  CHECK(std::abs(a.final().q() - b.final().q()) < 10 * fine.rtol * std::max(1.0, std::abs(b.final().q())));
}

TEST_CASE("early stops") {
  ModelConfig model;
  model.order = 3;
  IntegratorConfig ic;
  ic.t_max = 5.0;
  // The default initial third momentum moment breaks the uncertainty relation almost at once.
  const MomentState init = initial_moments({-3.0, 1.4, 0.5, 1.0}, 3);
  const auto stopped = integrate(init, model, ic);
  CHECK(stopped.termination == Termination::ConstraintViolated);
  CHECK(stopped.constraint_violation_time.has_value());
  CHECK(stopped.final().t() < 0.1);

  ic.stop_on_constraint_violation = false;
  const auto flagged = integrate(init, model, ic);
  CHECK(flagged.termination != Termination::ConstraintViolated);
  CHECK(flagged.final().t() > 1.0);
  CHECK(flagged.constraint_violation_time == stopped.constraint_violation_time);

  ModelConfig m2;
  IntegratorConfig budget;
  budget.max_steps = 5;
  const auto cut = integrate(initial_moments({-3.0, 1.4, 0.5, 1.0}, 2), m2, budget);
  CHECK(cut.termination == Termination::StepFailure);
  CHECK(cut.accepted_steps == 5);
  CHECK(cut.message.find("budget") != std::string::npos);

  CHECK_THROWS_AS(integrate(MomentState(0, 0, 0, 0), m2, IntegratorConfig{}), InvalidOrder);
  IntegratorConfig badcfg;
  badcfg.rtol = 0.0;
  CHECK_THROWS_AS(integrate(MomentState(2, 0, 0, 0), m2, badcfg), InvalidArgument);
}
