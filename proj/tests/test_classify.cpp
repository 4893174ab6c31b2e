#include <cmath>
#include <random>

#include "doctest.h"
#include "momentous/classify.hpp"
#include "momentous/error.hpp"
#include "momentous/packet.hpp"

using namespace momentous;

namespace {

const BarrierPotential kPot(1.0, 1.0, 4);
constexpr double kEnergy = 0.98;

// Builds a classical-looking trajectory from a path q(t) sampled on [0, t_end].
template <typename Q, typename P>
Trajectory synthetic(Q q, P p, double t_end, int n = 400) {
  Trajectory tr;
  for (int i = 0; i <= n; ++i) {
    const double t = t_end * i / n;
    tr.samples.emplace_back(0, t, q(t), p(t));
    if (i > 0) {
      const double p0 = tr.samples[i - 1].p(), p1 = tr.samples[i].p();
      if ((p0 < 0) != (p1 < 0) && p0 != 0.0) {
        Event e;
        e.t = t;
        e.direction = p1 > p0 ? 1 : -1;
        e.state = tr.samples[i];
        tr.events.push_back(e);
      }
    }
  }
  return tr;
}

Trajectory mirrored(const Trajectory& tr) {
  Trajectory m = tr;
  for (auto& s : m.samples) {
    s.set_q(-s.q());
    s.set_p(-s.p());
  }
  for (auto& e : m.events) {
    e.state.set_q(-e.state.q());
    e.state.set_p(-e.state.p());
    e.direction = -e.direction;
  }
  return m;
}

Trajectory bounce() {
  return synthetic([](double t) { return -3.0 + 2.6 * t - 0.5 * t * t; }, [](double t) { return 2.6 - t; }, 6.0);
}

Trajectory crossing() {
  return synthetic([](double t) { return -3.0 + t; }, [](double) { return 1.0; }, 6.0);
}

Trajectory rattling() {
  return synthetic([](double t) { return 0.3 * std::sin(3.0 * t); }, [](double t) { return 0.9 * std::cos(3.0 * t); }, 6.0);
}

}  // namespace

TEST_CASE("definition cases") {
  const double x = kPot.turning_points(kEnergy).second;
  const Outcome t = classify(crossing(), kPot, kEnergy, 0.05);
  CHECK(t.tag == OutcomeTag::Tunneled);
  CHECK(t.turning_point == doctest::Approx(x));
  REQUIRE(t.entry_time.has_value());
  REQUIRE(t.exit_time.has_value());
  CHECK(*t.entry_time < *t.exit_time);
  CHECK(t.exit_side == 1);
  CHECK(t.horizon == 6.0);

  const Outcome r = classify(bounce(), kPot, kEnergy, 0.05);
  CHECK(r.tag == OutcomeTag::Reflected);
  CHECK(r.final_p < 0.0);

  const Outcome c = classify(rattling(), kPot, kEnergy, 0.05);
  CHECK(c.tag == OutcomeTag::Trapped);
  CHECK(c.sign_changes_inside >= 2);
}

TEST_CASE("undetermined cases") {
  // turned round too far from the barrier
  const Trajectory distant =
      synthetic([](double t) { return -6.0 + 2.0 * t - 0.5 * t * t; }, [](double t) { return 2.0 - t; }, 6.0);
  const Outcome d = classify(distant, kPot, kEnergy, 0.05);
  CHECK(d.tag == OutcomeTag::Undetermined);
  CHECK_FALSE(d.reason.empty());

  CHECK(classify(crossing(), kPot, 1.5, 0.05).tag == OutcomeTag::Undetermined);
  CHECK(classify(crossing(), kPot, 1.0, 0.05).tag == OutcomeTag::Undetermined);

  Trajectory violated = crossing();
  violated.termination = Termination::ConstraintViolated;
  CHECK(classify(violated, kPot, kEnergy, 0.05).tag == OutcomeTag::Undetermined);

  // a single reversal inside is not enough for Trapped
  const Trajectory once =
      synthetic([](double t) { return 0.3 * std::sin(t); }, [](double t) { return 0.3 * std::cos(t); }, 2.5);
  CHECK(classify(once, kPot, kEnergy, 0.05).tag == OutcomeTag::Undetermined);

  CHECK_THROWS_AS(classify(crossing(), kPot, kEnergy, -0.01), InvalidMargin);
}

TEST_CASE("mirror symmetry") {
  CHECK(classify(mirrored(bounce()), kPot, kEnergy, 0.05).tag == OutcomeTag::Tunneled);
  CHECK(classify(mirrored(crossing()), kPot, kEnergy, 0.05).tag == OutcomeTag::Reflected);
  CHECK(classify(mirrored(rattling()), kPot, kEnergy, 0.05).tag == OutcomeTag::Trapped);
}

TEST_CASE("classical inbound starts are reflected") {
  ModelConfig model;
  model.order = 0;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> qd(-6.0, -2.0);
  std::uniform_real_distribution<double> ed(0.3, 0.95);
  for (int i = 0; i < 100; ++i) {
    const double e = ed(rng);
    const double x = model.potential.turning_points(e).second;
    const double q0 = std::min(qd(rng), -2.0 * x - 1e-3);
    const double p0 = std::sqrt(2.0 * (e - model.potential.evaluate(q0)));
    IntegratorConfig ic;
    ic.t_max = 40.0;
    ic.watch_levels = {-x, x};
    const auto tr = integrate(MomentState(0, 0.0, q0, p0), model, ic);
    CHECK(classify(tr, model.potential, e, default_margin(1.0)).tag == OutcomeTag::Reflected);
  }
}

TEST_CASE("larger margins never swap reflected and tunneled") {
  ModelConfig model;
  IntegratorConfig ic;
  ic.t_max = 4.0;
  const auto [left, right] = model.potential.turning_points(kEnergy);
  ic.watch_levels = {left, right};
  for (int i = 0; i < 25; ++i) {
    const double q0 = -2.2 + 0.035 * i;
    const double p0 = std::sqrt(2.0 * (kEnergy - model.potential.evaluate(q0)));
    const auto tr = integrate(initial_moments({q0, p0, 0.35, 1.0}, 2), model, ic);
    OutcomeTag prev = classify(tr, model.potential, kEnergy, 0.0).tag;
    for (double margin : {0.02, 0.05, 0.1, 0.25, 0.5, 1.0}) {
      const OutcomeTag cur = classify(tr, model.potential, kEnergy, margin).tag;
      if (prev == OutcomeTag::Reflected) CHECK(cur != OutcomeTag::Tunneled);
      if (prev == OutcomeTag::Tunneled) CHECK(cur != OutcomeTag::Reflected);
      if (prev == OutcomeTag::Undetermined || prev == OutcomeTag::Trapped) {
        CHECK((cur == OutcomeTag::Undetermined || cur == OutcomeTag::Trapped));
      }
      prev = cur;
    }
  }
}
