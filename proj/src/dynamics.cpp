#include "momentous/dynamics.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "momentous/error.hpp"

namespace momentous {
namespace {

void check_order(int order) {
  if (order != 0 && order != 2 && order != 3) {
    throw InvalidOrder("truncation order must be 0, 2 or 3, got " + std::to_string(order));
  }
}

EomTable third_order_table() {
  return {
      {Variable::position(), term().p().per_mass()},
      {Variable::momentum(),
       sum_of({term(-1).v(1), term(Rational(-1, 2)).v(3).g(2, 0), term(Rational(-1, 6)).v(4).g(3, 0)})},
      {Variable::g(2, 0), term(-2).g(1, 1).per_mass()},
      {Variable::g(1, 1),
       sum_of({term(-1).g(0, 2).per_mass(), term().v(2).g(2, 0), term(Rational(1, 2)).v(3).g(3, 0)})},
      {Variable::g(0, 2), sum_of({term(2).v(2).g(1, 1), term().v(3).g(2, 1)})},
      {Variable::g(3, 0), term(-3).g(2, 1).per_mass()},
      {Variable::g(2, 1), sum_of({term(-2).g(1, 2).per_mass(), term().v(2).g(3, 0)})},
      {Variable::g(1, 2), sum_of({term(-1).g(0, 3).per_mass(), term(2).v(2).g(2, 1)})},
      {Variable::g(0, 3), term(3).v(2).g(1, 2)},
  };
}

EomTable second_order_table() {
  return {
      {Variable::position(), term().p().per_mass()},
      {Variable::momentum(), sum_of({term(-1).v(1), term(Rational(-1, 2)).v(3).g(2, 0)})},
      {Variable::g(2, 0), term(-2).g(1, 1).per_mass()},
      {Variable::g(1, 1), sum_of({term(-1).g(0, 2).per_mass(), term().v(2).g(2, 0)})},
      {Variable::g(0, 2), term(2).v(2).g(1, 1)},
  };
}

EomTable classical_table() {
  return {
      {Variable::position(), term().p().per_mass()},
      {Variable::momentum(), term(-1).v(1)},
  };
}

// Flattened form of a table term for fast repeated evaluation.
struct CompiledTerm {
  double coeff = 0.0;
  int inv_mass = 0;
  int hbar_power = 0;
  int momentum_power = 0;
  std::vector<int> potential_derivatives;
  std::vector<int> slots;
};

using CompiledTable = std::vector<std::vector<CompiledTerm>>;

CompiledTable compile(const EomTable& table) {
  CompiledTable out;
  for (const auto& eq : table) {
    std::vector<CompiledTerm> terms;
    for (const auto& [m, c] : eq.rhs.terms()) {
      CompiledTerm t;
      t.coeff = boost::rational_cast<double>(c);
      t.inv_mass = m.inv_mass;
      t.hbar_power = m.hbar_power;
      t.momentum_power = m.momentum_power;
      t.potential_derivatives = m.potential_derivatives;
      for (const auto& g : m.moments) t.slots.push_back(moment_slot(g));
      terms.push_back(std::move(t));
    }
    out.push_back(std::move(terms));
  }
  return out;
}

const CompiledTable& compiled_table(int order) {
  static const CompiledTable t0 = compile(eom_table(0));
  static const CompiledTable t2 = compile(eom_table(2));
  static const CompiledTable t3 = compile(eom_table(3));
  check_order(order);
  return order == 0 ? t0 : (order == 2 ? t2 : t3);
}

double power(double x, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

}  // namespace

std::size_t state_size(int order) {
  check_order(order);
  return order == 0 ? 2 : (order == 2 ? 5 : 9);
}

int moment_slot(MomentIndex m) {
  static constexpr std::array<MomentIndex, 7> layout{{{2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}}};
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (layout[i] == m) return static_cast<int>(i) + 2;
  }
  return -1;
}

MomentState::MomentState(int order, double t, double q, double p) : order_(order), t_(t) {
  check_order(order);
  y_[0] = q;
  y_[1] = p;
}

double MomentState::g(int a, int b) const {
  const int slot = moment_slot({a, b});
  if (slot < 0 || static_cast<std::size_t>(slot) >= size()) return 0.0;
  return y_[static_cast<std::size_t>(slot)];
}

void MomentState::set_g(int a, int b, double value) {
  const int slot = moment_slot({a, b});
  if (slot < 0 || static_cast<std::size_t>(slot) >= size()) {
    throw InvalidArgument("moment " + to_string(MomentIndex{a, b}) + " is not tracked at order " +
                          std::to_string(order_));
  }
  y_[static_cast<std::size_t>(slot)] = value;
}

bool MomentState::finite() const {
  if (!std::isfinite(t_)) return false;
  for (double v : active()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool MomentState::dispersions_nonnegative() const { return g(2, 0) >= 0.0 && g(0, 2) >= 0.0; }

void ModelConfig::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidArgument("mass must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("hbar must be positive");
  check_order(order);
}

const EomTable& eom_table(int order) {
  static const EomTable t0 = classical_table();
  static const EomTable t2 = second_order_table();
  static const EomTable t3 = third_order_table();
  check_order(order);
  return order == 0 ? t0 : (order == 2 ? t2 : t3);
}

double evaluate(const MomentPolynomial& poly, const EvalContext& ctx) {
  double sum = 0.0;
  for (const auto& [m, c] : poly.terms()) {
    double v = boost::rational_cast<double>(c) / power(ctx.mass, m.inv_mass) * power(ctx.hbar, m.hbar_power) *
               power(ctx.state->p(), m.momentum_power);
    for (int k : m.potential_derivatives) v *= ctx.potential_derivatives[static_cast<std::size_t>(k)];
    for (const auto& g : m.moments) v *= ctx.state->g(g.a, g.b);
    sum += v;
  }
  return sum;
}

MomentState::Vector rhs(const MomentState& state, const ModelConfig& cfg) {
  const auto& table = compiled_table(cfg.order);
  const auto derivs = cfg.potential.derivatives(state.q());
  const auto& y = state.vector();
  MomentState::Vector dy{};
  for (std::size_t i = 0; i < table.size(); ++i) {
    double acc = 0.0;
    for (const auto& t : table[i]) {
      double v = t.coeff / power(cfg.mass, t.inv_mass) * power(cfg.hbar, t.hbar_power) *
                 power(y[1], t.momentum_power);
      for (int k : t.potential_derivatives) v *= derivs[static_cast<std::size_t>(k)];
      for (int s : t.slots) v *= y[static_cast<std::size_t>(s)];
      acc += v;
    }
    dy[i] = acc;
  }
  return dy;
}

double effective_hamiltonian(const MomentState& state, const ModelConfig& cfg) {
  static const MomentPolynomial h0 = symbolic_hamiltonian(0);
  static const MomentPolynomial h2 = symbolic_hamiltonian(2);
  static const MomentPolynomial h3 = symbolic_hamiltonian(3);
  const auto derivs = cfg.potential.derivatives(state.q());
  const EvalContext ctx{cfg.mass, cfg.hbar, &state, derivs};
  switch (cfg.order) {
    case 0:
      return evaluate(h0, ctx);
    case 2:
      return evaluate(h2, ctx);
    case 3:
      return evaluate(h3, ctx);
  }
  check_order(cfg.order);
  return 0.0;
}

double effective_potential(double q, const MomentState& state, const ModelConfig& cfg) {
  if (cfg.order == 0) return cfg.potential.evaluate(q);
  const auto d = cfg.potential.derivatives(q);
  double v = d[0] + 0.5 * d[2] * state.g(2, 0) + state.g(0, 2) / (2.0 * cfg.mass);
  if (cfg.order == 3 && cfg.veff_third_order_term) v += d[3] * state.g(3, 0) / 6.0;
  return v;
}

}  // namespace momentous
