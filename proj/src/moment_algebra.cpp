#include "momentous/moment_algebra.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "momentous/error.hpp"

namespace momentous {
namespace {

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  std::int64_t out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

std::int64_t factorial(int n) {
  std::int64_t out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << '/' << r.denominator();
  return os.str();
}

std::string potential_factor(int k) {
  if (k <= 4) return "V" + std::string(static_cast<std::size_t>(k), '\'');
  return "V^(" + std::to_string(k) + ")";
}

// Factor list of a monomial without coefficient or mass, e.g. "p*V''*G^{2,0}".
std::string factor_string(const Monomial& m) {
  std::vector<std::string> parts;
  if (m.momentum_power == 1) parts.emplace_back("p");
  if (m.momentum_power > 1) parts.emplace_back("p^" + std::to_string(m.momentum_power));
  for (int k : m.potential_derivatives) parts.push_back(potential_factor(k));
  if (m.hbar_power == 1) parts.emplace_back("hbar");
  if (m.hbar_power > 1) parts.emplace_back("hbar^" + std::to_string(m.hbar_power));
  for (const auto& g : m.moments) parts.push_back(to_string(g));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += '*';
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string to_string(MomentIndex m) { return "G^{" + std::to_string(m.a) + "," + std::to_string(m.b) + "}"; }

int Monomial::moment_order() const {
  return std::accumulate(moments.begin(), moments.end(), 0,
                         [](int acc, const MomentIndex& g) { return acc + g.order(); });
}

Monomial operator*(const Monomial& lhs, const Monomial& rhs) {
  Monomial out = lhs;
  out.inv_mass += rhs.inv_mass;
  out.momentum_power += rhs.momentum_power;
  out.hbar_power += rhs.hbar_power;
  out.potential_derivatives.insert(out.potential_derivatives.end(), rhs.potential_derivatives.begin(),
                                   rhs.potential_derivatives.end());
  out.moments.insert(out.moments.end(), rhs.moments.begin(), rhs.moments.end());
  return canonical(std::move(out));
}

Monomial canonical(Monomial m, bool* vanishes) {
  std::sort(m.potential_derivatives.begin(), m.potential_derivatives.end());
  std::sort(m.moments.begin(), m.moments.end());
  if (vanishes) {
    *vanishes = std::any_of(m.moments.begin(), m.moments.end(), [](const MomentIndex& g) { return g.vanishes(); });
  }
  return m;
}

MomentPolynomial::MomentPolynomial(const Monomial& m, Rational coeff) { add_term(m, coeff); }

MomentPolynomial MomentPolynomial::constant(Rational c) { return MomentPolynomial(Monomial{}, c); }

MomentPolynomial MomentPolynomial::moment(MomentIndex m, Rational coeff) {
  Monomial mono;
  mono.moments.push_back(m);
  return MomentPolynomial(mono, coeff);
}

Rational MomentPolynomial::coefficient(Monomial m) const {
  auto it = terms_.find(canonical(std::move(m)));
  return it == terms_.end() ? Rational(0) : it->second;
}

void MomentPolynomial::add_term(Monomial m, Rational coeff) {
  bool vanishes = false;
  m = canonical(std::move(m), &vanishes);
  if (vanishes || coeff.numerator() == 0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(m), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.numerator() == 0) terms_.erase(it);
  }
}

MomentPolynomial& MomentPolynomial::operator+=(const MomentPolynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

MomentPolynomial& MomentPolynomial::operator-=(const MomentPolynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
  return *this;
}

MomentPolynomial operator*(Rational s, const MomentPolynomial& p) {
  MomentPolynomial out;
  if (s.numerator() == 0) return out;
  for (const auto& [m, c] : p.terms_) out.terms_.emplace(m, s * c);
  return out;
}

MomentPolynomial operator*(const MomentPolynomial& lhs, const MomentPolynomial& rhs) {
  MomentPolynomial out;
  for (const auto& [ml, cl] : lhs.terms_) {
    for (const auto& [mr, cr] : rhs.terms_) out.add_term(ml * mr, cl * cr);
  }
  return out;
}

MomentPolynomial MomentPolynomial::truncated(int max_weight) const {
  MomentPolynomial out;
  for (const auto& [m, c] : terms_) {
    if (m.weight() <= max_weight) out.terms_.emplace(m, c);
  }
  return out;
}

MomentPolynomial MomentPolynomial::without_moments_above(int max_order) const {
  MomentPolynomial out;
  for (const auto& [m, c] : terms_) {
    const bool keep = std::all_of(m.moments.begin(), m.moments.end(),
                                  [max_order](const MomentIndex& g) { return g.order() <= max_order; });
    if (keep) out.terms_.emplace(m, c);
  }
  return out;
}

std::string MomentPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = c.numerator() < 0;
    const Rational mag = negative ? -c : c;
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const std::string factors = factor_string(m);
    if (factors.empty()) {
      out += rational_to_string(mag);
    } else {
      if (mag != Rational(1)) out += rational_to_string(mag) + "*";
      out += factors;
    }
    if (m.inv_mass == 1) out += "/m";
    if (m.inv_mass > 1) out += "/m^" + std::to_string(m.inv_mass);
  }
  return out;
}

std::int64_t k_sum(int n, int a, int b, int c, int d) {
  std::int64_t sum = 0;
  for (int s = 0; s <= n; ++s) {
    const std::int64_t term = factorial(s) * factorial(n - s) * binomial(a, s) * binomial(b, n - s) *
                              binomial(c, n - s) * binomial(d, s);
    sum += (s % 2 == 0) ? term : -term;
  }
  return sum;
}

std::int64_t k_coefficient(int n, int a, int b, int c, int d) {
  if (a < 0 || b < 0 || c < 0 || d < 0) throw RangeViolation("k_coefficient: negative moment index");
  const int upper = std::min({a + c, b + d, a + b, c + d});
  if (n < 1 || n % 2 == 0 || n >= upper) {
    throw RangeViolation("k_coefficient: n=" + std::to_string(n) + " must be odd with 1 <= n < " +
                         std::to_string(upper));
  }
  return k_sum(n, a, b, c, d);
}

MomentPolynomial bracket_formula(MomentIndex lhs, MomentIndex rhs) {
  const int a = lhs.a, b = lhs.b, c = rhs.a, d = rhs.b;
  MomentPolynomial out;

  if (a * d != 0) {
    Monomial m;
    m.moments = {{a - 1, b}, {c, d - 1}};
    out.add_term(m, Rational(a * d));
  }
  if (b * c != 0) {
    Monomial m;
    m.moments = {{a, b - 1}, {c - 1, d}};
    out.add_term(m, Rational(-b * c));
  }

  const int upper = std::min({a + c, b + d, a + b, c + d});
  for (int n = 1; n < upper; n += 2) {
    const std::int64_t k = k_coefficient(n, a, b, c, d);
    if (k == 0) continue;
    // (i hbar / 2)^{n-1} = (-1)^{(n-1)/2} hbar^{n-1} / 2^{n-1}
    Rational factor(((n - 1) / 2) % 2 == 0 ? 1 : -1, std::int64_t{1} << (n - 1));
    Monomial m;
    m.hbar_power = n - 1;
    m.moments = {{a + c - n, b + d - n}};
    out.add_term(m, factor * k);
  }
  return out;
}

std::string Variable::name() const {
  switch (kind) {
    case Kind::Position:
      return "q";
    case Kind::Momentum:
      return "p";
    case Kind::Moment:
      return momentous::to_string(moment);
  }
  return "?";
}

MomentPolynomial poisson_bracket(const Variable& x, const MomentPolynomial& f) {
  MomentPolynomial out;
  for (const auto& [m, c] : f.terms()) {
    switch (x.kind) {
      case Variable::Kind::Position: {
        // {q, f} = df/dp
        if (m.momentum_power == 0) break;
        Monomial d = m;
        d.momentum_power -= 1;
        out.add_term(d, c * m.momentum_power);
        break;
      }
      case Variable::Kind::Momentum: {
        // {p, f} = -df/dq; only potential factors depend on q.
        for (std::size_t i = 0; i < m.potential_derivatives.size(); ++i) {
          Monomial d = m;
          d.potential_derivatives[i] += 1;
          out.add_term(d, -c);
        }
        break;
      }
      case Variable::Kind::Moment: {
        // Leibniz over the moment factors; classical factors commute with moments.
        for (std::size_t i = 0; i < m.moments.size(); ++i) {
          Monomial rest = m;
          rest.moments.erase(rest.moments.begin() + static_cast<std::ptrdiff_t>(i));
          out += MomentPolynomial(rest, c) * bracket_formula(x.moment, m.moments[i]);
        }
        break;
      }
    }
  }
  return out;
}

MomentPolynomial symbolic_hamiltonian(int order) {
  if (order != 0 && order != 2 && order != 3) throw InvalidOrder("symbolic_hamiltonian: order must be 0, 2 or 3");
  MomentPolynomial h;
  Monomial kinetic;
  kinetic.inv_mass = 1;
  kinetic.momentum_power = 2;
  h.add_term(kinetic, Rational(1, 2));
  Monomial pot;
  pot.potential_derivatives = {0};
  h.add_term(pot, 1);
  if (order == 0) return h;

  Monomial spread;
  spread.inv_mass = 1;
  spread.moments = {{0, 2}};
  h.add_term(spread, Rational(1, 2));
  std::int64_t fact = 1;
  for (int k = 2; k <= order; ++k) {
    fact *= k;
    Monomial corr;
    corr.potential_derivatives = {k};
    corr.moments = {{k, 0}};
    h.add_term(corr, Rational(1, fact));
  }
  return h;
}

std::vector<Variable> state_variables(int order) {
  if (order != 0 && order != 2 && order != 3) throw InvalidOrder("state_variables: order must be 0, 2 or 3");
  std::vector<Variable> vars{Variable::position(), Variable::momentum()};
  if (order >= 2) {
    vars.push_back(Variable::g(2, 0));
    vars.push_back(Variable::g(1, 1));
    vars.push_back(Variable::g(0, 2));
  }
  if (order >= 3) {
    vars.push_back(Variable::g(3, 0));
    vars.push_back(Variable::g(2, 1));
    vars.push_back(Variable::g(1, 2));
    vars.push_back(Variable::g(0, 3));
  }
  return vars;
}

EomTable derive_eoms(int order) {
  const MomentPolynomial h = symbolic_hamiltonian(order);
  EomTable table;
  for (const auto& v : state_variables(order)) {
    table.push_back({v, poisson_bracket(v, h).truncated(order)});
  }
  return table;
}

std::string to_string(const EomTable& table) {
  std::string out;
  for (const auto& eq : table) out += "d/dt " + eq.lhs.name() + " = " + eq.rhs.to_string() + "\n";
  return out;
}

}  // namespace momentous
