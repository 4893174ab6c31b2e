#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace momentous {

using Rational = boost::rational<std::int64_t>;

/// Index (a, b) of the Weyl-ordered central moment G^{a,b} = <(q-<q>)^a (p-<p>)^b>.
/// (1,0) and (0,1) are valid symbols but identically zero.
struct MomentIndex {
  int a = 0;
  int b = 0;

  constexpr int order() const { return a + b; }
  constexpr bool vanishes() const { return order() == 1; }
  auto operator<=>(const MomentIndex&) const = default;
};

std::string to_string(MomentIndex m);

/// Product of symbolic factors: m^{-inv_mass} p^{momentum_power} prod V^(k) hbar^{hbar_power} prod G.
/// The bracket algebra itself only produces hbar powers and moments; the classical factors
/// are needed to express equations of motion and the effective Hamiltonian.
struct Monomial {
  int inv_mass = 0;
  int momentum_power = 0;
  std::vector<int> potential_derivatives;  // sorted
  int hbar_power = 0;
  std::vector<MomentIndex> moments;  // sorted

  /// Sum of moment orders.
  int moment_order() const;
  /// Semiclassical weight: moment order plus two per explicit hbar.
  int weight() const { return moment_order() + 2 * hbar_power; }

  auto operator<=>(const Monomial&) const = default;
};

Monomial operator*(const Monomial& lhs, const Monomial& rhs);

/// Finite sum of rational multiples of monomials, kept in canonical form:
/// factor lists sorted, zero coefficients removed, any term containing G^{1,0} or G^{0,1} dropped.
class MomentPolynomial {
 public:
  using Terms = std::map<Monomial, Rational>;

  MomentPolynomial() = default;
  MomentPolynomial(const Monomial& m, Rational coeff);

  static MomentPolynomial constant(Rational c);
  static MomentPolynomial moment(MomentIndex m, Rational coeff = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Coefficient of a monomial (which is canonicalized first); zero if absent.
  Rational coefficient(Monomial m) const;

  void add_term(Monomial m, Rational coeff);

  MomentPolynomial& operator+=(const MomentPolynomial& rhs);
  MomentPolynomial& operator-=(const MomentPolynomial& rhs);
  friend MomentPolynomial operator+(MomentPolynomial lhs, const MomentPolynomial& rhs) { return lhs += rhs; }
  friend MomentPolynomial operator-(MomentPolynomial lhs, const MomentPolynomial& rhs) { return lhs -= rhs; }
  friend MomentPolynomial operator-(const MomentPolynomial& p) { return Rational(-1) * p; }
  friend MomentPolynomial operator*(Rational s, const MomentPolynomial& p);
  friend MomentPolynomial operator*(const MomentPolynomial& lhs, const MomentPolynomial& rhs);

  /// Keep only terms with weight <= max_weight.
  MomentPolynomial truncated(int max_weight) const;

  /// Replace every moment of order > max_order by zero.
  MomentPolynomial without_moments_above(int max_order) const;

  /// Human-readable form, e.g. "-V' - 1/2*V'''*G^{2,0}"; "0" when empty.
  std::string to_string() const;

  friend bool operator==(const MomentPolynomial&, const MomentPolynomial&) = default;

 private:
  Terms terms_;
};

/// Returns a copy of `m` with sorted factor lists; sets `vanishes` when it holds a first-order moment.
Monomial canonical(Monomial m, bool* vanishes = nullptr);

/// Direct evaluation of sum_{s=0}^{n} (-1)^s s! (n-s)! C(a,s) C(b,n-s) C(c,n-s) C(d,s)
/// with binomials vanishing when the lower index exceeds the upper. No range check.
std::int64_t k_sum(int n, int a, int b, int c, int d);

/// K^n_{abcd} restricted to the range used by the moment bracket:
/// n odd and 1 <= n < min(a+c, b+d, a+b, c+d). Throws RangeViolation otherwise.
std::int64_t k_coefficient(int n, int a, int b, int c, int d);

/// Literal moment bracket {G^{a,b}, G^{c,d}}:
///   ad G^{a-1,b} G^{c,d-1} - bc G^{a,b-1} G^{c-1,d}
///   + sum_{odd n, 1 <= n < min(a+c,b+d,a+b,c+d)} (i hbar/2)^{n-1} K^n_{abcd} G^{a+c-n,b+d-n}
/// with (i hbar/2)^{n-1} = (-1)^{(n-1)/2} (hbar/2)^{n-1}. Returned in canonical form.
MomentPolynomial bracket_formula(MomentIndex lhs, MomentIndex rhs);

/// Fluent builder for a single term, e.g. `term(-2).g(1, 1).per_mass()` for -2 G^{1,1}/m.
class TermBuilder {
 public:
  explicit TermBuilder(Rational coeff) : coeff_(coeff) {}

  TermBuilder& per_mass() {
    mono_.inv_mass += 1;
    return *this;
  }
  TermBuilder& p(int power = 1) {
    mono_.momentum_power += power;
    return *this;
  }
  TermBuilder& v(int derivative) {
    mono_.potential_derivatives.push_back(derivative);
    return *this;
  }
  TermBuilder& hbar(int power = 1) {
    mono_.hbar_power += power;
    return *this;
  }
  TermBuilder& g(int a, int b) {
    mono_.moments.push_back({a, b});
    return *this;
  }

  operator MomentPolynomial() const { return MomentPolynomial(mono_, coeff_); }

 private:
  Rational coeff_;
  Monomial mono_;
};

inline TermBuilder term(Rational coeff = 1) { return TermBuilder(coeff); }

inline MomentPolynomial sum_of(std::initializer_list<MomentPolynomial> parts) {
  MomentPolynomial out;
  for (const auto& p : parts) out += p;
  return out;
}

/// Dynamical variable of the truncated system.
struct Variable {
  enum class Kind { Position, Momentum, Moment };
  Kind kind = Kind::Position;
  MomentIndex moment{};

  static Variable position() { return {Kind::Position, {}}; }
  static Variable momentum() { return {Kind::Momentum, {}}; }
  static Variable g(int a, int b) { return {Kind::Moment, {a, b}}; }

  std::string name() const;
  auto operator<=>(const Variable&) const = default;
};

/// Poisson bracket {x, f} from the elementary brackets {q,p} = 1, {q,G} = {p,G} = 0,
/// the Leibniz rule, and bracket_formula for pairs of moments.
MomentPolynomial poisson_bracket(const Variable& x, const MomentPolynomial& f);

/// Symbolic effective Hamiltonian truncated at `order` (0, 2 or 3):
/// p^2/2m + V + G^{0,2}/2m + sum_{k=2}^{order} V^(k) G^{k,0} / k!.
MomentPolynomial symbolic_hamiltonian(int order);

struct EomEquation {
  Variable lhs;
  MomentPolynomial rhs;

  friend bool operator==(const EomEquation&, const EomEquation&) = default;
};

/// Right-hand sides for every variable of a truncation, in state-vector order.
using EomTable = std::vector<EomEquation>;

/// Variables of the truncation of `order` (0, 2 or 3) in state-vector order:
/// q, p, G^{2,0}, G^{1,1}, G^{0,2}, G^{3,0}, G^{2,1}, G^{1,2}, G^{0,3}.
std::vector<Variable> state_variables(int order);

/// Equations of motion obtained by bracketing each variable with symbolic_hamiltonian(order)
/// through the literal moment bracket, keeping terms of weight <= order.
EomTable derive_eoms(int order);

/// Renders "d/dt x = rhs" lines, one per equation.
std::string to_string(const EomTable& table);

}  // namespace momentous
