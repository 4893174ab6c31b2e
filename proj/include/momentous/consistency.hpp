#pragma once

#include <string>
#include <vector>

#include "momentous/moment_algebra.hpp"

namespace momentous {

enum class CheckStatus {
  Match,       // both sides agree term for term
  Known,       // documented discrepancy, differing terms exactly as recorded
  Unexpected,  // any other disagreement, or a documented discrepancy that changed
};

std::string to_string(CheckStatus s);

struct EquationCheck {
  Variable variable;
  MomentPolynomial reference;  // table under test
  MomentPolynomial candidate;  // what it is compared against
  MomentPolynomial difference; // reference - candidate
  CheckStatus status = CheckStatus::Match;
  std::string note;
};

struct ConsistencySection {
  std::string id;     // stable identifier, e.g. "order2-bracket"
  std::string title;
  std::vector<EquationCheck> equations;
};

struct PropertyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConsistencyReport {
  std::vector<ConsistencySection> sections;
  std::vector<PropertyCheck> properties;

  /// True when no equation is Unexpected and every property check passed.
  bool clean() const;
  std::size_t count(CheckStatus s) const;

  std::string to_text() const;
  /// Structured form written by the CLI next to the text report.
  std::string to_json() const;
};

/// Documented difference between two tables for one equation.
struct KnownDiscrepancy {
  std::string section_id;
  Variable variable;
  MomentPolynomial difference;
  std::string note;
};

/// Discrepancies that the literal moment bracket and the printed second-order listing are
/// expected to show against the authoritative tables.
const std::vector<KnownDiscrepancy>& known_discrepancies();

/// The second-order equations exactly as printed alongside the second-order Hamiltonian:
/// q, G^{2,0}, p (with the right-hand side 2 V'' G^{1,1}) and G^{1,1}; G^{0,2} is not listed.
const EomTable& printed_second_order_listing();

/// Compares `reference` against bracket derivation of the same order (section "order<N>-bracket").
ConsistencySection compare_with_bracket_derivation(int order, const EomTable& reference,
                                                   const std::vector<KnownDiscrepancy>& known);

/// Compares an order-2 reference table with the printed listing (section "order2-printed").
ConsistencySection compare_with_printed_listing(const EomTable& reference,
                                                const std::vector<KnownDiscrepancy>& known);

/// Exhaustive algebraic checks: antisymmetry and grading of bracket_formula for moment orders
/// 2..4, idempotent canonicalization, and K^1_{abcd} = bc - ad for 0 <= a,b,c,d <= 6.
std::vector<PropertyCheck> bracket_property_checks();

/// Full report for orders 2 and 3 against the given authoritative tables.
ConsistencyReport verify_eom_consistency(const EomTable& order2, const EomTable& order3);

/// Report for the authoritative tables used by the dynamics.
ConsistencyReport verify_eom_consistency();

/// Single-order variant: bracket comparison for `order` (plus the printed listing at order 2).
ConsistencyReport verify_eom_consistency(int order);

}  // namespace momentous
