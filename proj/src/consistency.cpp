#include "momentous/consistency.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

#include "momentous/dynamics.hpp"

namespace momentous {
namespace {

const MomentPolynomial* find_rhs(const EomTable& table, const Variable& v) {
  for (const auto& eq : table) {
    if (eq.lhs == v) return &eq.rhs;
  }
  return nullptr;
}

const KnownDiscrepancy* find_known(const std::vector<KnownDiscrepancy>& known, const std::string& section,
                                   const Variable& v) {
  for (const auto& k : known) {
    if (k.section_id == section && k.variable == v) return &k;
  }
  return nullptr;
}

EquationCheck judge(const std::string& section, const Variable& v, const MomentPolynomial& reference,
                    const MomentPolynomial& candidate, const std::vector<KnownDiscrepancy>& known) {
  EquationCheck check;
  check.variable = v;
  check.reference = reference;
  check.candidate = candidate;
  check.difference = reference - candidate;
  const KnownDiscrepancy* k = find_known(known, section, v);
  if (check.difference.is_zero()) {
    check.status = k ? CheckStatus::Unexpected : CheckStatus::Match;
    if (k) check.note = "documented discrepancy no longer present";
  } else if (k && k->difference == check.difference) {
    check.status = CheckStatus::Known;
    check.note = k->note;
  } else {
    check.status = CheckStatus::Unexpected;
    check.note = k ? "differs from the documented discrepancy" : "undocumented difference";
  }
  return check;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Match:
      return "MATCH";
    case CheckStatus::Known:
      return "KNOWN";
    case CheckStatus::Unexpected:
      return "UNEXPECTED";
  }
  return "UNEXPECTED";
}

const std::vector<KnownDiscrepancy>& known_discrepancies() {
  static const std::vector<KnownDiscrepancy> known = {
      {"order2-bracket", Variable::g(1, 1), sum_of({term(-1).g(0, 2).per_mass(), term().v(2).g(2, 0)}),
       "literal bracket gives {G^{1,1},G^{0,2}} = {G^{1,1},G^{2,0}} = 0"},
      {"order3-bracket", Variable::g(1, 1),
       sum_of({term(-1).g(0, 2).per_mass(), term().v(2).g(2, 0), term(Rational(1, 2)).v(3).g(3, 0)}),
       "literal bracket gives {G^{1,1},G^{a,b}} = 0 for G^{0,2}, G^{2,0}, G^{3,0}"},
      {"order3-bracket", Variable::g(2, 1), term().v(2).g(3, 0), "literal bracket gives {G^{2,1},G^{2,0}} = 0"},
      {"order3-bracket", Variable::g(1, 2), term(-1).g(0, 3).per_mass(),
       "literal bracket gives {G^{1,2},G^{0,2}} = 0"},
      {"order2-printed", Variable::momentum(),
       sum_of({term(-1).v(1), term(Rational(-1, 2)).v(3).g(2, 0), term(-2).v(2).g(1, 1)}),
       "printed momentum equation carries the G^{0,2} right-hand side; -V' force absent"},
      {"order2-printed", Variable::g(0, 2), term(2).v(2).g(1, 1), "G^{0,2} equation not listed"},
  };
  return known;
}

const EomTable& printed_second_order_listing() {
  static const EomTable listing = {
      {Variable::position(), term().p().per_mass()},
      {Variable::g(2, 0), term(-2).g(1, 1).per_mass()},
      {Variable::momentum(), term(2).v(2).g(1, 1)},
      {Variable::g(1, 1), sum_of({term(-1).g(0, 2).per_mass(), term().v(2).g(2, 0)})},
  };
  return listing;
}

ConsistencySection compare_with_bracket_derivation(int order, const EomTable& reference,
                                                   const std::vector<KnownDiscrepancy>& known) {
  ConsistencySection section;
  section.id = "order" + std::to_string(order) + "-bracket";
  section.title = "order " + std::to_string(order) + ": authoritative table vs literal moment bracket";
  const EomTable derived = derive_eoms(order);
  for (const auto& eq : reference) {
    const MomentPolynomial* cand = find_rhs(derived, eq.lhs);
    EquationCheck check = judge(section.id, eq.lhs, eq.rhs, cand ? *cand : MomentPolynomial{}, known);
    if (!cand) {
      check.status = CheckStatus::Unexpected;
      check.note = "variable not part of the truncation";
    }
    section.equations.push_back(std::move(check));
  }
  for (const auto& eq : derived) {
    if (!find_rhs(reference, eq.lhs)) {
      EquationCheck check = judge(section.id, eq.lhs, MomentPolynomial{}, eq.rhs, known);
      check.status = CheckStatus::Unexpected;
      check.note = "equation missing from table";
      section.equations.push_back(std::move(check));
    }
  }
  return section;
}

ConsistencySection compare_with_printed_listing(const EomTable& reference,
                                                const std::vector<KnownDiscrepancy>& known) {
  ConsistencySection section;
  section.id = "order2-printed";
  section.title = "order 2: authoritative table vs printed second-order listing";
  const EomTable& printed = printed_second_order_listing();
  for (const auto& eq : reference) {
    const MomentPolynomial* cand = find_rhs(printed, eq.lhs);
    section.equations.push_back(judge(section.id, eq.lhs, eq.rhs, cand ? *cand : MomentPolynomial{}, known));
  }
  return section;
}

std::vector<PropertyCheck> bracket_property_checks() {
  std::vector<MomentIndex> moments;
  for (int order = 2; order <= 4; ++order) {
    for (int a = order; a >= 0; --a) moments.push_back({a, order - a});
  }

  PropertyCheck antisym{"antisymmetry {X,Y} = -{Y,X} for moment orders 2..4", true, ""};
  PropertyCheck grading{"grading: hbar^k terms have moment order a+b+c+d-2-2k", true, ""};
  PropertyCheck idempotent{"canonicalization is idempotent", true, ""};
  std::size_t pairs = 0, terms = 0;
  for (const auto& x : moments) {
    for (const auto& y : moments) {
      ++pairs;
      const MomentPolynomial xy = bracket_formula(x, y);
      if (xy != -bracket_formula(y, x)) {
        antisym.passed = false;
        antisym.detail = "fails for " + to_string(x) + ", " + to_string(y);
      }
      for (const auto& [m, c] : xy.terms()) {
        ++terms;
        if (m.moment_order() != x.order() + y.order() - 2 - 2 * m.hbar_power) {
          grading.passed = false;
          grading.detail = "fails for " + to_string(x) + ", " + to_string(y);
        }
        Monomial shuffled = m;
        std::reverse(shuffled.moments.begin(), shuffled.moments.end());
        if (canonical(canonical(shuffled)) != canonical(shuffled) || canonical(shuffled) != m) {
          idempotent.passed = false;
          idempotent.detail = "fails for a term of {" + to_string(x) + ", " + to_string(y) + "}";
        }
      }
      MomentPolynomial rebuilt;
      for (auto it = xy.terms().rbegin(); it != xy.terms().rend(); ++it) rebuilt.add_term(it->first, it->second);
      if (rebuilt != xy) {
        idempotent.passed = false;
        idempotent.detail = "re-adding terms changed {" + to_string(x) + ", " + to_string(y) + "}";
      }
    }
  }
  if (antisym.passed) antisym.detail = std::to_string(pairs) + " pairs";
  if (grading.passed) grading.detail = std::to_string(terms) + " terms";
  if (idempotent.passed) idempotent.detail = std::to_string(terms) + " terms";

  PropertyCheck k1{"K^1_{abcd} = bc - ad for 0 <= a,b,c,d <= 6", true, ""};
  std::size_t tuples = 0;
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b)
      for (int c = 0; c <= 6; ++c)
        for (int d = 0; d <= 6; ++d) {
          ++tuples;
          if (k_sum(1, a, b, c, d) != b * c - a * d) {
            k1.passed = false;
            k1.detail = "fails at (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," +
                        std::to_string(d) + ")";
          }
        }
  if (k1.passed) k1.detail = std::to_string(tuples) + " tuples";
  return {antisym, grading, idempotent, k1};
}

bool ConsistencyReport::clean() const {
  return count(CheckStatus::Unexpected) == 0 &&
         std::all_of(properties.begin(), properties.end(), [](const PropertyCheck& p) { return p.passed; });
}

std::size_t ConsistencyReport::count(CheckStatus s) const {
  std::size_t n = 0;
  for (const auto& sec : sections) {
    n += static_cast<std::size_t>(std::count_if(sec.equations.begin(), sec.equations.end(),
                                                [s](const EquationCheck& e) { return e.status == s; }));
  }
  return n;
}

std::string ConsistencyReport::to_text() const {
  std::ostringstream os;
  os << "Moment algebra consistency report\n";
  for (const auto& sec : sections) {
    os << "\n[" << sec.id << "] " << sec.title << "\n";
    for (const auto& eq : sec.equations) {
      os << "  " << pad("d/dt " + eq.variable.name(), 16) << to_string(eq.status);
      if (!eq.note.empty()) os << "  (" << eq.note << ")";
      os << "\n";
      os << "      reference: " << eq.reference.to_string() << "\n";
      os << "      compared:  " << eq.candidate.to_string() << "\n";
      if (!eq.difference.is_zero()) os << "      difference: " << eq.difference.to_string() << "\n";
    }
  }
  os << "\n[properties] bracket formula checks\n";
  for (const auto& p : properties) {
    os << "  " << (p.passed ? "PASS" : "FAIL") << "  " << p.name << " (" << p.detail << ")\n";
  }
  std::size_t passed = static_cast<std::size_t>(
      std::count_if(properties.begin(), properties.end(), [](const PropertyCheck& p) { return p.passed; }));
  os << "\nsummary: match=" << count(CheckStatus::Match) << " known=" << count(CheckStatus::Known)
     << " unexpected=" << count(CheckStatus::Unexpected) << " properties=" << passed << "/" << properties.size()
     << "\n";
  return os.str();
}

std::string ConsistencyReport::to_json() const {
  nlohmann::ordered_json j;
  j["sections"] = nlohmann::ordered_json::array();
  for (const auto& sec : sections) {
    nlohmann::ordered_json s;
    s["id"] = sec.id;
    s["title"] = sec.title;
    s["equations"] = nlohmann::ordered_json::array();
    for (const auto& eq : sec.equations) {
      s["equations"].push_back({{"variable", eq.variable.name()},
                                {"status", to_string(eq.status)},
                                {"reference", eq.reference.to_string()},
                                {"compared", eq.candidate.to_string()},
                                {"difference", eq.difference.to_string()},
                                {"note", eq.note}});
    }
    j["sections"].push_back(std::move(s));
  }
  j["properties"] = nlohmann::ordered_json::array();
  for (const auto& p : properties) {
    j["properties"].push_back({{"name", p.name}, {"passed", p.passed}, {"detail", p.detail}});
  }
  j["summary"] = {{"match", count(CheckStatus::Match)},
                  {"known", count(CheckStatus::Known)},
                  {"unexpected", count(CheckStatus::Unexpected)},
                  {"clean", clean()}};
  return j.dump(2) + "\n";
}

ConsistencyReport verify_eom_consistency(const EomTable& order2, const EomTable& order3) {
  const auto& known = known_discrepancies();
  ConsistencyReport report;
  report.sections.push_back(compare_with_bracket_derivation(2, order2, known));
  report.sections.push_back(compare_with_printed_listing(order2, known));
  report.sections.push_back(compare_with_bracket_derivation(3, order3, known));
  report.properties = bracket_property_checks();
  return report;
}

ConsistencyReport verify_eom_consistency() { return verify_eom_consistency(eom_table(2), eom_table(3)); }

ConsistencyReport verify_eom_consistency(int order) {
  const auto& known = known_discrepancies();
  ConsistencyReport report;
  report.sections.push_back(compare_with_bracket_derivation(order, eom_table(order), known));
  if (order == 2) report.sections.push_back(compare_with_printed_listing(eom_table(2), known));
  report.properties = bracket_property_checks();
  return report;
}

}  // namespace momentous
