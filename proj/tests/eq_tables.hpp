#pragma once
// Hand transcription of the third-order system and its second-order reduction, kept apart from
// the library tables so that the two can be compared term by term.

#include "momentous/moment_algebra.hpp"

namespace transcribed {

using namespace momentous;

inline EomTable third_order() {
  return {
      {Variable::position(), term().p().per_mass()},
      {Variable::momentum(), sum_of({term(-1).v(1), term(Rational(-1, 2)).v(3).g(2, 0), term(Rational(-1, 6)).v(4).g(3, 0)})},
      {Variable::g(2, 0), term(-2).per_mass().g(1, 1)},
      {Variable::g(1, 1), sum_of({term(-1).per_mass().g(0, 2), term().v(2).g(2, 0), term(Rational(1, 2)).v(3).g(3, 0)})},
      {Variable::g(0, 2), sum_of({term(2).v(2).g(1, 1), term().v(3).g(2, 1)})},
      {Variable::g(3, 0), term(-3).per_mass().g(2, 1)},
      {Variable::g(2, 1), sum_of({term(-2).per_mass().g(1, 2), term().v(2).g(3, 0)})},
      {Variable::g(1, 2), sum_of({term(-1).per_mass().g(0, 3), term(2).v(2).g(2, 1)})},
      {Variable::g(0, 3), term(3).v(2).g(1, 2)},
  };
}

inline EomTable second_order() {
  return {
      {Variable::position(), term().p().per_mass()},
      {Variable::momentum(), sum_of({term(-1).v(1), term(Rational(-1, 2)).v(3).g(2, 0)})},
      {Variable::g(2, 0), term(-2).per_mass().g(1, 1)},
      {Variable::g(1, 1), sum_of({term(-1).per_mass().g(0, 2), term().v(2).g(2, 0)})},
      {Variable::g(0, 2), term(2).v(2).g(1, 1)},
  };
}

}  // namespace transcribed
