#pragma once

#include <random>
#include <string>
#include <vector>

#include "cdkit/conditions.hpp"
#include "cdkit/random.hpp"

namespace test {

inline const cdkit::Formula& gamma() { return cdkit::gamma_formula(); }
inline const cdkit::Formula& delta() { return cdkit::delta_formula(); }

/// Random formula with the given names usable both free and bound.
template <class Rng>
cdkit::Formula random_formula(Rng& rng, int max_size, const std::vector<std::string>& vars,
                              const cdkit::Signature& sig, int max_rank) {
  cdkit::FormulaSpace space;
  space.signature = sig;
  space.binders = vars;
  space.free_names = vars;
  space.constants = {1, 2};
  space.max_rank = max_rank;
  return cdkit::random_formula(rng, max_size, space);
}

inline const cdkit::Signature kPQ{{"P", 1}, {"Q", 1}};
inline const cdkit::Signature kPQRS{{"P", 1}, {"Q", 1}, {"R", 1}, {"S", 0}};

}  // namespace test

namespace test {

using cdkit::clone_element;
using cdkit::clone_state;
using cdkit::random_pair;

}  // namespace test
