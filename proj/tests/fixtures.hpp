#pragma once

// Random instances shared by the unit tests and the acceptance suite.

#include "relhom/random.hpp"
#include "relhom/cohomology.hpp"
#include "relhom/relative.hpp"

namespace fixture {

using namespace relhom;

inline ZmModule mod(long m, std::initializer_list<long> orders) {
  IntVector o;
  for (long d : orders) o.emplace_back(d);
  return ZmModule(m, o);
}

inline AbGroup group(std::initializer_list<long> factors) {
  IntVector f;
  for (long e : factors) f.emplace_back(e);
  return AbGroup::from_invariant_factors(f);
}

}  // namespace fixture
