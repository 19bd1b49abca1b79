#pragma once

#include <cmath>

#include "magicpol/atom.hpp"

namespace magicpol::test {

inline const AtomSpec& ba133() {
  static const AtomSpec atom = load_atom(find_atom_file("ba133"));
  return atom;
}

inline HalfInt h(int twice) { return HalfInt::from_twice(twice); }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace magicpol::test
