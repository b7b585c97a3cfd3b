#pragma once

#include <gmpxx.h>

#include <string>

namespace treeunif {

using Rational = mpq_class;

/// Canonical "num/den" form; integers are written as "n/1".
inline std::string to_fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Parses "p/q" or an integer literal. Throws std::invalid_argument.
Rational parse_rational(const std::string& text);

/// 3^-n as an exact rational.
Rational inverse_power_of_three(int n);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace treeunif
