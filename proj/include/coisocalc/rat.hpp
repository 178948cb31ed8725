#pragma once

#include <gmpxx.h>

#include <string>

namespace coisocalc {

/// Exact rational number, always kept in lowest terms with positive denominator.
using Rat = mpq_class;

/// Parses "p" or "p/q" (q > 0). Throws std::invalid_argument on bad input.
Rat parse_rat(const std::string& text);

/// Canonical text form: "p" when the denominator is 1, otherwise "p/q".
std::string rat_str(const Rat& r);

Rat factorial(int k);

}  // namespace coisocalc
