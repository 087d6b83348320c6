#pragma once

#include <gmpxx.h>

#include <string>

namespace pda {

// Exact probability value. mpq_class keeps itself canonical after every
// arithmetic operation (lowest terms, positive denominator).
using Rational = mpq_class;

// Always "n/d", also for integers, so output is uniform.
std::string to_string(const Rational& r);

// Accepts "n/d" or "n" with optional leading '-'. Throws std::invalid_argument
// on anything else, including decimals and zero denominators.
Rational parse_rational(const std::string& text);

inline bool is_probability(const Rational& r) { return r >= 0 && r <= 1; }

}  // namespace pda
