#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

namespace recbound {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Parses "p", "-p" or "p/q" (q > 0 after normalization). Returns nullopt on
// malformed input.
std::optional<Rat> parse_rat(const std::string& text);

// Prints as "p/q", or "p" when the denominator is 1.
std::string rat_to_string(const Rat& r);

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Largest integer <= r.
Int rat_floor(const Rat& r);

}  // namespace recbound
