#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace gfc {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }
inline double to_double(double x) { return x; }

inline BigInt num(const Rat& r) { return numerator(r); }
inline BigInt den(const Rat& r) { return denominator(r); }

// "p/q" or "p"; throws std::runtime_error on garbage.
Rat parse_rat(const std::string& s);
std::string rat_str(const Rat& r);

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

}  // namespace gfc
