#pragma once
// Exact rational arithmetic for energies and coupling constants.
// All interaction parameters are rationals; floating point is used only
// for Monte Carlo acceptance probabilities and reporting.

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace lgk {

using Rat = boost::rational<long long>;

// Parse "p", "p/q", or a finite decimal like "3.79" into an exact rational.
// Throws ParseError on malformed input or q == 0.
Rat parse_rat(const std::string& text);

// Canonical text form: "p" if integral, else "p/q" with q > 0.
std::string rat_str(const Rat& r);

inline double rat_double(const Rat& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline Rat rat_floor(const Rat& r) {
    long long n = r.numerator(), d = r.denominator();
    long long q = n / d;
    if (n % d != 0 && (n < 0) != (d < 0)) --q;
    return Rat(q);
}

inline bool rat_is_integer(const Rat& r) { return r.denominator() == 1; }

} // namespace lgk
