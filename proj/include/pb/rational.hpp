#pragma once

#include <gmpxx.h>

#include <string>

namespace pb {

// Exact rational arithmetic everywhere; no operation in the library rounds.
using Rat = mpq_class;

// Parses "123", "-4.25", "7/3". No exponents, no whitespace. Throws pb::Error
// with kind "MalformedNumber" on anything else (including zero denominators).
Rat parse_rat(const std::string& text);

// Shortest exact rendering: integer when denominator is 1, terminating decimal
// when the denominator divides a power of ten ("4.25"), "a/b" otherwise.
// parse_rat(rat_str(x)) == x for all x.
std::string rat_str(const Rat& x);

// Canonical fraction rendering for JSON: "n" when denominator is 1, else "n/d".
std::string rat_frac(const Rat& x);

inline Rat rat_of(long n) { return Rat(n); }
inline Rat rat_of(long n, long d) { Rat r(n, d); r.canonicalize(); return r; }

// Floor of the rational as an arbitrary-precision integer.
mpz_class rat_floor(const Rat& x);

} // namespace pb
