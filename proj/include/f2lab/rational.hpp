#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace f2lab {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Raised for violated preconditions and malformed inputs; the CLI maps it to
// exit code 1 with a JSON error object on stderr.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : DomainError {
    std::size_t pos;
    ParseError(const std::string& what, std::size_t p) : DomainError(what), pos(p) {}
};

// 2^k as an integer (k >= 0).
Int pow2i(unsigned k);

// 2^k as a rational; k may be negative.
Rational pow2r(long k);

Rational abs_r(const Rational& r);

// "p/q" with q always printed ("3/1" for integers is avoided: integers render
// as "p"). Canonical lowest terms, sign on the numerator.
std::string frac_str(const Rational& r);

// Fixed-point decimal rendering with `digits` fractional digits, rounded
// half-to-even. Display only; never feeds back into exact arithmetic.
std::string dec_str(const Rational& r, int digits = 12);

// Parse "p", "p/q", or a decimal like "0.25" into an exact rational.
Rational parse_rational(const std::string& text);

// ceil(log2(q/p)) for a rational p/q in (0,1]; exact integer arithmetic.
Int ceil_log2_inv(const Rational& delta);

}  // namespace f2lab
