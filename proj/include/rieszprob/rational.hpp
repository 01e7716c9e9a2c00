#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>

#include "rieszprob/errors.hpp"

namespace rieszprob {

/// Exact rational scalar. Every computation in the library is exact; all
/// verdicts are exact equalities, never tolerance comparisons.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Canonical text form: "p/q" with gcd(p,q)=1 and q>0, or just "p" when
/// the value is an integer. This is the form scenario files use.
inline std::string rat_to_string(const Rat& r) {
    return r.str();
}

/// Parses "p", "-p", "p/q". Throws DomainError on malformed text or a zero
/// denominator. Whitespace is not accepted; scenario files are canonical.
inline Rat parse_rational(const std::string& text) {
    auto fail = [&] { throw DomainError("malformed rational literal \"" + text + "\""); };
    if (text.empty()) fail();
    std::size_t i = 0;
    if (text[i] == '-' || text[i] == '+') ++i;
    std::size_t digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++digits;
    if (digits == 0) fail();
    if (i != text.size()) {
        if (text[i] != '/') fail();
        ++i;
        std::size_t den_digits = 0;
        std::size_t den_start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++den_digits;
        if (den_digits == 0 || i != text.size()) fail();
        if (text.find_first_not_of('0', den_start) == std::string::npos)
            throw DomainError("zero denominator in rational literal \"" + text + "\"");
    }
    return Rat(text);
}

/// Smallest integer >= r.
inline BigInt rat_ceil(const Rat& r) {
    BigInt q = numerator(r) / denominator(r);
    if (q * denominator(r) < numerator(r)) ++q;
    return q;
}

/// Largest integer <= r.
inline BigInt rat_floor(const Rat& r) {
    BigInt q = numerator(r) / denominator(r);
    if (q * denominator(r) > numerator(r)) --q;
    return q;
}

}  // namespace rieszprob
