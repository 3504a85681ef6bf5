#pragma once

#include <cstdint>
#include <string>

namespace filterlab {

/// numerator / 2^exponent with an arbitrary-precision decimal numerator.
///
/// Values are kept exactly as produced (products are not reduced), so the
/// exponent of a partial product is the total number of bits involved.
struct Dyadic {
    std::string numerator = "0";
    std::uint64_t exponent = 0;

    static Dyadic from_int(std::uint64_t v) { return {std::to_string(v), 0}; }
    /// 2^-e
    static Dyadic pow2_neg(std::uint64_t e) { return {"1", e}; }

    friend bool operator==(const Dyadic&, const Dyadic&) = default;
};

/// Lowest terms: odd numerator or exponent 0.
Dyadic reduced(const Dyadic& d);
Dyadic add(const Dyadic& a, const Dyadic& b);
/// a - b; throws RangeError if negative.
Dyadic subtract(const Dyadic& a, const Dyadic& b);
Dyadic multiply(const Dyadic& a, const Dyadic& b);
/// -1, 0 or 1 for a < b, a == b, a > b (by value).
int compare(const Dyadic& a, const Dyadic& b);
/// Compares a with p/q.
int compare_fraction(const Dyadic& a, std::uint64_t p, std::uint64_t q);
long double to_long_double(const Dyadic& d);
/// Decimal expansion truncated toward zero to `digits` fractional digits.
std::string to_decimal(const Dyadic& d, unsigned digits = 20);
/// "numerator/2^exponent" in lowest terms, or the integer.
std::string to_fraction_string(const Dyadic& d);

} // namespace filterlab
