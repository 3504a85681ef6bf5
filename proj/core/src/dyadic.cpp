#include "filterlab/dyadic.hpp"

#include "filterlab/error.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>

namespace filterlab {

namespace {

mpz_class num(const Dyadic& d)
{
    return mpz_class(d.numerator, 10);
}

Dyadic make(const mpz_class& n, std::uint64_t e)
{
    return Dyadic{n.get_str(10), e};
}

// Brings both to the larger exponent.
void align(mpz_class& a, std::uint64_t ea, mpz_class& b, std::uint64_t eb)
{
    if (ea < eb)
        a <<= static_cast<mp_bitcnt_t>(eb - ea);
    else if (eb < ea)
        b <<= static_cast<mp_bitcnt_t>(ea - eb);
}

} // namespace

Dyadic reduced(const Dyadic& d)
{
    mpz_class n = num(d);
    std::uint64_t e = d.exponent;
    if (n == 0)
        return Dyadic{"0", 0};
    const std::uint64_t tz = mpz_scan1(n.get_mpz_t(), 0);
    const std::uint64_t k = std::min(tz, e);
    n >>= static_cast<mp_bitcnt_t>(k);
    return make(n, e - k);
}

Dyadic add(const Dyadic& a, const Dyadic& b)
{
    mpz_class x = num(a), y = num(b);
    align(x, a.exponent, y, b.exponent);
    return make(x + y, std::max(a.exponent, b.exponent));
}

Dyadic subtract(const Dyadic& a, const Dyadic& b)
{
    mpz_class x = num(a), y = num(b);
    align(x, a.exponent, y, b.exponent);
    if (x < y)
        throw RangeError("negative dyadic difference");
    return make(x - y, std::max(a.exponent, b.exponent));
}

Dyadic multiply(const Dyadic& a, const Dyadic& b)
{
    return make(num(a) * num(b), a.exponent + b.exponent);
}

int compare(const Dyadic& a, const Dyadic& b)
{
    mpz_class x = num(a), y = num(b);
    align(x, a.exponent, y, b.exponent);
    const int c = cmp(x, y);
    return (c > 0) - (c < 0);
}

int compare_fraction(const Dyadic& a, std::uint64_t p, std::uint64_t q)
{
    // a <=> p/q  iff  num * q <=> p * 2^e
    mpz_class lhs = num(a) * mpz_class(std::to_string(q), 10);
    mpz_class rhs = mpz_class(std::to_string(p), 10);
    rhs <<= static_cast<mp_bitcnt_t>(a.exponent);
    const int c = cmp(lhs, rhs);
    return (c > 0) - (c < 0);
}

long double to_long_double(const Dyadic& d)
{
    mpf_class f(num(d), 256);
    mpf_div_2exp(f.get_mpf_t(), f.get_mpf_t(), static_cast<mp_bitcnt_t>(d.exponent));
    long exp = 0;
    const double mant = mpf_get_d_2exp(&exp, f.get_mpf_t());
    return std::ldexp(static_cast<long double>(mant), static_cast<int>(exp));
}

std::string to_decimal(const Dyadic& d, unsigned digits)
{
    mpz_class n = num(d);
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, digits);
    mpz_class scaled = n * ten_pow;
    scaled >>= static_cast<mp_bitcnt_t>(d.exponent);
    std::string s = scaled.get_str(10);
    if (digits == 0)
        return s;
    if (s.size() <= digits)
        s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
    return s;
}

std::string to_fraction_string(const Dyadic& d)
{
    const Dyadic r = reduced(d);
    if (r.exponent == 0)
        return r.numerator;
    return r.numerator + "/2^" + std::to_string(r.exponent);
}

} // namespace filterlab
