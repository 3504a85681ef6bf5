#include "filterlab/measure.hpp"

#include "filterlab/error.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace filterlab {

namespace {

// Exponents past this are replaced by it in tail bounds (a smaller power of
// two is still a valid upper bound on 2^-s).
constexpr std::uint64_t kTailExponentCap = std::uint64_t{1} << 16;
constexpr std::uint64_t kMaxProductBits = std::uint64_t{1} << 26;
constexpr std::uint64_t kNullSearchFactors = std::uint64_t{1} << 20;

Dyadic to_dyadic(const mpz_class& n, std::uint64_t e)
{
    return Dyadic{n.get_str(10), e};
}

mpz_class pow2(std::uint64_t e)
{
    mpz_class r = 1;
    r <<= static_cast<mp_bitcnt_t>(e);
    return r;
}

// 2^-s capped at 2^-kTailExponentCap from above.
Dyadic capped_term(std::uint64_t s)
{
    return Dyadic::pow2_neg(std::min(s, kTailExponentCap));
}

bool tail_diverges(const BlockPartition& p)
{
    const auto k = p.tail().kind;
    return k == TailRule::Kind::Constant || k == TailRule::Kind::CeilLog2;
}

// Upper bound on sum_{k >= first} 2^-size(k) for linear and power tails.
Dyadic tail_sum(const BlockPartition& p, std::uint64_t first)
{
    Dyadic t = Dyadic::from_int(0);
    const std::uint64_t r = std::max(first, p.regular_from());
    for (std::uint64_t k = first; k < r; ++k)
        t = add(t, capped_term(p.size(k)));
    // Sizes increase by at least one per block from r on: sum <= 2 * 2^-size(r).
    const std::uint64_t s = r <= p.max_block() ? p.size(r) : kTailExponentCap + 1;
    t = add(t, capped_term(s > 0 ? s - 1 : 0));
    return t;
}

struct Product {
    mpz_class numerator = 1;
    std::uint64_t exponent = 0;

    void times_block(std::uint64_t s)
    {
        if (exponent + s > kMaxProductBits)
            throw RangeError("partial product needs more than 2^26 bits");
        numerator *= pow2(s) - 1;
        exponent += s;
    }
};

} // namespace

BlockFamilyMeasure block_family_measure(const BlockPartition& p, std::uint64_t from, std::uint64_t factors)
{
    if (factors == 0)
        throw PreconditionError("factors must be at least 1");
    if (from + factors - 1 > p.max_block() || from + factors < from)
        throw RangeError("block index beyond the representable range");
    Product prod;
    for (std::uint64_t k = from; k < from + factors; ++k)
        prod.times_block(p.size(k));

    BlockFamilyMeasure out;
    out.from = from;
    out.factors = factors;
    out.enclosure.upper = to_dyadic(prod.numerator, prod.exponent);
    out.enclosure.lower = Dyadic::from_int(0);
    if (tail_diverges(p)) {
        out.tail_argument = p.tail().kind == TailRule::Kind::Constant
                                ? "constant sizes: the tail sum of 2^-size diverges"
                                : "logarithmic sizes: 2^-size(k) >= 1/(2(k+c)), the tail sum diverges";
        return out;
    }
    const Dyadic t = tail_sum(p, from + factors);
    out.tail_argument = "sizes increase by at least one per block: tail sum <= explicit prefix + 2^(1-size)";
    if (compare(t, Dyadic::from_int(1)) < 0) {
        out.tail_sum_bound = t;
        out.enclosure.lower = multiply(out.enclosure.upper, subtract(Dyadic::from_int(1), t));
    }
    return out;
}

NullVerdict is_null_certificate(const BlockPartition& p)
{
    NullCertificate c;
    if (tail_diverges(p)) {
        c.argument = p.tail().kind == TailRule::Kind::Constant
                         ? "constant sizes c: sum of 2^-c diverges, so every F_n has measure 0"
                         : "sizes ceil(log2(k+c)): 2^-size(k) >= 1/(2(k+c)) and the harmonic series diverges";
        Product prod;
        for (std::uint64_t k = 0; k < kNullSearchFactors && k <= p.max_block(); ++k) {
            prod.times_block(p.size(k));
            // numerator / 2^e < 1/100  iff  100 * numerator < 2^e
            if (100 * prod.numerator < pow2(prod.exponent)) {
                c.factors = k + 1;
                c.partial = to_dyadic(prod.numerator, prod.exponent);
                return NullVerdict::proved(std::move(c), c.argument);
            }
        }
        c.partial = to_dyadic(prod.numerator, prod.exponent);
        return NullVerdict::proved(std::move(c), c.argument + "; no partial product below 1/100 within the search");
    }
    c.argument = "sizes increase by at least one per block: sum of 2^-size converges";
    for (std::uint64_t f = 1; f <= 4096 && f - 1 <= p.max_block(); ++f) {
        const BlockFamilyMeasure m = block_family_measure(p, 0, f);
        if (m.tail_sum_bound && compare(m.enclosure.lower, Dyadic::from_int(0)) > 0) {
            c.factors = f;
            c.partial = m.enclosure.upper;
            c.lower = m.enclosure.lower;
            return NullVerdict::refuted(std::move(c), "F_0 has measure at least " + to_decimal(c.lower, 12));
        }
    }
    return NullVerdict::unknown(4096, "no factor count gave a tail sum below 1");
}

BlockPartition choose_null_meager_partition()
{
    BlockPartition p = BlockPartition::ceil_log2(2);
    if (p.bounded() || !is_null_certificate(p).is_proved())
        throw Error("null meager partition postcondition failed");
    return p;
}

MonteCarloEstimate monte_carlo_measure(const BlockPartition& p, std::uint64_t from, std::uint64_t factors,
                                       std::uint64_t samples, std::uint64_t seed)
{
    if (samples == 0)
        throw PreconditionError("samples must be at least 1");
    std::vector<std::uint64_t> sizes;
    for (std::uint64_t k = from; k < from + factors; ++k)
        sizes.push_back(p.size(k));
    std::mt19937_64 rng(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        bool all = true;
        for (const std::uint64_t s : sizes) {
            // The block is missed iff all of its s fair bits are zero.
            bool hit = false;
            for (std::uint64_t left = s; left > 0 && !hit;) {
                const std::uint64_t take = std::min<std::uint64_t>(left, 64);
                std::uint64_t w = rng();
                if (take < 64)
                    w &= (std::uint64_t{1} << take) - 1;
                hit = w != 0;
                left -= take;
            }
            if (!hit) {
                all = false;
                break;
            }
        }
        hits += all ? 1 : 0;
    }
    MonteCarloEstimate out;
    out.hits = hits;
    out.samples = samples;
    out.seed = seed;
    out.estimate = static_cast<double>(hits) / static_cast<double>(samples);
    out.std_error = std::sqrt(out.estimate * (1 - out.estimate) / static_cast<double>(samples));
    return out;
}

} // namespace filterlab
