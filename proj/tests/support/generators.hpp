#pragma once

// Hand-rolled random generators for property tests and the acceptance run.
// Everything is driven by an explicit mt19937_64 so failures replay from the seed.

#include "filterlab/convergence.hpp"
#include "filterlab/cpgame.hpp"
#include "filterlab/decide.hpp"
#include "filterlab/oracle.hpp"
#include "filterlab/pseudo.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace filterlab::testgen {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}

    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) // inclusive
    {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(g_);
    }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(g_); }
    template <class T>
    const T& pick(const std::vector<T>& v)
    {
        return v[between(0, v.size() - 1)];
    }
    std::mt19937_64& engine() { return g_; }

private:
    std::mt19937_64 g_;
};

inline std::vector<std::uint64_t> sorted_sample(Rng& r, std::uint64_t count, std::uint64_t below)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < count; ++i)
        out.push_back(r.between(0, below - 1));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline BlockPartition random_partition(Rng& r, bool bounded)
{
    std::vector<std::uint64_t> prefix;
    const std::uint64_t np = r.between(0, 3);
    for (std::uint64_t i = 0; i < np; ++i)
        prefix.push_back(r.between(1, 4));
    TailRule t;
    switch (bounded ? 0 : r.between(1, 3)) {
    case 0:
        t.kind = TailRule::Kind::Constant;
        t.c = static_cast<std::int64_t>(r.between(1, 4));
        break;
    case 1:
        t.kind = TailRule::Kind::Linear;
        t.c = static_cast<std::int64_t>(r.between(1, 3));
        break;
    case 2:
        t.kind = TailRule::Kind::CeilLog2;
        t.c = static_cast<std::int64_t>(r.between(2, 5));
        break;
    default:
        return BlockPartition::dyadic();
    }
    return BlockPartition(prefix, t);
}

inline Selector random_selector(Rng& r)
{
    switch (r.between(0, 4)) {
    case 0: return Selector::all();
    case 1: return Selector::none();
    case 2: return Selector::first(r.between(1, 3));
    case 3: return Selector::all_but_first(r.between(1, 2));
    default: return Selector::removed_points(sorted_sample(r, r.between(1, 4), 40));
    }
}

/// A random leaf over omega.
inline SetDescription random_leaf(Rng& r)
{
    switch (r.between(0, 7)) {
    case 0: return SetDescription::finite(sorted_sample(r, r.between(0, 6), 50));
    case 1: return SetDescription::cofinite(sorted_sample(r, r.between(0, 6), 50));
    case 2: {
        const std::uint64_t lo = r.between(0, 30);
        if (r.coin())
            return SetDescription::interval(lo, std::nullopt);
        return SetDescription::interval(lo, lo + r.between(0, 30));
    }
    case 3: {
        std::vector<bool> bits;
        const std::uint64_t n = r.between(0, 24);
        for (std::uint64_t i = 0; i < n; ++i)
            bits.push_back(r.coin());
        return SetDescription::truncated(bits, r.coin());
    }
    case 4: return r.coin() ? SetDescription::evens() : SetDescription::odds();
    case 5: {
        const std::uint64_t period = r.between(1, 4);
        std::vector<std::uint64_t> res = sorted_sample(r, r.between(1, period), period);
        return SetDescription::block_rule(random_partition(r, true), random_selector(r), period, res);
    }
    default: return SetDescription::block_rule(random_partition(r, r.coin()), random_selector(r));
    }
}

/// A random Boolean tree of leaves over omega.
inline SetDescription random_set(Rng& r, int depth = 2)
{
    if (depth == 0 || r.coin(0.4))
        return random_leaf(r);
    switch (r.between(0, 2)) {
    case 0: return random_set(r, depth - 1) & random_set(r, depth - 1);
    case 1: return random_set(r, depth - 1) | random_set(r, depth - 1);
    default: return ~random_set(r, depth - 1);
    }
}

/// A random set whose infinitude is certified.
inline SetDescription random_infinite_set(Rng& r)
{
    for (;;) {
        SetDescription s = random_set(r, 1);
        if (is_infinite(s).is_proved())
            return s;
    }
}

/// An infinite set with at least 1/16 of [0, 4096), so a network of these
/// keeps up with long horizons.
inline SetDescription random_network_set(Rng& r)
{
    for (;;) {
        SetDescription s = random_infinite_set(r);
        std::uint64_t n = 0;
        for (std::uint64_t x = 0; x < 4096; ++x)
            n += member(s, x) ? 1 : 0;
        if (n >= 256)
            return s;
    }
}

/// Over omega x omega: rows of D are finite, and infinitely many are nonempty.
inline SetDescription random_fubini_candidate(Rng& r)
{
    auto leaf = [&r] {
        const std::uint64_t from = r.between(0, 5);
        const Affine lo{static_cast<std::int64_t>(r.between(0, 2)), static_cast<std::int64_t>(r.between(0, 4))};
        const Affine hi{lo.slope + static_cast<std::int64_t>(r.between(0, 2)),
                        lo.offset + static_cast<std::int64_t>(r.between(1, 5))};
        return SetDescription::paired_rows(from, lo, hi);
    };
    SetDescription d = leaf();
    const std::uint64_t extra = r.between(0, 2);
    for (std::uint64_t i = 0; i < extra; ++i)
        d = d | leaf();
    return d;
}

/// A partition whose first-t selections have finite harmonic weight.
inline BlockPartition random_harmonic_partition(Rng& r)
{
    if (r.coin())
        return BlockPartition({}, TailRule{TailRule::Kind::Power, 0, r.between(2, 3)});
    return BlockPartition({}, TailRule{TailRule::Kind::Linear, static_cast<std::int64_t>(r.between(1, 3)), 0});
}

/// A member of the harmonic summable filter: finitely many pieces, each with
/// summable complement. Block pieces use `p`, so a chain shares one block shape.
inline SetDescription random_harmonic_member(Rng& r, const BlockPartition& p)
{
    switch (r.between(0, 2)) {
    case 0: return SetDescription::cofinite(sorted_sample(r, r.between(1, 6), 60));
    case 1: return SetDescription::interval(r.between(0, 20), std::nullopt);
    default: {
        const std::uint64_t t = p.tail().kind == TailRule::Kind::Power ? r.between(1, 2) : 1;
        return ~SetDescription::block_rule(p, Selector::first(t));
    }
    }
}

/// A decreasing chain A_0 ⊇ ... ⊇ A_K in the harmonic filter, K+1 = links.
inline std::vector<SetDescription> random_harmonic_chain(Rng& r, std::uint64_t links)
{
    const BlockPartition p = random_harmonic_partition(r);
    std::vector<SetDescription> chain{random_harmonic_member(r, p)};
    while (chain.size() < links)
        chain.push_back(chain.back() & random_harmonic_member(r, p));
    return chain;
}

/// A bounded-block instance with period N = blocks * width, paired with its oracle twin.
struct PeriodicPair {
    BoundedBlockInstance inst;
    oracle::PeriodicInstance twin;
    std::uint64_t width = 1;
};

inline SetDescription periodic_set(const std::vector<bool>& pattern)
{
    std::vector<std::uint64_t> res;
    for (std::uint64_t x = 0; x < pattern.size(); ++x)
        if (pattern[x])
            res.push_back(x);
    if (res.empty())
        return SetDescription::empty();
    if (res.size() == pattern.size())
        return SetDescription::omega();
    return SetDescription::block_rule(BlockPartition::constant(1), Selector::all(), pattern.size(), res);
}

/// `valid_bias` raises the chance that every generator meets every block.
inline PeriodicPair random_lemma1_instance(Rng& r, double valid_bias = 0.7)
{
    PeriodicPair out;
    const std::uint64_t blocks = r.between(1, 12);
    out.width = r.between(1, 3);
    const std::uint64_t n = blocks * out.width;
    std::vector<bool> index(blocks, false);
    for (auto&& b : index)
        b = r.coin(0.8);
    index[r.between(0, blocks - 1)] = true;
    std::vector<bool> carrier(n, false);
    for (std::uint64_t i = 0; i < blocks; ++i) {
        for (std::uint64_t j = 0; j < out.width; ++j)
            carrier[i * out.width + j] = r.coin(0.75);
        carrier[i * out.width + r.between(0, out.width - 1)] = true;
    }
    out.twin.n = n;
    for (std::uint64_t i = 0; i < blocks; ++i) {
        if (!index[i])
            continue;
        std::vector<std::uint64_t> b;
        for (std::uint64_t j = 0; j < out.width; ++j)
            if (carrier[i * out.width + j])
                b.push_back(i * out.width + j);
        out.twin.blocks.push_back(b);
    }
    const std::uint64_t gens = r.between(1, 3);
    const bool aim_valid = r.coin(valid_bias);
    // Points every generator keeps, one per block, when aiming for a valid instance.
    std::vector<bool> common(n, false);
    for (const auto& b : out.twin.blocks)
        common[b[r.between(0, b.size() - 1)]] = true;
    for (std::uint64_t g = 0; g < gens; ++g) {
        std::vector<bool> pat(n);
        for (std::uint64_t x = 0; x < n; ++x)
            pat[x] = r.coin(0.6) || (aim_valid && common[x]);
        out.twin.generators.push_back(pat);
    }
    out.inst.partition = BlockPartition::constant(out.width);
    out.inst.index_set = periodic_set(index);
    out.inst.carrier = periodic_set(carrier);
    for (const auto& pat : out.twin.generators)
        out.inst.generators.push_back(periodic_set(pat));
    return out;
}

/// The three game setups the property suites rotate through, with a tail
/// generator that stays inside each neighborhood filter.
struct SetupCase {
    GameSetup setup;
    SetDescription (*tail)(Rng&);
};

inline SetDescription frechet_tail(Rng& r)
{
    if (r.coin())
        return SetDescription::interval(r.between(0, 40), std::nullopt);
    return SetDescription::cofinite(sorted_sample(r, r.between(0, 8), 40));
}

inline SetDescription density_tail(Rng& r)
{
    const SetDescription base =
        SetDescription::block_rule(BlockPartition::dyadic(), Selector::all_but_first(r.between(0, 1)));
    return base & SetDescription::interval(r.between(0, 20), std::nullopt);
}

inline SetDescription evens_tail(Rng& r)
{
    return SetDescription::evens() & SetDescription::cofinite(sorted_sample(r, r.between(0, 6), 30));
}

inline std::vector<SetupCase> setup_cases()
{
    return {
        {GameSetup{}, &frechet_tail},
        {GameSetup{FilterSpace{FilterPresentation::block_density(BlockPartition::dyadic())},
                   PointSequence::identity(), BlockPartition::dyadic()},
         &density_tail},
        {GameSetup{FilterSpace{FilterPresentation::generated({SetDescription::evens()})}, PointSequence::identity(),
                   BlockPartition::constant(2)},
         &evens_tail},
    };
}

inline ContinuousWitness random_witness(Rng& r, SetDescription (*tail)(Rng&))
{
    ContinuousWitness f;
    f.v = r.coin();
    f.tail = tail(r);
    const std::uint64_t ex = r.between(0, 8);
    for (std::uint64_t i = 0; i < ex; ++i)
        f.exceptions[r.between(0, 60)] = r.coin();
    return f;
}

} // namespace filterlab::testgen
