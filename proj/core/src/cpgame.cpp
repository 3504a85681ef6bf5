#include "filterlab/cpgame.hpp"

#include "filterlab/error.hpp"
#include "filterlab/expr.hpp"
#include "filterlab/shape.hpp"

#include <algorithm>

namespace filterlab {

std::optional<std::uint64_t> BasicOpenSet::violation_of(const BasicOpenSet& coarser) const
{
    for (const auto& [x, b] : coarser.constraints) {
        const auto it = constraints.find(x);
        if (it == constraints.end() || it->second != b)
            return x;
    }
    return std::nullopt;
}

bool ContinuousWitness::at(std::uint64_t x) const
{
    if (x == kInfinity)
        return v;
    if (const auto it = exceptions.find(x); it != exceptions.end())
        return it->second;
    return member(tail, x) ? v : !v;
}

bool ContinuousWitness::lies_in(const BasicOpenSet& u) const
{
    return std::all_of(u.constraints.begin(), u.constraints.end(),
                       [this](const auto& c) { return at(c.first) == c.second; });
}

FilterVerdict witness_continuity(const ContinuousWitness& f, const GameSetup& g)
{
    return filter_member(g.space.neighborhoods, f.tail);
}

std::optional<SetDescription> agreement_set(const ContinuousWitness& f, const GameSetup& g)
{
    std::vector<std::uint64_t> agree, disagree;
    for (const auto& [x, b] : f.exceptions)
        if (x != kInfinity)
            (b == f.v ? agree : disagree).push_back(x);
    SetDescription points = f.tail;
    if (!disagree.empty())
        points = points & ~SetDescription::finite(disagree);
    if (!agree.empty())
        points = points | SetDescription::finite(agree);
    return index_set(g.sequence, points);
}

namespace {

// Blocks of a partition that miss S: either infinitely many (one residue
// class of them is named) or all below `clear_from`.
struct MissProfile {
    std::uint64_t period = 1;
    std::uint64_t base = 0;
    std::optional<std::uint64_t> missing_residue;
    std::uint64_t clear_from = 0;
};

std::optional<MissProfile> miss_profile(const SetDescription& s, const BlockPartition& p)
{
    const auto shape = shape_of(s, p);
    if (!shape)
        return std::nullopt;
    MissProfile out;
    out.period = shape->period;
    out.base = std::max(shape->from_block, p.regular_from());
    out.clear_from = out.base;
    for (std::uint64_t r = 0; r < shape->period; ++r) {
        const OffsetPattern& pat = shape->patterns[r];
        if (p.bounded()) {
            if (pat.count_below(p.eventual_size()) == 0) {
                out.missing_residue = r;
                return out;
            }
            continue;
        }
        std::optional<std::uint64_t> first_true;
        for (std::size_t i = 0; i < pat.cuts.size() && !first_true; ++i)
            if (pat.bits[i])
                first_true = pat.cuts[i];
        if (!first_true) {
            out.missing_residue = r;
            return out;
        }
        // Sizes are nondecreasing from base on; find the first block larger than the offset.
        std::uint64_t lo = out.base, hi = p.max_block();
        if (p.size(hi) <= *first_true)
            return std::nullopt;
        while (lo < hi) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            if (p.size(mid) > *first_true)
                hi = mid;
            else
                lo = mid + 1;
        }
        out.clear_from = std::max(out.clear_from, lo);
    }
    return out;
}

std::uint64_t first_in_class(std::uint64_t from, std::uint64_t period, std::uint64_t residue)
{
    std::uint64_t m = from - from % period + residue;
    return m < from ? m + period : m;
}

} // namespace

CnVerdict cn_member(const ContinuousWitness& f, std::uint64_t n, const GameSetup& g, std::uint64_t horizon)
{
    const auto s = agreement_set(f, g);
    if (!s)
        return CnVerdict::unknown(horizon, "sequence has no closed-form index sets");
    const BlockPartition& p = g.partition;
    const auto prof = miss_profile(*s, p);
    if (!prof)
        return CnVerdict::unknown(horizon, "agreement set has no block shape against the partition");
    if (prof->missing_residue) {
        const std::uint64_t m = first_in_class(std::max(n, prof->base), prof->period, *prof->missing_residue);
        return CnVerdict::refuted({m, std::nullopt, "infinitely many blocks disagree with the value at infinity"},
                                  "block " + std::to_string(m) + " has no agreeing index");
    }
    if (prof->clear_from > n && prof->clear_from - n > horizon)
        return CnVerdict::unknown(horizon, "too many blocks to scan before the closed form applies");
    for (std::uint64_t m = n; m < prof->clear_from; ++m)
        if (block_count(*s, p, m) == 0)
            return CnVerdict::refuted({m, std::nullopt, "explicit block scan"},
                                      "block " + std::to_string(m) + " has no agreeing index");
    return CnVerdict::proved({std::nullopt, n,
                              "blocks from " + std::to_string(prof->clear_from) +
                                  " on meet the agreement set by their shape; earlier ones by scan"});
}

Verdict<std::uint64_t> decomposition_index(const ContinuousWitness& f, const GameSetup& g, std::uint64_t horizon)
{
    const auto s = agreement_set(f, g);
    if (!s)
        return Verdict<std::uint64_t>::unknown(horizon, "sequence has no closed-form index sets");
    const FilterVerdict in = filter_member(g.space.neighborhoods, *s);
    if (in.is_refuted())
        throw PreconditionError("agreement set " + to_string(*s) + " is not in the filter: f is not continuous there");
    const auto prof = miss_profile(*s, g.partition);
    if (!prof)
        return Verdict<std::uint64_t>::unknown(horizon, "agreement set has no block shape against the partition");
    if (prof->missing_residue)
        throw PreconditionError("the agreement set misses infinitely many blocks: the filter is not meager for this partition");
    if (prof->clear_from > horizon)
        return Verdict<std::uint64_t>::unknown(horizon, "too many blocks to scan");
    std::uint64_t n = 0;
    for (std::uint64_t m = 0; m < prof->clear_from; ++m)
        if (block_count(*s, g.partition, m) == 0)
            n = m + 1;
    return Verdict<std::uint64_t>::proved(n, "the image of the agreement set contains [" + std::to_string(n) + ", inf)");
}

AvoidanceMove avoidance_move(const BasicOpenSet& u, std::uint64_t n, const GameSetup& g)
{
    BasicOpenSet v = u;
    v.constraints.emplace(kInfinity, false);
    const bool at_inf = v.constraints.at(kInfinity);
    const BlockPartition& p = g.partition;
    const PointSequence& seq = g.sequence;
    auto point = [&seq](std::uint64_t k) {
        if (!seq.label.empty() && k >= seq.prefix.size())
            throw RangeError("sequence prefix ends at " + std::to_string(seq.prefix.size()));
        return seq.at(k);
    };
    // An injective sequence puts each constrained point in at most one block.
    const std::uint64_t limit = n + u.constraints.size() + 64;
    for (std::uint64_t m = n; m <= limit && m <= p.max_block(); ++m) {
        bool clear = true;
        for (std::uint64_t k = p.start(m); k < p.end(m) && clear; ++k)
            clear = !u.constraints.count(point(k));
        if (!clear)
            continue;
        for (std::uint64_t k = p.start(m); k < p.end(m); ++k)
            v.constraints[point(k)] = !at_inf;
        AvoidanceMove out;
        out.block = m;
        out.witness.v = at_inf;
        std::vector<std::uint64_t> dom;
        for (const auto& [x, b] : v.constraints)
            if (x != kInfinity) {
                out.witness.exceptions.emplace(x, b);
                dom.push_back(x);
            }
        out.witness.tail = SetDescription::cofinite(dom);
        out.v = std::move(v);
        return out;
    }
    throw Error("no block at or after " + std::to_string(n) + " avoids the constrained points; is the sequence injective?");
}

BasicOpenSet ScriptedAdversary::move(const BasicOpenSet& previous, std::uint64_t round)
{
    if (round >= moves_.size())
        return previous;
    return moves_[round];
}

BasicOpenSet SeededAdversary::move(const BasicOpenSet& previous, std::uint64_t round)
{
    BasicOpenSet out = previous;
    const std::uint64_t range = 16 + 8 * round;
    const std::uint64_t extra = 1 + rng_() % 3;
    for (std::uint64_t i = 0; i < extra; ++i) {
        const std::uint64_t x = rng_() % range;
        const bool b = (rng_() & 1) != 0;
        out.constraints.emplace(x, b);
    }
    if ((rng_() & 1) != 0)
        out.constraints.emplace(kInfinity, (rng_() & 1) != 0);
    return out;
}

GameTranscript play_game(Adversary& adversary, std::uint64_t rounds, const GameSetup& g)
{
    GameTranscript t;
    t.filter = to_string(g.space.neighborhoods);
    t.sequence = to_string(g.sequence);
    t.partition = to_string(g.partition);
    BasicOpenSet previous;
    for (std::uint64_t r = 0; r < rounds; ++r) {
        BasicOpenSet u = adversary.move(previous, r);
        if (const auto bad = u.violation_of(previous))
            throw PreconditionError("adversary move in round " + std::to_string(r) + " drops or flips the constraint at " +
                                    (*bad == kInfinity ? std::string("inf") : std::to_string(*bad)));
        AvoidanceMove mv = avoidance_move(u, r, g);
        GameRound round;
        round.adversary = std::move(u);
        round.engine = mv.v;
        round.avoided = r;
        round.block = mv.block;
        round.cn = cn_member(mv.witness, r, g).status;
        round.witness = std::move(mv.witness);
        previous = std::move(mv.v);
        t.rounds.push_back(std::move(round));
    }
    if (!t.rounds.empty())
        for (std::uint64_t r = 0; r < rounds; ++r)
            t.final_cn.push_back(cn_member(t.rounds.back().witness, r, g).status);
    return t;
}

GameSetup setup_of(const GameTranscript& t)
{
    GameSetup g;
    g.space.neighborhoods = parse_filter(t.filter);
    g.sequence = parse_sequence(t.sequence);
    g.partition = parse_partition(t.partition);
    return g;
}

bool verify_transcript(const GameTranscript& t, std::string* why)
{
    auto fail = [why](std::string m) {
        if (why)
            *why = std::move(m);
        return false;
    };
    const GameSetup g = setup_of(t);
    BasicOpenSet previous;
    for (std::size_t r = 0; r < t.rounds.size(); ++r) {
        const GameRound& round = t.rounds[r];
        if (!round.adversary.refines(previous))
            return fail("round " + std::to_string(r) + ": adversary does not refine the previous engine move");
        if (!round.engine.refines(round.adversary))
            return fail("round " + std::to_string(r) + ": engine does not refine the adversary move");
        for (std::uint64_t k = g.partition.start(round.block); k < g.partition.end(round.block); ++k)
            if (round.adversary.constraints.count(g.sequence.at(k)))
                return fail("round " + std::to_string(r) + ": chosen block meets the adversary's points");
        if (round.block < round.avoided || round.cn != Status::Refuted || !round.witness.lies_in(round.engine))
            return fail("round " + std::to_string(r) + ": witness is not outside C_n inside the engine move");
        previous = round.engine;
    }
    for (const Status s : t.final_cn)
        if (s != Status::Refuted)
            return fail("final witness lies in some C_r");
    std::vector<BasicOpenSet> moves;
    for (const auto& round : t.rounds)
        moves.push_back(round.adversary);
    ScriptedAdversary replay(std::move(moves));
    GameTranscript again = play_game(replay, t.rounds.size(), g);
    again.seed = t.seed;
    if (!(again == t))
        return fail("replay differs from the transcript");
    return true;
}

} // namespace filterlab
