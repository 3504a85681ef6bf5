#include "filterlab/weights.hpp"

#include "filterlab/decide.hpp"
#include "filterlab/expr.hpp"
#include "filterlab/shape.hpp"

#include <gmpxx.h>

#include <cmath>
#include <sstream>

namespace filterlab {

namespace {

constexpr std::uint64_t kScanLimit = std::uint64_t{1} << 22;
constexpr long double kDivergenceThreshold = 2.0L;
// The divergence scan only adds evidence, so it stops early.
constexpr std::uint64_t kDivergenceScan = std::uint64_t{1} << 18;

std::string fmt(long double v)
{
    std::ostringstream os;
    os.precision(18);
    os << v;
    return os.str();
}

// Least block m >= lo with size(m) > offset (sizes nondecreasing from lo on).
std::optional<std::uint64_t> realized_from(const BlockPartition& p, std::uint64_t lo, std::uint64_t offset)
{
    if (p.bounded())
        return offset < p.eventual_size() ? std::optional<std::uint64_t>(lo) : std::nullopt;
    std::uint64_t hi = p.max_block();
    if (lo > hi || p.size(hi) <= offset)
        return std::nullopt;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (p.size(mid) > offset)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

void add_divergence_scan(SeriesAnalysis& out, WeightRule w, const SetDescription& c)
{
    long double sum = 0;
    std::uint64_t x = 0;
    while (x < kDivergenceScan) {
        auto y = next_member(c, x, kDivergenceScan);
        if (!y)
            break;
        sum += weight_of(w, *y);
        x = *y + 1;
        if (sum > kDivergenceThreshold) {
            out.values["threshold"] = fmt(kDivergenceThreshold);
            out.values["partial_sum"] = fmt(sum);
            out.values["split"] = std::to_string(x);
            return;
        }
    }
}

std::optional<SeriesAnalysis> by_pieces(const SetDescription& c);

std::optional<SeriesAnalysis> harmonic(const SetDescription& c)
{
    std::vector<BlockPartition> refs = mentioned_partitions(c);
    refs.push_back(BlockPartition::constant(1));
    for (const auto& p : refs) {
        const auto s = shape_of(c, p);
        if (!s)
            continue;
        const std::uint64_t base = std::max(s->from_block, p.regular_from());
        bool any_true = false;
        bool unbounded_true = false;
        std::uint64_t bounded_points = 0; // true offsets below the last cut, per block
        for (const auto& pat : s->patterns) {
            for (std::size_t i = 0; i < pat.cuts.size(); ++i) {
                if (!pat.bits[i] || !realized_from(p, base, pat.cuts[i]))
                    continue;
                any_true = true;
                if (i + 1 == pat.cuts.size())
                    unbounded_true = true;
                else
                    bounded_points = std::max(bounded_points, pat.count_below(pat.cuts.back()));
            }
        }
        SeriesAnalysis out;
        out.values["partition"] = to_string(p);
        if (!any_true) {
            const TailVerdict fin = is_finite(c);
            if (!fin.is_proved())
                return std::nullopt;
            const std::uint64_t b = *fin.cert().bound;
            if (b > kScanLimit)
                return std::nullopt;
            out.converges = true;
            out.argument = "finite set";
            out.values["split"] = std::to_string(b);
            out.values["partial_sum"] = fmt(partial_weight(WeightRule::Harmonic, c, 0, b));
            out.values["tail_bound"] = "0";
            return out;
        }
        if (p.bounded()) {
            out.argument = "contains an arithmetic progression";
            add_divergence_scan(out, WeightRule::Harmonic, c);
            return out;
        }
        if (unbounded_true) {
            out.argument = "contains a fixed fraction of infinitely many blocks of unbounded size";
            add_divergence_scan(out, WeightRule::Harmonic, c);
            return out;
        }
        const auto kind = p.tail().kind;
        if (kind == TailRule::Kind::CeilLog2) {
            out.argument = "one point per block under logarithmic sizes compares with sum 1/(m log m)";
            add_divergence_scan(out, WeightRule::Harmonic, c);
            return out;
        }
        // Linear or power tails: block m >= M holds at most K points, each of weight <= 1/(start(m)+1).
        const std::uint64_t pre = p.regular_from();
        const std::uint64_t m_split = std::max(base, pre + 1);
        const std::uint64_t split = p.start(m_split);
        if (split > kScanLimit)
            return std::nullopt;
        const long double per_block = kind == TailRule::Kind::Linear
                                          ? 2.0L / static_cast<long double>(m_split - pre)
                                          : std::ldexp(2.0L, -static_cast<int>(std::min<std::uint64_t>(m_split - pre, 16000)));
        out.converges = true;
        out.argument = kind == TailRule::Kind::Linear
                           ? "at most K points per block, start(m) >= (m-p)(m-p+1)/2"
                           : "at most K points per block, start(m) + 1 >= 2^(m-p)";
        out.values["split"] = std::to_string(split);
        out.values["split_block"] = std::to_string(m_split);
        out.values["points_per_block"] = std::to_string(bounded_points);
        out.values["partial_sum"] = fmt(partial_weight(WeightRule::Harmonic, c, 0, split));
        out.values["tail_bound"] = fmt(static_cast<long double>(bounded_points) * per_block);
        return out;
    }
    return by_pieces(c);
}

SetDescription negate(const SetDescription& a)
{
    if (a.kind() == SetDescription::Kind::Not)
        return data_as<BoolData>(a).args.front();
    return ~a;
}

// Unions and intersections whose pieces have no common block shape: a union
// converges when every piece does and diverges when one piece does; an
// intersection converges when one piece does.
std::optional<SeriesAnalysis> by_pieces(const SetDescription& c)
{
    std::vector<SetDescription> pieces;
    bool is_union = false;
    const auto kind = c.kind();
    if (kind == SetDescription::Kind::Or || kind == SetDescription::Kind::And) {
        pieces = data_as<BoolData>(c).args;
        is_union = kind == SetDescription::Kind::Or;
    } else if (kind == SetDescription::Kind::Not) {
        const SetDescription& inner = data_as<BoolData>(c).args.front();
        if (inner.kind() != SetDescription::Kind::Or && inner.kind() != SetDescription::Kind::And)
            return std::nullopt;
        for (const auto& a : data_as<BoolData>(inner).args)
            pieces.push_back(negate(a));
        is_union = inner.kind() == SetDescription::Kind::And;
    } else {
        return std::nullopt;
    }
    std::vector<SeriesAnalysis> parts;
    for (const auto& piece : pieces) {
        auto a = harmonic(piece);
        if (a && a->converges != is_union) {
            // A divergent piece of a union, or a convergent piece of an intersection, settles it.
            SeriesAnalysis out;
            out.converges = !is_union;
            out.argument = is_union ? "contains a piece of infinite weight" : "inside a piece of finite weight";
            if (out.converges) {
                const std::uint64_t split = std::stoull(a->values.at("split"));
                out.values["split"] = std::to_string(split);
                out.values["partial_sum"] = fmt(partial_weight(WeightRule::Harmonic, c, 0, split));
                out.values["tail_bound"] = a->values.at("tail_bound");
            } else {
                add_divergence_scan(out, WeightRule::Harmonic, c);
            }
            return out;
        }
        if (!a)
            return std::nullopt;
        parts.push_back(std::move(*a));
    }
    if (!is_union || parts.empty())
        return std::nullopt;
    std::uint64_t split = 0;
    long double tail = 0;
    for (const auto& a : parts) {
        split = std::max<std::uint64_t>(split, std::stoull(a.values.at("split")));
        tail += std::stold(a.values.at("tail_bound"));
    }
    SeriesAnalysis out;
    out.converges = true;
    out.argument = "finite union of pieces of finite weight";
    out.values["split"] = std::to_string(split);
    out.values["partial_sum"] = fmt(partial_weight(WeightRule::Harmonic, c, 0, split));
    out.values["tail_bound"] = fmt(tail);
    return out;
}

std::optional<SeriesAnalysis> geometric(const SetDescription& c)
{
    SeriesAnalysis out;
    out.converges = true;
    out.argument = "sum of 2^-n over all n is 2";
    out.values["tail_bound"] = "2";
    const auto pp = position_period(c);
    if (!pp || pp->start + pp->period > 4096)
        return out;
    mpq_class head = 0, cycle = 0;
    auto term = [](std::uint64_t n) {
        mpz_class den = 1;
        den <<= static_cast<mp_bitcnt_t>(n);
        return mpq_class(mpz_class(1), den);
    };
    for (std::uint64_t n = 0; n < pp->start; ++n)
        if (member(c, n))
            head += term(n);
    for (std::uint64_t n = pp->start; n < pp->start + pp->period; ++n)
        if (member(c, n))
            cycle += term(n);
    mpq_class ratio = 1 - term(pp->period);
    mpq_class total = head + cycle / ratio;
    total.canonicalize();
    out.argument = "eventually periodic set, exact geometric sum";
    out.values["sum"] = total.get_str(10);
    return out;
}

} // namespace

long double weight_of(WeightRule w, std::uint64_t n)
{
    switch (w) {
    case WeightRule::Harmonic: return 1.0L / (static_cast<long double>(n) + 1.0L);
    case WeightRule::Geometric: return std::ldexp(1.0L, -static_cast<int>(std::min<std::uint64_t>(n, 20000)));
    case WeightRule::Counting: return 1.0L;
    }
    return 0;
}

long double partial_weight(WeightRule w, const SetDescription& c, std::uint64_t lo, std::uint64_t hi)
{
    long double sum = 0;
    std::uint64_t x = lo;
    while (x < hi) {
        auto y = next_member(c, x, hi);
        if (!y)
            break;
        sum += weight_of(w, *y);
        x = *y + 1;
    }
    return sum;
}

std::optional<long double> weight_tail_bound(WeightRule w, std::uint64_t m)
{
    if (w == WeightRule::Geometric)
        return std::ldexp(2.0L, -static_cast<int>(std::min<std::uint64_t>(m, 20000)));
    return std::nullopt;
}

std::optional<SeriesAnalysis> analyze_series(WeightRule w, const SetDescription& c)
{
    switch (w) {
    case WeightRule::Harmonic: return harmonic(c);
    case WeightRule::Geometric: return geometric(c);
    case WeightRule::Counting: {
        const TailVerdict fin = is_finite(c);
        if (fin.is_unknown())
            return std::nullopt;
        SeriesAnalysis out;
        out.converges = fin.is_proved();
        if (out.converges) {
            out.argument = "finite set";
            out.values["split"] = std::to_string(*fin.cert().bound);
            out.values["sum"] = std::to_string(count_range(c, 0, *fin.cert().bound));
        } else {
            out.argument = "infinite set";
        }
        return out;
    }
    }
    return std::nullopt;
}

} // namespace filterlab
