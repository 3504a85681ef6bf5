#include "filterlab/decide.hpp"

#include "filterlab/error.hpp"
#include "filterlab/shape.hpp"

#include <algorithm>

namespace filterlab {

namespace {

std::uint64_t first_aligned(std::uint64_t m, std::uint64_t period, std::uint64_t residue)
{
    return m + (residue + period - m % period) % period;
}

} // namespace

std::uint64_t Scheme::point(std::uint64_t i) const
{
    const std::uint64_t m = first_aligned(from_block, period, residue) + i * period;
    return partition.start(m) + offset;
}

std::uint64_t Scheme::first_index_at_or_after(std::uint64_t x) const
{
    const std::uint64_t m0 = first_aligned(from_block, period, residue);
    std::uint64_t m = std::max(m0, first_aligned(partition.block_of(x), period, residue));
    if (partition.start(m) + offset < x)
        m += period;
    return (m - m0) / period;
}

namespace {

constexpr std::uint64_t kRefineSteps = std::uint64_t{1} << 14;

// Least block m >= lo with size(m) > offset, assuming sizes are nondecreasing
// from lo on.
std::optional<std::uint64_t> first_block_larger(const BlockPartition& p, std::uint64_t lo, std::uint64_t offset)
{
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

// Decides cofiniteness of A from its shape against one partition.
TailVerdict decide_with(const SetDescription& a, const BlockPartition& p, const BlockShape& s)
{
    const std::uint64_t base = std::max(s.from_block, p.regular_from());
    for (std::uint64_t r = 0; r < s.period; ++r) {
        const OffsetPattern& pat = s.patterns[r];
        for (std::size_t i = 0; i < pat.cuts.size(); ++i) {
            if (pat.bits[i])
                continue;
            const std::uint64_t offset = pat.cuts[i];
            std::optional<std::uint64_t> m;
            if (p.bounded()) {
                if (offset < p.eventual_size())
                    m = base;
            } else {
                m = first_block_larger(p, base, offset);
            }
            if (!m)
                continue;
            const std::uint64_t aligned = first_aligned(*m, s.period, r);
            if (aligned > p.max_block())
                continue;
            Scheme sc{p, s.period, r, aligned, offset};
            return TailVerdict::refuted(TailCertificate{std::nullopt, sc}, "infinitely many blocks miss an offset");
        }
    }
    std::uint64_t b = p.start(std::min(base, p.max_block()));
    for (std::uint64_t steps = 0; b > 0 && steps < kRefineSteps && member(a, b - 1); ++steps)
        --b;
    return TailVerdict::proved(TailCertificate{b, std::nullopt}, "every block from the bound on is full");
}

} // namespace

TailVerdict is_cofinite(const SetDescription& a)
{
    if (a.universe() != Universe::Omega)
        return TailVerdict::unknown(0, "cofiniteness is decided for subsets of omega only");
    std::vector<BlockPartition> refs = mentioned_partitions(a);
    refs.push_back(BlockPartition::constant(1));
    for (const auto& p : refs) {
        if (auto s = shape_of(a, p))
            return decide_with(a, p, *s);
    }
    return TailVerdict::unknown(0, "no closed-form block shape for this combination");
}

TailVerdict is_finite(const SetDescription& a)
{
    return is_cofinite(~a);
}

TailVerdict almost_subset(const SetDescription& a, const SetDescription& b)
{
    return is_finite(a & ~b);
}

bool verify_tail(const SetDescription& a, const TailVerdict& v, bool cofinite, std::uint64_t samples)
{
    if (v.is_unknown())
        return !v.certificate.has_value();
    if (!v.certificate)
        return false;
    const TailCertificate& c = *v.certificate;
    if (c.bound.has_value() == c.scheme.has_value())
        return false;
    // Proved cofinite and Refuted finite both expect members; the other two expect non-members.
    if (c.bound) {
        if (!v.is_proved())
            return false;
        const bool want = cofinite;
        for (std::uint64_t k = 0; k < samples; ++k) {
            const std::uint64_t x = *c.bound + k * k * k;
            if (x >= kMaxPosition)
                break;
            if (member(a, x) != want || member(a, *c.bound + k) != want)
                return false;
        }
        return true;
    }
    if (!v.is_refuted())
        return false;
    const Scheme& s = *c.scheme;
    const bool want = !cofinite;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const std::uint64_t m = s.from_block + (s.residue + s.period - s.from_block % s.period) % s.period + i * s.period;
        if (m > s.partition.max_block())
            break;
        if (s.partition.size(m) <= s.offset)
            return false;
        if (member(a, s.point(i)) != want)
            return false;
    }
    return true;
}

} // namespace filterlab
