#pragma once

#include "filterlab/partition.hpp"
#include "filterlab/set_description.hpp"
#include "filterlab/verdict.hpp"

#include <cstdint>
#include <optional>

namespace filterlab {

/// The infinite set { start(m) + offset : m >= from_block, m = residue mod period }
/// of a partition. Every block it names has more than `offset` points.
struct Scheme {
    BlockPartition partition;
    std::uint64_t period = 1;
    std::uint64_t residue = 0;
    std::uint64_t from_block = 0;
    std::uint64_t offset = 0;

    /// The i-th point of the scheme.
    std::uint64_t point(std::uint64_t i) const;
    /// Index of the first scheme point >= x.
    std::uint64_t first_index_at_or_after(std::uint64_t x) const;

    friend bool operator==(const Scheme&, const Scheme&) = default;
};

/// Certificate for a tail question about A. Exactly one field is set.
///   is_cofinite: bound b with [b, inf) inside A, or a scheme disjoint from A.
///   is_finite:   bound b with A inside [0, b), or a scheme inside A.
struct TailCertificate {
    std::optional<std::uint64_t> bound;
    std::optional<Scheme> scheme;
};

using TailVerdict = Verdict<TailCertificate>;

TailVerdict is_cofinite(const SetDescription& a);
TailVerdict is_finite(const SetDescription& a);
inline TailVerdict is_infinite(const SetDescription& a)
{
    TailVerdict v = is_finite(a);
    if (v.status != Status::Unknown)
        v.status = v.is_proved() ? Status::Refuted : Status::Proved;
    return v;
}
/// A \ B finite.
TailVerdict almost_subset(const SetDescription& a, const SetDescription& b);

/// Re-checks a certificate from is_cofinite (`cofinite` true) or is_finite by
/// evaluating membership on `samples` points of the claimed region.
bool verify_tail(const SetDescription& a, const TailVerdict& v, bool cofinite, std::uint64_t samples = 4096);

} // namespace filterlab
