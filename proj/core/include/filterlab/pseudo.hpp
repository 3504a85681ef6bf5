#pragma once

#include "filterlab/decide.hpp"
#include "filterlab/filters.hpp"
#include "filterlab/partition.hpp"
#include "filterlab/set_description.hpp"
#include "filterlab/verdict.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace filterlab {

/// Blocks C_i = xi^{-1}(i) cap carrier for i in `index_set`, over a partition
/// with bounded sizes, and a finite generator base of a filter on their union.
struct BoundedBlockInstance {
    BlockPartition partition;
    SetDescription index_set = SetDescription::omega();
    SetDescription carrier = SetDescription::omega();
    std::vector<SetDescription> generators;
};

/// An infinite A with the explicit finite exceptions A \ G for each generator G.
struct PseudointersectionCertificate {
    SetDescription a;
    std::vector<std::vector<std::uint64_t>> exceptions;
    /// is_finite(A) = Refuted certificate: a scheme inside A.
    TailCertificate infinite;
};

/// One level of the bounded-block recursion.
struct Lemma1Step {
    std::uint64_t bound = 0;          // n = sup |C_i| at this level
    std::optional<std::size_t> chosen; // index of H_0, none at the last level
    SetDescription index_set;         // J at this level
    SetDescription carrier;
};

struct Lemma1Result {
    Status status = Status::Unknown;
    std::optional<PseudointersectionCertificate> certificate;
    std::vector<Lemma1Step> trace;
    /// Invalid instance: the generators whose intersection misses infinitely
    /// many blocks, and the first missed block indices.
    std::vector<std::size_t> violating;
    std::vector<std::uint64_t> missed_blocks;
    std::string reason;

    std::size_t depth() const noexcept { return trace.empty() ? 0 : trace.size() - 1; }
};

/// Proved with an infinite pseudointersection of the generators inside the
/// union of the blocks; Refuted when the instance is invalid; Unknown when a
/// set has no periodic closed form against the partition.
Lemma1Result lemma1_pseudointersection(const BoundedBlockInstance& inst);

struct LafSegment {
    std::uint64_t k = 0;
    std::uint64_t lo = 0; // n_k
    std::uint64_t hi = 0; // n_{k+1}
    long double weight = 0; // phi([n_k, n_{k+1}) cap A_k) > k
};

struct LafResult {
    Status status = Status::Unknown;
    std::optional<PseudointersectionCertificate> certificate;
    std::vector<LafSegment> segments;
    /// Per link: A_k belongs to the summable filter itself (not only to its co-ideal).
    std::vector<Status> in_filter;
    std::string reason;
};

/// Segments [n_k, n_{k+1}) with n_{k+1} least such that the weight of
/// [n_k, n_{k+1}) cap A_k exceeds k; A uses A_K from the last link on.
/// Each link must have infinite weight and the chain must be decreasing.
LafResult laf_pseudointersection(WeightRule w, const std::vector<SetDescription>& chain, std::uint64_t horizon);

/// The chain A_k = {(n, m) : n >= k} in the Fubini product filter.
SetDescription fubini_chain_link(std::uint64_t k);

struct FubiniRefutation {
    Status status = Status::Unknown;
    /// Every row of D is finite; rows from `row_bound` on follow the eventual rule.
    std::uint64_t row_bound = 0;
    std::optional<SetDescription> blocking;
    std::optional<FilterVerdict> blocking_member;
    /// Rejected candidate: the link k with D \ A_k infinite.
    std::optional<std::uint64_t> violated_k;
    std::string reason;
};

/// Proved: D is a pseudointersection of the chain, every row of D is finite,
/// and `blocking` is a member of the product filter disjoint from D.
/// Refuted: D is not a pseudointersection (finite, or `violated_k`).
FubiniRefutation fubini_refute(const SetDescription& d);

/// Checks that no sampled point below the horizon lies in both sets.
bool verify_fubini_refutation(const SetDescription& d, const FubiniRefutation& r, std::uint64_t horizon);

/// Failure location of a pseudointersection check.
struct PseudoCheck {
    std::optional<std::size_t> generator;
    std::optional<std::uint64_t> point;
    std::string detail;
};

/// Re-checks infinitude (at least `min_count` members below the horizon and
/// the stored scheme) and each exception set pointwise below the horizon.
Verdict<PseudoCheck> verify_pseudointersection(const PseudointersectionCertificate& cert,
                                               const std::vector<SetDescription>& generators,
                                               std::uint64_t horizon, std::uint64_t min_count = 8);

} // namespace filterlab
