#pragma once

#include "filterlab/decide.hpp"
#include "filterlab/partition.hpp"
#include "filterlab/set_description.hpp"
#include "filterlab/verdict.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace filterlab {

/// w_n for the summable filters {A : sum_{n not in A} w_n < inf}.
enum class WeightRule {
    Harmonic,  // 1/(n+1)
    Geometric, // 2^-n
    Counting,  // 1
};

/// A sequence (x_k) of points of omega: an explicit prefix followed by
/// x_k = k + shift, or a constant sequence.
struct PointSequence {
    std::vector<std::uint64_t> prefix;
    std::int64_t shift = 0;
    std::optional<std::uint64_t> constant;
    std::string label; // names a construction whose prefix was materialized

    static PointSequence identity() { return {}; }
    static PointSequence constant_at(std::uint64_t c) { return {{}, 0, c, {}}; }
    static PointSequence shifted(std::int64_t s) { return {{}, s, std::nullopt, {}}; }

    std::uint64_t at(std::uint64_t k) const;
    /// Whether x_k = k from some index on. Labelled sequences only store a
    /// prefix of a construction, so they never qualify.
    bool identity_tail() const noexcept { return !constant && shift == 0 && label.empty(); }

    friend bool operator==(const PointSequence& a, const PointSequence& b)
    {
        return a.prefix == b.prefix && a.shift == b.shift && a.constant == b.constant;
    }
};

struct FilterNode;

/// A representable filter on omega (or on omega x omega for Fubini).
///
/// Construction validates properness where the class needs it: Generated
/// checks that the intersection of its base is infinite and Restriction
/// requires its set to be in the co-ideal.
class FilterPresentation {
public:
    enum class Kind { Frechet, Generated, BlockDensity, Summable, FubiniFrFr, Pushforward, Restriction, Induced };

    static FilterPresentation frechet();
    static FilterPresentation generated(std::vector<SetDescription> base);
    static FilterPresentation block_density(BlockPartition partition);
    static FilterPresentation summable(WeightRule w);
    static FilterPresentation fubini();
    /// xi(F); push(Frechet) is Frechet.
    static FilterPresentation pushforward(FilterPresentation inner, BlockPartition xi);
    /// F|A as a filter on omega: B belongs iff B union (omega \ A) is in F.
    static FilterPresentation restriction(FilterPresentation inner, SetDescription a);
    /// <{k : x_k in O} : O in nbhd> for a sequence converging to the point at infinity.
    static FilterPresentation induced(PointSequence seq, FilterPresentation nbhd);

    Kind kind() const noexcept;
    Universe universe() const noexcept;
    const FilterNode& node() const noexcept { return *node_; }

    friend bool operator==(const FilterPresentation& a, const FilterPresentation& b);

private:
    explicit FilterPresentation(std::shared_ptr<const FilterNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const FilterNode> node_;
};

struct FilterNode {
    FilterPresentation::Kind kind;
    std::vector<SetDescription> base;              // Generated
    std::optional<SetDescription> intersection;    // Generated: the meet of the base
    std::optional<BlockPartition> partition;       // BlockDensity, Pushforward
    WeightRule weight = WeightRule::Harmonic;      // Summable
    std::optional<FilterPresentation> inner;       // Pushforward, Restriction, Induced
    std::optional<SetDescription> restrict_to;     // Restriction
    std::optional<PointSequence> sequence;         // Induced

    friend bool operator==(const FilterNode&, const FilterNode&) = default;
};

/// Checkable evidence for a filter verdict.
///
/// `subject` is the set whose tail behaviour decides the question and `tail`
/// the corresponding certificate from decide.hpp, checked as a cofiniteness
/// certificate when `tail_cofinite` is set and as a finiteness certificate
/// otherwise. `values` carries class-specific numbers (density limits,
/// series bounds) rendered as exact strings.
struct Certificate {
    std::string method;
    std::optional<SetDescription> subject;
    std::optional<TailCertificate> tail;
    bool tail_cofinite = false;
    std::optional<SetDescription> witness;
    std::map<std::string, std::string> values;
    std::vector<Certificate> parts;
};

using FilterVerdict = Verdict<Certificate>;

FilterVerdict filter_member(const FilterPresentation& f, const SetDescription& a);
/// A in F+ iff omega \ A is not in F. A Refuted verdict names a member of F disjoint from A.
FilterVerdict coideal_member(const FilterPresentation& f, const SetDescription& a);
/// Whether the filter excludes the empty set.
FilterVerdict is_proper(const FilterPresentation& f);

/// Re-evaluates a filter verdict's certificate against the defining condition.
bool verify_filter_verdict(const FilterPresentation& f, const SetDescription& a, const FilterVerdict& v,
                           bool coideal = false);

/// The i-th canonical generator G_i, when the class has a countable canonical base.
std::optional<SetDescription> canonical_generator(const FilterPresentation& f, std::uint64_t i);

/// An interval partition xi with xi(F) = Fr: generator i meets every block of
/// index >= hit_from[i].
struct MeagernessWitness {
    BlockPartition partition;
    std::uint64_t start_index = 0;
    std::vector<std::uint64_t> hit_from;
    std::uint64_t horizon = 0;
    std::string tail_reason;
};

using MeagernessVerdict = Verdict<MeagernessWitness>;

MeagernessVerdict find_meagerness_witness(const FilterPresentation& f, std::uint64_t horizon,
                                          std::uint64_t min_intervals = 4);
/// Re-checks the hitting table with block_count for every block ending below the horizon.
bool verify_meagerness_witness(const FilterPresentation& f, const MeagernessWitness& w);

} // namespace filterlab
