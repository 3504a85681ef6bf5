#pragma once

#include "filterlab/filters.hpp"
#include "filterlab/partition.hpp"
#include "filterlab/pseudo.hpp"
#include "filterlab/set_description.hpp"
#include "filterlab/verdict.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace filterlab {

/// X = omega with one extra point at infinity whose neighborhoods are F u {inf}
/// for F in the filter; points of omega are isolated.
struct FilterSpace {
    FilterPresentation neighborhoods = FilterPresentation::frechet();

    /// i-th basic neighborhood of infinity (without the point itself).
    std::optional<SetDescription> basic(std::uint64_t i) const
    {
        return canonical_generator(neighborhoods, i);
    }
};

/// Infinite sets N_0, N_1, ... at the point at infinity: an explicit list, or
/// the canonical generators of a filter when `generated_by` is set.
struct INetwork {
    std::vector<SetDescription> sets;
    std::optional<FilterPresentation> generated_by;

    /// Number of sets, or none for an infinite family.
    std::optional<std::uint64_t> size() const
    {
        return generated_by ? std::nullopt : std::optional<std::uint64_t>(sets.size());
    }
    SetDescription at(std::uint64_t i) const;
};

/// {k : x_k in O} in closed form, when the sequence has one (identity or
/// negative shift tails, constant sequences).
std::optional<SetDescription> index_set(const PointSequence& seq, const SetDescription& o);

struct Theorem1Report {
    Status status = Status::Unknown;
    PointSequence sequence;         // materialized prefix, label names the rule
    BlockPartition partition;
    std::uint64_t blocks = 0;       // blocks fully materialized
    /// hit_from[i]: first block with more than i points; every later block meets N_i.
    std::vector<std::uint64_t> hit_from;
    std::optional<FilterPresentation> induced;
    std::optional<std::uint64_t> stuck_block;
    std::string reason;
};

/// Greedy injective sequence: inside block n, slot i < |block n| takes the
/// least unused point of N_i, and slots past the network take the least
/// unused natural. Blocks are materialized while they end below `horizon`.
Theorem1Report theorem1_sequence(const INetwork& net, const BlockPartition& p, std::uint64_t horizon,
                                 const FilterSpace& space = {});

/// Injectivity on the prefix and, for i < `max_set`, that every materialized
/// block with more than i points contains a point of N_i.
bool verify_theorem1(const Theorem1Report& r, const INetwork& net, std::uint64_t max_set = 21);

struct NeighborhoodCheck {
    std::uint64_t index = 0;
    std::optional<SetDescription> indices; // {k : x_k in O_i}
    FilterVerdict verdict;
};

struct ConvergenceCheck {
    std::vector<NeighborhoodCheck> neighborhoods;
};

using ConvergenceVerdict = Verdict<ConvergenceCheck>;

/// For the first `budget` basic neighborhoods O of infinity, decides
/// {k : x_k in O} in F. An induced filter built from the same sequence and
/// neighborhoods answers Proved by definition.
ConvergenceVerdict f_converges(const PointSequence& seq, const FilterPresentation& f, const FilterSpace& space,
                               std::uint64_t budget);

struct SubsequenceReport {
    Status status = Status::Unknown;
    std::optional<SetDescription> indices; // D
    std::vector<std::uint64_t> prefix;     // x_k for the first members k of D
    Lemma1Result lemma;
    /// D \ {k : x_k in O_j} is finite, for each checked neighborhood j.
    std::vector<TailVerdict> almost_inside;
    std::string reason;
};

/// A classically convergent subsequence from a witness partition with bounded
/// sizes; throws PreconditionError when the sizes are unbounded.
SubsequenceReport convergent_subsequence(const PointSequence& seq, const FilterSpace& space,
                                         const BlockPartition& witness, std::uint64_t budget);

struct DiagonalExclusion {
    std::size_t candidate = 0;
    std::uint64_t block = 0;
    std::uint64_t point = 0;
};

struct DiagonalRefutation {
    Status status = Status::Unknown;
    std::optional<SetDescription> f;
    std::optional<FilterVerdict> density;
    std::vector<DiagonalExclusion> excluded;
    std::string reason;
};

/// F = dyadic blocks with at most one point removed per block, chosen so
/// that candidate i loses a point in some block of index >= i. Blocks past
/// `max_block` are not scheduled.
DiagonalRefutation density_diagonal_refuter(const std::vector<SetDescription>& candidates,
                                            std::uint64_t max_block = 60);

} // namespace filterlab
