#pragma once

#include "filterlab/dyadic.hpp"
#include "filterlab/partition.hpp"
#include "filterlab/verdict.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace filterlab {

/// [lower, upper] with 0 <= lower <= upper <= 1; the true value lies inside.
struct DyadicInterval {
    Dyadic lower;
    Dyadic upper;
};

/// Haar measure of F_n = {A : A meets every block k >= n} for a partition.
struct BlockFamilyMeasure {
    DyadicInterval enclosure;
    std::uint64_t from = 0;
    std::uint64_t factors = 0;
    /// Upper bound on sum_{k >= from + factors} 2^-|block k|, when it is below 1.
    std::optional<Dyadic> tail_sum_bound;
    /// Why the tail sum is or is not bounded.
    std::string tail_argument;
};

/// Exact partial product over blocks from .. from+factors-1 as the upper
/// bound; lower = upper * (1 - tail) when the tail sum is certified below 1.
BlockFamilyMeasure block_family_measure(const BlockPartition& p, std::uint64_t from, std::uint64_t factors);

/// Evidence for the null / positive-measure dichotomy of the families F_n.
///   Proved:  sum 2^-|block k| diverges; `factors` is the least count with
///            partial product below 1/100 and `partial` that product.
///   Refuted: the sum converges; `lower` is a positive lower bound on the
///            measure of F_0 obtained with `factors` explicit factors.
struct NullCertificate {
    std::string argument;
    std::uint64_t factors = 0;
    Dyadic partial;
    Dyadic lower;
};

using NullVerdict = Verdict<NullCertificate>;

NullVerdict is_null_certificate(const BlockPartition& p);

/// Sizes ceil(log2(n + 2)): unbounded, with divergent sum of 2^-size.
BlockPartition choose_null_meager_partition();

struct MonteCarloEstimate {
    double estimate = 0;
    double std_error = 0;
    std::uint64_t hits = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Fraction of uniform random subsets of blocks from .. from+factors-1 that
/// meet every block. Deterministic in `seed`.
MonteCarloEstimate monte_carlo_measure(const BlockPartition& p, std::uint64_t from, std::uint64_t factors,
                                       std::uint64_t samples, std::uint64_t seed);

} // namespace filterlab
