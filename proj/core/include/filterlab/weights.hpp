#pragma once

#include "filterlab/filters.hpp"
#include "filterlab/set_description.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace filterlab {

long double weight_of(WeightRule w, std::uint64_t n);
/// sum of w_n over C cap [lo, hi), accumulated in long double.
long double partial_weight(WeightRule w, const SetDescription& c, std::uint64_t lo, std::uint64_t hi);
/// Bound on sum_{n >= m} w_n, or nothing when the full series diverges.
std::optional<long double> weight_tail_bound(WeightRule w, std::uint64_t m);

/// Convergence of sum_{n in C} w_n with the numbers that justify it.
///
/// Converging series carry `partial_sum` over [0, `split`) and `tail_bound`
/// for the rest; geometric series over eventually periodic sets also carry
/// the exact rational `sum`. Diverging series carry the structural
/// `argument` and a partial sum `partial_sum` over [0, `split`) exceeding
/// `threshold`, when one was found within the scan budget.
struct SeriesAnalysis {
    bool converges = false;
    std::string argument;
    std::map<std::string, std::string> values;
};

std::optional<SeriesAnalysis> analyze_series(WeightRule w, const SetDescription& c);

} // namespace filterlab
