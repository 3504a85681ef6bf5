#pragma once

#include "filterlab/filters.hpp"
#include "filterlab/partition.hpp"
#include "filterlab/set_description.hpp"

#include <string>
#include <string_view>

namespace filterlab {

// Textual grammar for partitions, sets, filters and sequences; see docs/grammar.md.
// Parsers throw ParseError with the offending character offset. Printers emit
// the canonical form, and parse(print(x)) == x for every value.

BlockPartition parse_partition(std::string_view text);
SetDescription parse_set(std::string_view text);
FilterPresentation parse_filter(std::string_view text);
PointSequence parse_sequence(std::string_view text);

std::string to_string(const TailRule& t);
std::string to_string(const BlockPartition& p);
std::string to_string(const Selector& s);
std::string to_string(const Affine& a);
std::string to_string(const SetDescription& a);
std::string to_string(const FilterPresentation& f);
std::string to_string(const PointSequence& s);
std::string to_string(WeightRule w);

} // namespace filterlab
