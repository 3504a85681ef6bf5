#pragma once

#include "filterlab/convergence.hpp"
#include "filterlab/cpgame.hpp"
#include "filterlab/decide.hpp"
#include "filterlab/dyadic.hpp"
#include "filterlab/filters.hpp"
#include "filterlab/measure.hpp"
#include "filterlab/pseudo.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace filterlab {

using json = nlohmann::json;

inline constexpr const char* kReportSchema = "filterlab.report/1";
inline constexpr const char* kTranscriptSchema = "filterlab.transcript/1";

// Sets, partitions and filters are written in the expression grammar, so a
// report's inputs can be pasted back into the CLI.

json encode(Status s);
json encode(const Dyadic& d);
json encode(const Scheme& s);
json encode(const TailCertificate& c);
json encode(const TailVerdict& v);
json encode(const Certificate& c);
json encode(const FilterVerdict& v);
json encode(const MeagernessVerdict& v);
json encode(const PseudointersectionCertificate& c);
json encode(const Lemma1Result& r);
json encode(const LafResult& r);
json encode(const FubiniRefutation& r);
json encode(const Verdict<PseudoCheck>& v);
json encode(const BlockFamilyMeasure& m);
json encode(const NullVerdict& v);
json encode(const MonteCarloEstimate& e);
json encode(const Theorem1Report& r, std::size_t max_prefix = 64);
json encode(const ConvergenceVerdict& v);
json encode(const SubsequenceReport& r);
json encode(const DiagonalRefutation& r);
json encode(const BasicOpenSet& u);
json encode(const ContinuousWitness& f);
json encode(const CnVerdict& v);
json encode(const GameTranscript& t);

BasicOpenSet decode_open_set(const json& j);
ContinuousWitness decode_witness(const json& j);
GameTranscript decode_transcript(const json& j);

/// Canonical text of a transcript: two-space indented JSON with a trailing newline.
std::string transcript_text(const GameTranscript& t);

} // namespace filterlab
