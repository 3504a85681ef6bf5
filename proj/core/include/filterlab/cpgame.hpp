#pragma once

#include "filterlab/convergence.hpp"
#include "filterlab/filters.hpp"
#include "filterlab/partition.hpp"
#include "filterlab/set_description.hpp"
#include "filterlab/verdict.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace filterlab {

/// The point at infinity of X = omega u {inf}.
inline constexpr std::uint64_t kInfinity = ~std::uint64_t{0};

/// {f in C_p(X, 2) : f(x) = b for every constraint x -> b}.
struct BasicOpenSet {
    std::map<std::uint64_t, bool> constraints;

    /// First constraint of `coarser` that this set drops or flips.
    std::optional<std::uint64_t> violation_of(const BasicOpenSet& coarser) const;
    bool refines(const BasicOpenSet& coarser) const { return !violation_of(coarser); }

    friend bool operator==(const BasicOpenSet&, const BasicOpenSet&) = default;
};

/// f = `exceptions` where given, v on tail u {inf}, and 1 - v elsewhere.
/// Continuous exactly when the tail belongs to the neighborhood filter.
struct ContinuousWitness {
    std::map<std::uint64_t, bool> exceptions;
    bool v = false;
    SetDescription tail = SetDescription::omega();

    bool at(std::uint64_t x) const;
    bool lies_in(const BasicOpenSet& u) const;

    friend bool operator==(const ContinuousWitness&, const ContinuousWitness&) = default;
};

/// The space, the sequence converging to infinity, and the partition it is meager for.
struct GameSetup {
    FilterSpace space;
    PointSequence sequence = PointSequence::identity();
    BlockPartition partition = BlockPartition::linear(1);
};

FilterVerdict witness_continuity(const ContinuousWitness& f, const GameSetup& g);

/// {k : f(x_k) = f(inf)}, when the sequence has closed-form index sets.
std::optional<SetDescription> agreement_set(const ContinuousWitness& f, const GameSetup& g);

struct CnCertificate {
    /// Refuted: a block m >= n on which f(x_k) != f(inf) throughout.
    std::optional<std::uint64_t> failing_block;
    /// Proved: every block from `hit_from` on contains an agreeing k (hit_from <= n).
    std::optional<std::uint64_t> hit_from;
    std::string argument;
};

using CnVerdict = Verdict<CnCertificate>;

/// f in C_n iff every block m >= n contains k with f(x_k) = f(inf).
/// At most `horizon` blocks are scanned explicitly.
CnVerdict cn_member(const ContinuousWitness& f, std::uint64_t n, const GameSetup& g, std::uint64_t horizon = 1 << 16);

/// Least n with f in C_n; Unknown when no closed form is available. Throws
/// PreconditionError when the agreement set is not in the filter.
Verdict<std::uint64_t> decomposition_index(const ContinuousWitness& f, const GameSetup& g,
                                           std::uint64_t horizon = 1 << 16);

struct AvoidanceMove {
    BasicOpenSet v;
    ContinuousWitness witness;
    std::uint64_t block = 0;
};

/// V inside U disjoint from C_n: the least block m >= n whose points avoid
/// dom(U) is forced to disagree with the value at infinity.
AvoidanceMove avoidance_move(const BasicOpenSet& u, std::uint64_t n, const GameSetup& g);

class Adversary {
public:
    virtual ~Adversary() = default;
    /// The move of round r, given the engine's previous move (empty before round 0).
    virtual BasicOpenSet move(const BasicOpenSet& previous, std::uint64_t round) = 0;
};

class ScriptedAdversary : public Adversary {
public:
    explicit ScriptedAdversary(std::vector<BasicOpenSet> moves) : moves_(std::move(moves)) {}
    BasicOpenSet move(const BasicOpenSet& previous, std::uint64_t round) override;

private:
    std::vector<BasicOpenSet> moves_;
};

/// Adds a few random constraints on fresh points each round.
class SeededAdversary : public Adversary {
public:
    explicit SeededAdversary(std::uint64_t seed) : rng_(seed) {}
    BasicOpenSet move(const BasicOpenSet& previous, std::uint64_t round) override;

private:
    std::mt19937_64 rng_;
};

struct GameRound {
    BasicOpenSet adversary;
    BasicOpenSet engine;
    std::uint64_t avoided = 0; // n
    std::uint64_t block = 0;   // m
    ContinuousWitness witness;
    Status cn = Status::Unknown; // cn_member(witness, n)

    friend bool operator==(const GameRound&, const GameRound&) = default;
};

struct GameTranscript {
    std::string filter;    // neighborhood filter expression
    std::string sequence;  // sequence expression
    std::string partition; // partition expression
    std::optional<std::uint64_t> seed;
    std::vector<GameRound> rounds;
    /// cn_member(final witness, r) for every round r.
    std::vector<Status> final_cn;

    friend bool operator==(const GameTranscript&, const GameTranscript&) = default;
};

/// Throws PreconditionError when an adversary move does not refine the
/// engine's previous move.
GameTranscript play_game(Adversary& adversary, std::uint64_t rounds, const GameSetup& g);

GameSetup setup_of(const GameTranscript& t);

/// Replays the recorded adversary moves and checks the result matches, along
/// with refinement, block disjointness and the C_n refutations.
bool verify_transcript(const GameTranscript& t, std::string* why = nullptr);

} // namespace filterlab
