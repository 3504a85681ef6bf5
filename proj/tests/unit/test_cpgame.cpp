#include "filterlab/error.hpp"
#include "filterlab/cpgame.hpp"
#include "filterlab/expr.hpp"
#include "filterlab/oracle.hpp"
#include "filterlab/serialize.hpp"

#include "../support/generators.hpp"

#include <doctest.h>

using namespace filterlab;
using testgen::Rng;

namespace {

ContinuousWitness constant_witness(bool v)
{
    ContinuousWitness f;
    f.v = v;
    return f;
}

// values[k] = f(x_k) for the identity sequence, up to `len`.
std::vector<bool> values_of(const ContinuousWitness& f, std::uint64_t len)
{
    std::vector<bool> out(len);
    for (std::uint64_t k = 0; k < len; ++k)
        out[k] = f.at(k);
    return out;
}

std::vector<std::uint64_t> sizes_of(const BlockPartition& p, std::uint64_t blocks)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 0; m < blocks; ++m)
        out.push_back(p.size(m));
    return out;
}

} // namespace

TEST_SUITE("cpgame")
{
    TEST_CASE("cn_member examples")
    {
        const GameSetup g;
        CHECK(cn_member(constant_witness(false), 0, g).is_proved());
        CHECK(cn_member(constant_witness(true), 3, g).is_proved());

        ContinuousWitness f = constant_witness(false);
        for (std::uint64_t x = 3; x < 6; ++x) // block 2 of n+1
            f.exceptions[x] = true;
        const CnVerdict at2 = cn_member(f, 2, g);
        REQUIRE(at2.is_refuted());
        CHECK(*at2.cert().failing_block == 2);
        CHECK(cn_member(f, 3, g).is_proved());
        CHECK(cn_member(f, 0, g).is_refuted());
    }

    TEST_CASE("decomposition index examples")
    {
        const GameSetup g;
        const auto zero = decomposition_index(constant_witness(true), g);
        REQUIRE(zero.is_proved());
        CHECK(zero.cert() == 0);

        ContinuousWitness f = constant_witness(false);
        for (std::uint64_t x = 0; x < 15; ++x) // blocks 0..4
            f.exceptions[x] = true;
        const auto five = decomposition_index(f, g);
        REQUIRE(five.is_proved());
        CHECK(five.cert() == 5);

        ContinuousWitness bad = constant_witness(false);
        bad.tail = SetDescription::evens();
        CHECK_THROWS_AS(decomposition_index(bad, g), PreconditionError);
    }

    TEST_CASE("continuity follows the tail")
    {
        const GameSetup g;
        ContinuousWitness f = constant_witness(true);
        f.tail = SetDescription::interval(5, std::nullopt);
        CHECK(witness_continuity(f, g).is_proved());
        f.tail = SetDescription::odds();
        CHECK(witness_continuity(f, g).is_refuted());
    }

    TEST_CASE("avoidance move examples")
    {
        const GameSetup g;
        BasicOpenSet u;
        u.constraints[kInfinity] = false;
        const AvoidanceMove a = avoidance_move(u, 0, g);
        CHECK(a.block == 0);
        CHECK(a.v.constraints.at(0) == true);
        CHECK(a.witness.lies_in(a.v));
        CHECK(cn_member(a.witness, 0, g).is_refuted());

        BasicOpenSet w;
        w.constraints[0] = true;
        w.constraints[1] = false;
        w.constraints[3] = true;
        const AvoidanceMove b = avoidance_move(w, 1, g);
        CHECK(b.block == 3);
        CHECK(b.v.refines(w));
        // No constraint at infinity: it defaults to 0, and block 3 is forced to 1.
        for (std::uint64_t x = 6; x < 10; ++x)
            CHECK(b.v.constraints.at(x) == true);
        CHECK(cn_member(b.witness, 1, g).is_refuted());
    }

    TEST_CASE("refinement")
    {
        BasicOpenSet a, b;
        a.constraints = {{1, true}, {4, false}};
        b.constraints = {{1, true}};
        CHECK(a.refines(b));
        CHECK_FALSE(b.refines(a));
        CHECK(*b.violation_of(a) == 4);
        a.constraints[1] = false;
        CHECK(*a.violation_of(b) == 1);
    }

    TEST_CASE("play_game examples")
    {
        const GameSetup g;
        SeededAdversary adv(7);
        GameTranscript t = play_game(adv, 5, g);
        t.filter = "frechet";
        t.sequence = "identity";
        t.partition = "n+1";
        REQUIRE(t.rounds.size() == 5);
        for (std::uint64_t r = 0; r < 5; ++r) {
            CHECK(t.rounds[r].cn == Status::Refuted);
            CHECK(t.rounds[r].block >= r);
            CHECK(t.final_cn[r] == Status::Refuted);
        }
        std::string why;
        CHECK_MESSAGE(verify_transcript(t, &why), why);
        const GameTranscript back = decode_transcript(json::parse(transcript_text(t)));
        CHECK(back == t);
        CHECK(transcript_text(back) == transcript_text(t));

        GameTranscript tampered = t;
        tampered.rounds[2].block += 1;
        CHECK_FALSE(verify_transcript(tampered, &why));
    }

    TEST_CASE("a contradicting adversary is rejected")
    {
        const GameSetup g;
        BasicOpenSet first;
        first.constraints[kInfinity] = true;
        BasicOpenSet second;
        second.constraints[kInfinity] = true;
        second.constraints[0] = true; // the engine forced x_0 to 0
        ScriptedAdversary adv({first, second});
        CHECK_THROWS_AS(play_game(adv, 2, g), PreconditionError);
    }

    TEST_CASE("property: seeded games verify across setups")
    {
        for (const auto& sc : testgen::setup_cases())
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                SeededAdversary adv(seed);
                GameTranscript t = play_game(adv, 8, sc.setup);
                t.filter = to_string(sc.setup.space.neighborhoods);
                t.sequence = to_string(sc.setup.sequence);
                t.partition = to_string(sc.setup.partition);
                t.seed = seed;
                std::string why;
                INFO(t.filter, " seed ", seed);
                REQUIRE_MESSAGE(verify_transcript(t, &why), why);
                for (std::size_t r = 1; r < t.rounds.size(); ++r)
                    CHECK(t.rounds[r].adversary.refines(t.rounds[r - 1].engine));
            }
    }

    TEST_CASE("property: witnesses sit in C of their decomposition index")
    {
        Rng r(91);
        for (const auto& sc : testgen::setup_cases())
            for (int i = 0; i < 30; ++i) {
                const ContinuousWitness f = testgen::random_witness(r, sc.tail);
                REQUIRE(witness_continuity(f, sc.setup).is_proved());
                const auto idx = decomposition_index(f, sc.setup);
                REQUIRE(idx.is_proved());
                CHECK(cn_member(f, idx.cert(), sc.setup).is_proved());
                if (idx.cert() > 0)
                    CHECK(cn_member(f, idx.cert() - 1, sc.setup).is_refuted());
            }
    }

    TEST_CASE("property: cn_member agrees with the direct scan")
    {
        Rng r(17);
        const GameSetup g;
        for (int i = 0; i < 200; ++i) {
            const ContinuousWitness f = testgen::random_witness(r, &testgen::frechet_tail);
            // Past 64 every point follows the tail, which is cofinite from 41 on.
            const std::uint64_t blocks = 12; // covers [0, 78)
            const auto sizes = sizes_of(g.partition, blocks);
            const std::vector<bool> vals = values_of(f, g.partition.end(blocks - 1));
            for (std::uint64_t n = 0; n < 14; ++n) {
                const bool direct = oracle::cn(vals, f.v, f.v, n, sizes);
                CHECK(cn_member(f, n, g).is_proved() == direct);
            }
        }
    }
}
