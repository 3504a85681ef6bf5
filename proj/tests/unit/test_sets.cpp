#include "filterlab/error.hpp"
#include "filterlab/decide.hpp"
#include "filterlab/expr.hpp"
#include "filterlab/serialize.hpp"

#include "../support/generators.hpp"

#include <doctest.h>

using namespace filterlab;
using testgen::Rng;

TEST_SUITE("sets")
{
    TEST_CASE("member examples")
    {
        CHECK_FALSE(member(SetDescription::cofinite({3}), 3));
        // Blocks of size 2 start at 0, 2, 4: 4 is the first point of block 2.
        const auto first = SetDescription::block_rule(BlockPartition::constant(2), Selector::first(1));
        CHECK(member(first, 4));
        CHECK_FALSE(member(first, 5));
        CHECK_FALSE(member(~SetDescription::finite({0, 1}), 0));
        CHECK(member(~SetDescription::finite({0, 1}), 2));
    }

    TEST_CASE("block_count examples")
    {
        CHECK(block_count(SetDescription::omega(), BlockPartition::linear(1), 4) == 5);
        const auto first2 = SetDescription::block_rule(BlockPartition::constant(3), Selector::first(2));
        for (std::uint64_t n : {0u, 1u, 7u, 1000u})
            CHECK(block_count(first2, BlockPartition::constant(3), n) == 2);
        // Block 2 of const:2 is [4,6), and both of its points are dropped.
        const auto drop7 = SetDescription::cofinite({0, 1, 2, 3, 4, 5, 6});
        std::uint64_t direct = 0;
        for (std::uint64_t x = 4; x < 6; ++x)
            direct += member(drop7, x) ? 1 : 0;
        CHECK(block_count(drop7, BlockPartition::constant(2), 2) == direct);
        CHECK(direct == 0);
        CHECK(block_count(drop7, BlockPartition::constant(2), 3) == 1);
    }

    TEST_CASE("is_cofinite examples")
    {
        const TailVerdict a = is_cofinite(SetDescription::cofinite({1, 2}));
        REQUIRE(a.is_proved());
        CHECK(a.cert().bound == 3);
        const auto first = SetDescription::block_rule(BlockPartition::constant(2), Selector::first(1));
        const TailVerdict b = is_cofinite(first);
        REQUIRE(b.is_refuted());
        CHECK(verify_tail(first, b, true));
        CHECK(is_cofinite(SetDescription::interval(0, 10)).is_refuted());
    }

    TEST_CASE("partition layout")
    {
        const BlockPartition p = parse_partition("[1,2];n+1");
        CHECK(p.size(0) == 1);
        CHECK(p.size(1) == 2);
        CHECK(p.start(2) == 3);
        CHECK(p.size(2) == 3);
        const BlockPartition d = BlockPartition::dyadic();
        CHECK(d.start(0) == 0);
        CHECK(d.size(0) == 1);
        for (std::uint64_t n = 1; n < 12; ++n) {
            CHECK(d.start(n) == std::uint64_t{1} << (n - 1));
            CHECK(d.size(n) == std::uint64_t{1} << (n - 1));
        }
        CHECK_THROWS_AS(parse_partition("const:0"), ParseError);
    }

    TEST_CASE("parse errors carry positions")
    {
        try {
            parse_set("and(evens, bogus(1))");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.position() == 11);
        }
        CHECK_THROWS_AS(parse_set("evens extra"), ParseError);
        CHECK_THROWS_AS(parse_filter("summable(w=cubic)"), ParseError);
    }

    TEST_CASE("property: bitmask agrees with block counts")
    {
        Rng r(11);
        for (int t = 0; t < 300; ++t) {
            const SetDescription a = testgen::random_set(r);
            const BlockPartition p = testgen::random_partition(r, r.coin());
            const std::uint64_t horizon = 200;
            std::uint64_t m = 0;
            while (p.end(m) <= horizon) {
                std::uint64_t direct = 0;
                for (std::uint64_t x = p.start(m); x < p.end(m); ++x)
                    direct += member(a, x) ? 1 : 0;
                INFO(to_string(a), " ", to_string(p), " block ", m);
                REQUIRE(block_count(a, p, m) == direct);
                ++m;
            }
        }
    }

    TEST_CASE("property: cofinite bound holds on sampled points")
    {
        Rng r(12);
        int proved = 0;
        for (int t = 0; t < 400; ++t) {
            const SetDescription a = testgen::random_set(r);
            const TailVerdict v = is_cofinite(a);
            if (!v.is_proved())
                continue;
            ++proved;
            const std::uint64_t b = *v.cert().bound;
            for (int s = 0; s < 200; ++s) {
                const std::uint64_t x = b + r.between(0, 1000000);
                INFO(to_string(a), " at ", x);
                REQUIRE(member(a, x));
            }
        }
        CHECK(proved > 20);
    }

    TEST_CASE("property: tail certificates re-verify")
    {
        Rng r(13);
        for (int t = 0; t < 400; ++t) {
            const SetDescription a = testgen::random_set(r);
            const TailVerdict c = is_cofinite(a);
            const TailVerdict f = is_finite(a);
            INFO(to_string(a));
            if (!c.is_unknown())
                CHECK(verify_tail(a, c, true));
            if (!f.is_unknown())
                CHECK(verify_tail(a, f, false));
            // A set cannot be both finite and cofinite.
            CHECK_FALSE((c.is_proved() && f.is_proved()));
        }
    }

    TEST_CASE("property: Boolean laws hold pointwise")
    {
        Rng r(14);
        for (int t = 0; t < 200; ++t) {
            const SetDescription a = testgen::random_set(r);
            const SetDescription b = testgen::random_set(r);
            const SetDescription both = a & b, either = a | b, neither = ~(a | b);
            for (int s = 0; s < 50; ++s) {
                const std::uint64_t x = r.coin() ? r.between(0, 100) : r.between(0, 1u << 30);
                const bool ma = member(a, x), mb = member(b, x);
                REQUIRE(member(both, x) == (ma && mb));
                REQUIRE(member(either, x) == (ma || mb));
                REQUIRE(member(neither, x) == (!ma && !mb));
            }
        }
    }

    TEST_CASE("property: canonical text round-trips")
    {
        Rng r(15);
        for (int t = 0; t < 300; ++t) {
            const SetDescription a = testgen::random_set(r);
            const std::string text = to_string(a);
            const json report{{"set", text}};
            const SetDescription back = parse_set(json::parse(report.dump())["set"].get<std::string>());
            INFO(text);
            CHECK(to_string(back) == text);
            for (std::uint64_t x = 0; x < 64; ++x)
                REQUIRE(member(back, x) == member(a, x));
        }
        for (const char* p : {"const:3", "[1,2];n+4", "log2+2", "pow3", "dyadic", "[5];log2+7"})
            CHECK(to_string(parse_partition(p)) == p);
    }

    TEST_CASE("pairs")
    {
        const SetDescription d = parse_set("rows(from=2,lo=n,hi=2*n+1)");
        CHECK(d.universe() == Universe::OmegaSquared);
        CHECK_FALSE(member_pair(d, 1, 1));
        CHECK(member_pair(d, 3, 3));
        CHECK(member_pair(d, 3, 6));
        CHECK_FALSE(member_pair(d, 3, 7));
        CHECK(member(d, cantor_pair(3, 4)));
        const auto [row, col] = cantor_unpair(cantor_pair(17, 5));
        CHECK(row == 17);
        CHECK(col == 5);
        CHECK_THROWS_AS(parse_set("and(evens,rows:all)"), ParseError);
    }
}
