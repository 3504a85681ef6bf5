#include "filterlab/error.hpp"
#include "filterlab/expr.hpp"
#include "filterlab/oracle.hpp"
#include "filterlab/pseudo.hpp"
#include "filterlab/weights.hpp"

#include "../support/generators.hpp"

#include <doctest.h>

using namespace filterlab;
using testgen::Rng;

namespace {

SetDescription S(const char* s)
{
    return parse_set(s);
}

// The members of A inside one period, folded mod N; A's tail is sampled far out.
std::vector<bool> fold(const SetDescription& a, std::uint64_t n, std::uint64_t from, std::uint64_t periods)
{
    std::vector<bool> out(n, false);
    const std::uint64_t base = from - from % n;
    for (std::uint64_t x = base; x < base + periods * n; ++x)
        if (member(a, x))
            out[x % n] = true;
    return out;
}

} // namespace

TEST_SUITE("pseudo")
{
    TEST_CASE("lemma1 with singleton blocks returns the blocks themselves")
    {
        BoundedBlockInstance inst{BlockPartition::constant(1), S("evens"), SetDescription::omega(),
                                  {S("cofinite(drop=[0,4])")}};
        const Lemma1Result r = lemma1_pseudointersection(inst);
        REQUIRE(r.status == Status::Proved);
        CHECK(r.depth() == 0);
        for (std::uint64_t x = 0; x < 1000; ++x)
            REQUIRE(member(r.certificate->a, x) == (x % 2 == 0));
        CHECK(r.certificate->exceptions[0] == std::vector<std::uint64_t>{0, 4});
    }

    TEST_CASE("lemma1 on pairs with the evens")
    {
        BoundedBlockInstance inst{BlockPartition::constant(2), SetDescription::omega(), SetDescription::omega(),
                                  {S("evens")}};
        const Lemma1Result r = lemma1_pseudointersection(inst);
        REQUIRE(r.status == Status::Proved);
        REQUIRE(r.trace.size() == 2);
        CHECK(r.trace[0].bound == 2);
        CHECK(r.trace[0].chosen == 0);
        CHECK(r.trace[1].bound == 1);
        // J is every index: each pair {2i, 2i+1} meets the evens in one point.
        for (std::uint64_t i = 0; i < 100; ++i)
            REQUIRE(member(r.trace[1].index_set, i));
        for (std::uint64_t x = 0; x < 1000; ++x)
            REQUIRE(member(r.certificate->a, x) == (x % 2 == 0));
        CHECK(r.depth() <= 2);
    }

    TEST_CASE("lemma1 with evens and the full set, checked by brute force")
    {
        BoundedBlockInstance inst{BlockPartition::constant(2), SetDescription::omega(), SetDescription::omega(),
                                  {S("evens"), S("omega")}};
        const Lemma1Result r = lemma1_pseudointersection(inst);
        REQUIRE(r.status == Status::Proved);
        for (const auto& e : r.certificate->exceptions)
            CHECK(e.empty());
        oracle::PeriodicInstance twin{2, {{0, 1}}, {{true, false}, {true, true}}};
        const auto pattern = fold(r.certificate->a, 2, 0, 16);
        CHECK(oracle::is_pseudointersection(twin, pattern));
        const auto all = oracle::pseudointersections(twin);
        CHECK(std::find(all.begin(), all.end(), pattern) != all.end());
    }

    TEST_CASE("lemma1 rejects invalid instances and unbounded sizes")
    {
        BoundedBlockInstance bad{BlockPartition::constant(2), SetDescription::omega(), SetDescription::omega(),
                                 {S("evens"), S("odds")}};
        const Lemma1Result r = lemma1_pseudointersection(bad);
        CHECK(r.status == Status::Refuted);
        CHECK(r.violating == std::vector<std::size_t>{0, 1});
        BoundedBlockInstance unbounded{BlockPartition::linear(1), SetDescription::omega(), SetDescription::omega(),
                                       {S("omega")}};
        CHECK_THROWS_AS(lemma1_pseudointersection(unbounded), PreconditionError);
    }

    TEST_CASE("verify_pseudointersection examples")
    {
        BoundedBlockInstance inst{BlockPartition::constant(2), SetDescription::omega(), SetDescription::omega(),
                                  {S("evens"), S("cofinite(drop=[0,2])")}};
        const Lemma1Result r = lemma1_pseudointersection(inst);
        REQUIRE(r.status == Status::Proved);
        CHECK(verify_pseudointersection(*r.certificate, inst.generators, 10000).is_proved());

        PseudointersectionCertificate wrong{S("evens"), {{}}, is_infinite(S("evens")).cert()};
        CHECK(verify_pseudointersection(wrong, {S("odds")}, 1000).is_refuted());

        PseudointersectionCertificate mutated = *r.certificate;
        REQUIRE(mutated.exceptions[1] == std::vector<std::uint64_t>{0, 2});
        mutated.exceptions[1] = {0};
        const auto v = verify_pseudointersection(mutated, inst.generators, 10000);
        REQUIRE(v.is_refuted());
        CHECK(v.cert().generator == 1);
        CHECK(v.cert().point == 2);
    }

    TEST_CASE("laf with counting measure")
    {
        std::vector<SetDescription> chain;
        for (std::uint64_t k = 0; k < 6; ++k)
            chain.push_back(SetDescription::interval(k, std::nullopt));
        const LafResult r = laf_pseudointersection(WeightRule::Counting, chain, 100000);
        REQUIRE(r.status == Status::Proved);
        std::uint64_t n = 0;
        for (std::uint64_t k = 0; k < r.segments.size(); ++k) {
            CHECK(r.segments[k].lo == n);
            CHECK(r.segments[k].hi == n + k + 1);
            n += k + 1;
        }
        CHECK(verify_pseudointersection(*r.certificate, chain, 1000, 1).is_proved());
    }

    TEST_CASE("laf with a single link")
    {
        const LafResult r = laf_pseudointersection(WeightRule::Harmonic, {SetDescription::omega()}, 1000);
        REQUIRE(r.status == Status::Proved);
        REQUIRE(r.segments.size() == 1);
        CHECK(r.segments[0].weight > 0);
        CHECK(r.certificate->exceptions[0].empty());
    }

    TEST_CASE("laf on harmonic evens minus initial segments")
    {
        std::vector<SetDescription> chain;
        for (std::uint64_t k = 0; k < 4; ++k)
            chain.push_back(S("evens") & SetDescription::interval(k, std::nullopt));
        const LafResult r = laf_pseudointersection(WeightRule::Harmonic, chain, 10000000);
        REQUIRE(r.status == Status::Proved);
        for (const auto s : r.in_filter)
            CHECK(s == Status::Refuted); // in the co-ideal only
        for (const auto& seg : r.segments) {
            long double w = 0, before_last = 0;
            std::uint64_t last = seg.lo;
            for (std::uint64_t x = seg.lo; x < seg.hi; ++x)
                if (member(chain[seg.k], x)) {
                    before_last = w;
                    w += 1.0L / (x + 1);
                    last = x;
                }
            CHECK(w > seg.k);
            CHECK(before_last <= seg.k + 1e-9L);
            CHECK(last + 1 == seg.hi);
        }
        for (std::uint64_t k = 0; k < chain.size(); ++k)
            for (const auto x : r.certificate->exceptions[k])
                CHECK(x < r.segments[k].lo);
    }

    TEST_CASE("laf preconditions")
    {
        CHECK_THROWS_AS(laf_pseudointersection(WeightRule::Harmonic, {S("blocks(sizes=pow2,rule=first(1))")}, 1000),
                        PreconditionError);
        CHECK_THROWS_AS(laf_pseudointersection(WeightRule::Counting, {S("evens"), S("odds")}, 1000),
                        PreconditionError);
    }

    TEST_CASE("fubini refuter examples")
    {
        const FubiniRefutation a = fubini_refute(S("rows:first(1)"));
        REQUIRE(a.status == Status::Proved);
        CHECK(to_string(*a.blocking) == "rows(from=0,lo=1,hi=inf)");
        CHECK(a.blocking_member->is_proved());
        CHECK(verify_fubini_refutation(S("rows:first(1)"), a, 1 << 16));

        const FubiniRefutation b = fubini_refute(S("rows:diag"));
        CHECK(b.status == Status::Refuted);
        CHECK(b.violated_k == 1);

        CHECK(fubini_refute(S("rows(from=0,lo=0,hi=0)")).status == Status::Refuted);
        CHECK(fubini_refute(S("and(rows:first(3),rows(from=0,lo=0,hi=5))")).status == Status::Proved);
        CHECK_THROWS_AS(fubini_refute(S("evens")), UniverseMismatch);
    }

    TEST_CASE("fubini chain links are in the product filter")
    {
        const auto f = FilterPresentation::fubini();
        for (std::uint64_t k = 0; k < 10; ++k)
            CHECK(filter_member(f, fubini_chain_link(k)).is_proved());
    }

    TEST_CASE("property: lemma1 matches the periodic oracle")
    {
        Rng r(31);
        int valid = 0, invalid = 0;
        for (int t = 0; t < 300; ++t) {
            const testgen::PeriodicPair p = testgen::random_lemma1_instance(r);
            const Lemma1Result res = lemma1_pseudointersection(p.inst);
            const bool ok = oracle::valid_instance(p.twin);
            INFO("t=", t, " ", to_string(p.inst.index_set), " ", to_string(p.inst.carrier));
            REQUIRE(res.status != Status::Unknown);
            REQUIRE((res.status == Status::Proved) == ok);
            if (!ok) {
                ++invalid;
                continue;
            }
            ++valid;
            CHECK(res.depth() <= p.width);
            const auto pattern = fold(res.certificate->a, p.twin.n, 4096, 32);
            CHECK(oracle::is_pseudointersection(p.twin, pattern));
            CHECK(verify_pseudointersection(*res.certificate, p.inst.generators, 4096).is_proved());
        }
        CHECK(valid > 50);
        CHECK(invalid > 20);
    }

    TEST_CASE("property: laf segments on random harmonic chains")
    {
        Rng r(32);
        for (int t = 0; t < 20; ++t) {
            const auto chain = testgen::random_harmonic_chain(r, r.between(1, 4));
            const LafResult res = laf_pseudointersection(WeightRule::Harmonic, chain, 50000000);
            REQUIRE(res.status == Status::Proved);
            for (std::size_t k = 0; k < res.segments.size(); ++k) {
                CHECK(res.segments[k].weight > k);
                if (k > 0)
                    CHECK(res.segments[k].weight > res.segments[k - 1].weight);
                CHECK(res.in_filter[k] == Status::Proved);
            }
        }
    }

    TEST_CASE("property: fubini refutations are disjoint and certified")
    {
        Rng r(33);
        for (int t = 0; t < 100; ++t) {
            const SetDescription d = testgen::random_fubini_candidate(r);
            const FubiniRefutation res = fubini_refute(d);
            INFO(to_string(d));
            REQUIRE(res.status == Status::Proved);
            CHECK(verify_filter_verdict(FilterPresentation::fubini(), *res.blocking, *res.blocking_member));
            for (std::uint64_t n = 0; n < 60; ++n)
                for (std::uint64_t m = 0; m < 200; ++m)
                    REQUIRE_FALSE((member_pair(d, n, m) && member_pair(*res.blocking, n, m)));
        }
    }
}
