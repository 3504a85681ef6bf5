#include "filterlab/convergence.hpp"
#include "filterlab/cpgame.hpp"
#include "filterlab/expr.hpp"
#include "filterlab/measure.hpp"
#include "filterlab/pseudo.hpp"

#include <benchmark/benchmark.h>

using namespace filterlab;

static void BM_Member(benchmark::State& st)
{
    const SetDescription a = parse_set("and(evens,not(blocks(sizes=n+1,rule=first(1))))");
    std::uint64_t x = 0;
    for (auto _ : st) {
        benchmark::DoNotOptimize(member(a, x));
        x = (x + 7919) & 0xfffff;
    }
}
BENCHMARK(BM_Member);

static void BM_NextMember(benchmark::State& st)
{
    const SetDescription a = parse_set("or(interval(100000,inf),blocks(sizes=dyadic,rule=first(1)))");
    for (auto _ : st)
        benchmark::DoNotOptimize(next_member(a, 17, 1u << 20));
}
BENCHMARK(BM_NextMember);

static void BM_ExactMeasure(benchmark::State& st)
{
    const BlockPartition p = BlockPartition::linear(1);
    for (auto _ : st)
        benchmark::DoNotOptimize(block_family_measure(p, 0, st.range(0)));
}
BENCHMARK(BM_ExactMeasure)->Arg(8)->Arg(60)->Arg(400);

static void BM_NullCertificate(benchmark::State& st)
{
    const BlockPartition p = choose_null_meager_partition();
    for (auto _ : st)
        benchmark::DoNotOptimize(is_null_certificate(p));
}
BENCHMARK(BM_NullCertificate)->Unit(benchmark::kMillisecond);

static void BM_Lemma1(benchmark::State& st)
{
    BoundedBlockInstance inst{BlockPartition::constant(3), parse_set("evens"), SetDescription::omega(),
                              {parse_set("blocks(sizes=const:3,rule=first(2))"), parse_set("not(blocks(sizes=const:3,rule=first(1)))")}};
    for (auto _ : st)
        benchmark::DoNotOptimize(lemma1_pseudointersection(inst));
}
BENCHMARK(BM_Lemma1)->Unit(benchmark::kMicrosecond);

static void BM_Theorem1(benchmark::State& st)
{
    INetwork net;
    net.sets = {parse_set("evens"), parse_set("odds"), parse_set("blocks(sizes=const:3,rule=first(1))"), parse_set("interval(50,inf)")};
    const BlockPartition p = parse_partition("n+1");
    for (auto _ : st)
        benchmark::DoNotOptimize(theorem1_sequence(net, p, st.range(0)));
}
BENCHMARK(BM_Theorem1)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_DiagonalRefuter(benchmark::State& st)
{
    std::vector<SetDescription> cands;
    for (int i = 0; i < st.range(0); ++i)
        cands.push_back(i % 2 ? parse_set("odds") : parse_set("evens"));
    for (auto _ : st)
        benchmark::DoNotOptimize(density_diagonal_refuter(cands));
}
BENCHMARK(BM_DiagonalRefuter)->Arg(4)->Arg(20)->Unit(benchmark::kMicrosecond);

static void BM_Game(benchmark::State& st)
{
    const GameSetup g{FilterSpace{parse_filter("frechet")}, PointSequence::identity(), parse_partition("n+1")};
    for (auto _ : st) {
        SeededAdversary adv(7);
        benchmark::DoNotOptimize(play_game(adv, 10, g));
    }
}
BENCHMARK(BM_Game)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
