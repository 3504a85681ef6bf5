// Runs the twelve acceptance criteria and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria (0 when all pass).

#include "filterlab/convergence.hpp"
#include "filterlab/cpgame.hpp"
#include "filterlab/decide.hpp"
#include "filterlab/error.hpp"
#include "filterlab/expr.hpp"
#include "filterlab/measure.hpp"
#include "filterlab/oracle.hpp"
#include "filterlab/pseudo.hpp"
#include "filterlab/serialize.hpp"
#include "filterlab/weights.hpp"

#include "generators.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

using namespace filterlab;
using testgen::Rng;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Failure {
    std::string what;
};

void need(bool ok, const std::string& what)
{
    if (!ok)
        throw Failure{what};
}

struct CliResult {
    int exit = -1;
    std::string out;
};

CliResult cli(const std::string& args)
{
#ifdef FILTERLAB_CLI
    const std::string cmd = std::string("'") + FILTERLAB_CLI + "' " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    need(p != nullptr, "cannot start the CLI");
    CliResult r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0)
        r.out.append(buf, n);
    const int status = pclose(p);
    r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
#else
    (void)args;
    throw Failure{"built without the CLI"};
#endif
}

json cli_json(const std::string& args, int want_exit)
{
    const CliResult r = cli("--json " + args);
    need(r.exit == want_exit, "`filterlab " + args + "` exited " + std::to_string(r.exit));
    return json::parse(r.out);
}

std::string read_bytes(const std::filesystem::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

Dyadic from_fraction(const oracle::Fraction& f)
{
    return Dyadic{std::to_string(f.count), f.exponent};
}

// --- 1 ----------------------------------------------------------------------

std::string exact_measure_identity()
{
    const BlockPartition unit = BlockPartition::constant(1);
    double slowest = 0;
    for (std::uint64_t m = 1; m <= 20; ++m) {
        const auto t0 = Clock::now();
        const auto lib = block_family_measure(unit, 0, m);
        need(reduced(lib.enclosure.upper) == Dyadic::pow2_neg(m), "library product for m=" + std::to_string(m));
        const json j = cli_json("measure exact --sizes const:1 --factors " + std::to_string(m), 0);
        const double dt = seconds_since(t0);
        slowest = std::max(slowest, dt);
        const std::string want = "1/2^" + std::to_string(m);
        need(j["result"]["upper"]["fraction"] == want, "CLI upper for m=" + std::to_string(m));
        need(dt < 1.0, "m=" + std::to_string(m) + " took " + std::to_string(dt) + " s");
    }
    return "2^-m exactly for m=1..20, slowest " + std::to_string(slowest) + " s";
}

// --- 2 ----------------------------------------------------------------------

std::string null_certificate()
{
    const auto t0 = Clock::now();
    const BlockPartition p = choose_null_meager_partition();
    need(to_string(p) == "log2+2", "chosen partition is " + to_string(p));
    const NullVerdict v = is_null_certificate(p);
    need(v.is_proved(), "is_null_certificate is not Proved");
    const NullCertificate& c = v.cert();
    need(compare_fraction(c.partial, 1, 100) < 0, "partial product is not below 1/100");
    // Independent recomputation of the exhibited product and of minimality.
    need(compare(block_family_measure(p, 0, c.factors).enclosure.upper, c.partial) == 0,
         "partial product does not match its factor count");
    need(compare_fraction(block_family_measure(p, 0, c.factors - 1).enclosure.upper, 1, 100) >= 0,
         "factor count is not the least");
    need(!p.bounded(), "partition reports bounded sizes");
    std::uint64_t prev = 0;
    for (std::uint64_t e = 4; e <= 40; e += 4) {
        const std::uint64_t m = (std::uint64_t{1} << e) - 2;
        need(p.size(m) == e, "size of block 2^" + std::to_string(e) + "-2 is " + std::to_string(p.size(m)));
        need(p.size(m) > prev, "sizes do not grow");
        prev = p.size(m);
    }
    const json j = cli_json("measure null-cert", 0);
    need(j["result"]["status"] == "Proved", "CLI null-cert is not Proved");
    const double dt = seconds_since(t0);
    need(dt < 5.0, "took " + std::to_string(dt) + " s");
    return "log2+2: product " + to_decimal(c.partial, 6) + " < 0.01 after " + std::to_string(c.factors) +
           " factors; sizes unbounded; " + std::to_string(dt) + " s";
}

// --- 3 ----------------------------------------------------------------------

std::string positive_measure_enclosure()
{
    const BlockPartition p = BlockPartition::linear(1);
    const auto m = block_family_measure(p, 0, 60);
    need(m.tail_sum_bound.has_value(), "no certified tail bound");
    const Dyadic width = subtract(m.enclosure.upper, m.enclosure.lower);
    need(compare_fraction(width, 1, 1000000000) < 0, "width is not below 1e-9");
    std::vector<std::uint64_t> sizes;
    for (std::uint64_t f = 1; f <= 6; ++f) {
        sizes.push_back(f);
        const Dyadic exact = block_family_measure(p, 0, f).enclosure.upper;
        need(compare(exact, from_fraction(oracle::measure(sizes))) == 0,
             "prefix of " + std::to_string(f) + " blocks disagrees with the oracle");
    }
    return "width " + to_decimal(width, 12) + " after 60 factors, value " + to_decimal(m.enclosure.lower, 12) +
           "; oracle agrees on prefixes 1..6";
}

// --- 4 ----------------------------------------------------------------------

std::string monte_carlo_consistency()
{
    const std::vector<std::pair<const char*, std::uint64_t>> cases = {
        {"const:1", 3}, {"const:2", 4}, {"n+1", 6}, {"log2+2", 5}, {"dyadic", 5}};
    int within = 0, runs = 0;
    for (const auto& [expr, factors] : cases) {
        const BlockPartition p = parse_partition(expr);
        const long double exact = to_long_double(block_family_measure(p, 0, factors).enclosure.upper);
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            const auto e = monte_carlo_measure(p, 0, factors, 20000, seed * 7919);
            const long double dev = std::fabs(static_cast<long double>(e.estimate) - exact);
            ++runs;
            if (e.std_error > 0 ? dev <= 4.0L * e.std_error : dev == 0)
                ++within;
        }
    }
    need(runs == 20, "expected 20 runs");
    need(within >= 19, std::to_string(within) + " of 20 runs within 4 standard errors");
    return std::to_string(within) + " of 20 runs within 4 standard errors";
}

// --- 5 ----------------------------------------------------------------------

std::vector<bool> fold(const SetDescription& a, std::uint64_t n, std::uint64_t from, std::uint64_t periods)
{
    std::vector<bool> out(n, false);
    const std::uint64_t base = from - from % n;
    for (std::uint64_t x = base; x < base + periods * n; ++x)
        if (member(a, x))
            out[x % n] = true;
    return out;
}

std::string lemma1_oracle_equivalence()
{
    Rng r(5);
    int valid = 0, invalid = 0, enumerated = 0;
    for (int t = 0; t < 1000; ++t) {
        const testgen::PeriodicPair p = testgen::random_lemma1_instance(r);
        const Lemma1Result res = lemma1_pseudointersection(p.inst);
        const std::string at = "instance " + std::to_string(t);
        need(res.status != Status::Unknown, at + ": Unknown (" + res.reason + ")");
        const bool ok = oracle::valid_instance(p.twin);
        need((res.status == Status::Proved) == ok, at + ": verdict disagrees with the oracle");
        need(res.depth() <= p.width, at + ": depth exceeds sup |C_i|");
        if (!ok) {
            ++invalid;
            continue;
        }
        ++valid;
        const auto pattern = fold(res.certificate->a, p.twin.n, 4096, 32);
        need(oracle::is_pseudointersection(p.twin, pattern), at + ": oracle rejects the output");
        if (p.twin.n <= 16) {
            const auto all = oracle::pseudointersections(p.twin);
            need(std::find(all.begin(), all.end(), pattern) != all.end(), at + ": output not among enumerated");
            ++enumerated;
        }
        need(verify_pseudointersection(*res.certificate, p.inst.generators, 4096).is_proved(),
             at + ": verify_pseudointersection fails");
    }
    need(valid > 100 && invalid > 100, "generator produced too few of one kind");
    return "1000 instances (" + std::to_string(valid) + " valid, " + std::to_string(invalid) + " invalid, " +
           std::to_string(enumerated) + " also by full enumeration)";
}

// --- 6 ----------------------------------------------------------------------

std::string laf_construction()
{
    Rng r(6);
    std::uint64_t links = 0;
    for (int t = 0; t < 100; ++t) {
        const auto chain = testgen::random_harmonic_chain(r, r.between(1, 5));
        const LafResult res = laf_pseudointersection(WeightRule::Harmonic, chain, 50000000);
        const std::string at = "chain " + std::to_string(t);
        need(res.status == Status::Proved, at + ": " + res.reason);
        const auto& cert = *res.certificate;
        for (std::size_t k = 0; k < res.segments.size(); ++k) {
            const LafSegment& s = res.segments[k];
            // Independent weight of the segment, summed from the top down.
            long double w = 0;
            for (std::uint64_t x = s.hi; x-- > s.lo;)
                if (member(chain[k], x))
                    w += 1.0L / (static_cast<long double>(x) + 1.0L);
            need(w > static_cast<long double>(k), at + ": segment " + std::to_string(k) + " weight not above k");
            if (k > 0)
                need(s.weight > res.segments[k - 1].weight, at + ": weights not strictly increasing");
            const std::uint64_t nk = s.lo;
            std::vector<std::uint64_t> scan;
            for (std::uint64_t x = 0; x < nk + 4096; ++x)
                if (member(cert.a, x) && !member(chain[k], x))
                    scan.push_back(x);
            need(scan == cert.exceptions[k], at + ": exceptions differ from a direct scan at link " + std::to_string(k));
            for (const auto x : scan)
                need(x < nk, at + ": exception outside [0, n_k)");
            const TailVerdict fin = is_finite(cert.a & ~chain[k]);
            need(!fin.is_refuted(), at + ": A minus A_k is infinite");
            ++links;
        }
    }
    return "100 chains, " + std::to_string(links) + " links; segment weights exceed k and exceptions lie in [0, n_k)";
}

// --- 7 ----------------------------------------------------------------------

std::string theorem1_certificate()
{
    Rng r(7);
    const auto t0 = Clock::now();
    const BlockPartition p = parse_partition("n+1");
    std::uint64_t blocks = 0;
    for (int t = 0; t < 20; ++t) {
        INetwork net;
        const std::uint64_t n = t == 0 ? 20 : r.between(1, 20);
        for (std::uint64_t i = 0; i < n; ++i)
            net.sets.push_back(testgen::random_network_set(r));
        const Theorem1Report rep = theorem1_sequence(net, p, 10000);
        const std::string at = "network " + std::to_string(t);
        need(rep.status == Status::Proved, at + ": " + rep.reason);
        const auto& xs = rep.sequence.prefix;
        need(std::set<std::uint64_t>(xs.begin(), xs.end()).size() == xs.size(), at + ": not injective");
        need(rep.induced.has_value(), at + ": no induced filter");
        need(f_converges(rep.sequence, *rep.induced, FilterSpace{}, 20).is_proved(), at + ": f_converges not Proved");
        need(p.end(rep.blocks) > 10000 && p.end(rep.blocks - 1) <= 10000, at + ": blocks stop short of the horizon");
        // Every block meets every N_i with i below its size.
        for (std::uint64_t m = 0; m < rep.blocks; ++m)
            for (std::uint64_t i = 0; i < std::min<std::uint64_t>(p.size(m), n); ++i) {
                bool hit = false;
                for (std::uint64_t k = p.start(m); k < p.end(m) && !hit; ++k)
                    hit = member(net.sets[i], xs[k]);
                need(hit, at + ": block " + std::to_string(m) + " misses N_" + std::to_string(i));
            }
        blocks += rep.blocks;
    }
    const double dt = seconds_since(t0);
    need(dt < 10.0, "took " + std::to_string(dt) + " s");
    return "20 networks (up to 20 sets), " + std::to_string(blocks) + " blocks checked, " + std::to_string(dt) + " s";
}

// --- 8 ----------------------------------------------------------------------

std::string proposition_p1()
{
    // Each space is meager for its witness: every neighborhood meets all but finitely many blocks.
    const std::vector<std::pair<const char*, const char*>> spaces = {
        {"frechet", "const:2"}, {"generated(evens)", "const:2"}, {"generated(odds)", "const:2"},
        {"generated(blocks(sizes=const:3,rule=first(1)))", "const:3"}, {"restrict(frechet,interval(5,inf))", "const:4"}};
    const std::vector<PointSequence> seqs = {PointSequence::identity(), PointSequence{{9, 4}, -2, std::nullopt, {}},
                                             PointSequence{{0, 0, 0}, -3, std::nullopt, {}}};
    int checked = 0;
    for (const auto& [s, witness] : spaces)
        for (const auto& seq : seqs) {
            const FilterSpace space{parse_filter(s)};
            const SubsequenceReport rep = convergent_subsequence(seq, space, parse_partition(witness), 20);
            const std::string at = std::string(s) + " / " + to_string(seq);
            need(rep.status == Status::Proved, at + ": " + rep.reason);
            need(is_infinite(*rep.indices).is_proved(), at + ": D is not infinite");
            need(!rep.almost_inside.empty() && rep.almost_inside.size() <= 20, at + ": neighborhood count");
            for (std::uint64_t j = 0; j < rep.almost_inside.size(); ++j) {
                const auto& v = rep.almost_inside[j];
                need(v.is_proved(), at + ": not almost inside neighborhood " + std::to_string(j));
                const SetDescription o = *space.basic(j);
                // Independent: no member of D past the bound maps outside O_j.
                for (std::uint64_t k = *v.cert().bound; k < 5000; ++k)
                    if (member(*rep.indices, k))
                        need(member(o, seq.at(k)), at + ": x_" + std::to_string(k) + " leaves neighborhood " +
                                                       std::to_string(j));
                ++checked;
            }
        }
    int refused = 0;
    for (const char* u : {"n+1", "log2+2", "dyadic", "[2,2];n+3"}) {
        try {
            convergent_subsequence(PointSequence::identity(), FilterSpace{}, parse_partition(u), 20);
        } catch (const PreconditionError&) {
            ++refused;
        }
    }
    need(refused == 4, "an unbounded partition was accepted");
    need(cli("converge subseq --witness n+1").exit == 3, "CLI accepts an unbounded witness");
    return std::to_string(checked) + " neighborhood checks over 15 setups; 4 unbounded partitions refused";
}

// --- 9 ----------------------------------------------------------------------

std::string fubini_non_p_plus()
{
    const FilterPresentation fubini = FilterPresentation::fubini();
    auto accept = [&fubini](const SetDescription& d, const std::string& at) {
        const FubiniRefutation res = fubini_refute(d);
        need(res.status == Status::Proved, at + ": " + res.reason);
        need(res.blocking && res.blocking_member && res.blocking_member->is_proved(), at + ": no blocking member");
        need(verify_filter_verdict(fubini, *res.blocking, *res.blocking_member), at + ": membership does not verify");
        need(verify_fubini_refutation(d, res, 1 << 16), at + ": refutation does not verify");
        for (std::uint64_t row = 0; row < 64; ++row) {
            std::uint64_t last = 0;
            bool any = false;
            for (std::uint64_t col = 0; col < 4096; ++col) {
                const bool in_d = member_pair(d, row, col);
                need(!(in_d && member_pair(*res.blocking, row, col)), at + ": blocking set meets D");
                if (in_d) {
                    last = col;
                    any = true;
                }
            }
            need(!any || last < 2048, at + ": row " + std::to_string(row) + " looks infinite");
        }
    };
    accept(parse_set("rows:first(1)"), "{(n,0)}");
    Rng r(9);
    for (int t = 0; t < 10; ++t) {
        const SetDescription d = testgen::random_fubini_candidate(r);
        accept(d, to_string(d));
    }
    const FubiniRefutation diag = fubini_refute(parse_set("rows:diag"));
    need(diag.status == Status::Refuted && diag.violated_k == 1, "rows:diag not rejected at k=1");
    return "{(n,0)} and 10 random candidates blocked; {(n,m) : m >= n} rejected at k=1";
}

// --- 10 ---------------------------------------------------------------------

std::string nowhere_density_game()
{
    struct Setup {
        const char* space;
        const char* sizes;
    };
    const std::vector<Setup> setups = {{"frechet", "n+1"}, {"density(blocks=dyadic)", "dyadic"}, {"generated(evens)", "const:2"}};
    const auto dir = std::filesystem::temp_directory_path() / ("filterlab-acceptance-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    int games = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Setup& s = setups[seed % setups.size()];
        const auto file = dir / ("game" + std::to_string(seed) + ".json");
        const std::string at = "seed " + std::to_string(seed);
        cli_json("cpgame play --rounds 10 --seed " + std::to_string(seed) + " --space '" + s.space + "' --sizes " +
                     s.sizes + " --out '" + file.string() + "'",
                 0);
        const std::string bytes = read_bytes(file);
        const GameTranscript t = decode_transcript(json::parse(bytes));
        need(t.rounds.size() == 10, at + ": round count");
        const GameSetup g = setup_of(t);
        BasicOpenSet previous;
        for (std::uint64_t r = 0; r < 10; ++r) {
            const GameRound& round = t.rounds[r];
            need(round.adversary.refines(previous), at + ": adversary does not refine at round " + std::to_string(r));
            need(round.engine.refines(round.adversary), at + ": engine does not refine at round " + std::to_string(r));
            need(round.witness.lies_in(round.engine), at + ": witness outside the engine move");
            need(cn_member(round.witness, r, g).is_refuted(), at + ": witness in C_" + std::to_string(r));
            previous = round.engine;
        }
        const json v = cli_json("cpgame verify '" + file.string() + "'", 0);
        need(v["result"]["byte_identical"] == true && v["result"]["replay_matches"] == true, at + ": verify");
        need(transcript_text(t) == bytes, at + ": library text differs from the file");
        ++games;
    }
    std::filesystem::remove_all(dir);
    return std::to_string(games) + " games of 10 rounds over 3 setups replay byte-identically";
}

// --- 11 ---------------------------------------------------------------------

std::string decomposition_totality()
{
    Rng r(11);
    const auto cases = testgen::setup_cases();
    std::uint64_t max_index = 0;
    for (int t = 0; t < 100; ++t) {
        const auto& c = cases[t % cases.size()];
        const ContinuousWitness f = testgen::random_witness(r, c.tail);
        const std::string at = "witness " + std::to_string(t);
        need(witness_continuity(f, c.setup).is_proved(), at + ": not continuous");
        const auto idx = decomposition_index(f, c.setup);
        need(idx.is_proved(), at + ": no decomposition index");
        need(cn_member(f, idx.cert(), c.setup).is_proved(), at + ": not in C_n at its index");
        max_index = std::max(max_index, idx.cert());
    }
    return "100 witnesses over 3 setups lie in C_n at their index (largest n = " + std::to_string(max_index) + ")";
}

// --- 12 ---------------------------------------------------------------------

std::string diagonal_refuter()
{
    Rng r(12);
    const BlockPartition dy = BlockPartition::dyadic();
    const FilterPresentation density = FilterPresentation::block_density(dy);
    std::uint64_t exclusions = 0;
    for (int t = 0; t < 50; ++t) {
        std::vector<SetDescription> family;
        const std::uint64_t n = r.between(0, 20);
        for (std::uint64_t i = 0; i < n; ++i)
            family.push_back(testgen::random_infinite_set(r));
        const DiagonalRefutation res = density_diagonal_refuter(family);
        const std::string at = "family " + std::to_string(t);
        need(res.status == Status::Proved, at + ": " + res.reason);
        need(res.density && res.density->is_proved(), at + ": no density certificate");
        need(verify_filter_verdict(density, *res.f, *res.density), at + ": density certificate does not verify");
        for (std::uint64_t m = 0; m <= 18; ++m)
            need(block_count(*res.f, dy, m) + 1 >= dy.size(m), at + ": block " + std::to_string(m) + " loses two points");
        for (std::size_t i = 0; i < family.size(); ++i) {
            bool found = false;
            for (const auto& e : res.excluded) {
                if (e.candidate != i)
                    continue;
                found = e.block >= i && dy.start(e.block) <= e.point && e.point < dy.end(e.block) &&
                        member(family[i], e.point) && !member(*res.f, e.point);
            }
            need(found, at + ": no valid exclusion for candidate " + std::to_string(i));
            ++exclusions;
        }
    }
    return "50 families, " + std::to_string(exclusions) + " explicit exclusions, at most one removal per block";
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<std::string()>>> criteria = {
        {"exact measure identity", exact_measure_identity},
        {"null certificate", null_certificate},
        {"positive-measure enclosure", positive_measure_enclosure},
        {"Monte-Carlo consistency", monte_carlo_consistency},
        {"bounded-block oracle equivalence", lemma1_oracle_equivalence},
        {"laf construction", laf_construction},
        {"meager-convergent sequence certificate", theorem1_certificate},
        {"convergent subsequence", proposition_p1},
        {"Fr x Fr is not P+", fubini_non_p_plus},
        {"nowhere-density game", nowhere_density_game},
        {"decomposition totality", decomposition_totality},
        {"diagonal refuter", diagonal_refuter},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& [name, run] = criteria[i];
        std::string detail;
        bool ok = false;
        try {
            detail = run();
            ok = true;
        } catch (const Failure& f) {
            detail = f.what;
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        failed += ok ? 0 : 1;
        std::printf("%s %2zu %s: %s\n", ok ? "PASS" : "FAIL", i + 1, name, detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
