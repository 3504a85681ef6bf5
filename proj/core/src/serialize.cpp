#include "filterlab/serialize.hpp"

#include "filterlab/error.hpp"
#include "filterlab/expr.hpp"

namespace filterlab {

namespace {

json point(std::uint64_t x)
{
    return x == kInfinity ? json("inf") : json(x);
}

std::uint64_t decode_point(const json& j)
{
    if (j.is_string()) {
        if (j.get<std::string>() != "inf")
            throw ParseError("expected a natural or \"inf\"", 0);
        return kInfinity;
    }
    return j.get<std::uint64_t>();
}

Status decode_status(const json& j)
{
    const std::string s = j.get<std::string>();
    if (s == "Proved")
        return Status::Proved;
    if (s == "Refuted")
        return Status::Refuted;
    if (s == "Unknown")
        return Status::Unknown;
    throw ParseError("unknown status '" + s + "'", 0);
}

template <class V, class F>
json verdict(const V& v, F&& cert)
{
    json j;
    j["status"] = encode(v.status);
    if (!v.reason.empty())
        j["reason"] = v.reason;
    if (v.horizon)
        j["horizon"] = *v.horizon;
    if (v.certificate)
        j["certificate"] = cert(*v.certificate);
    return j;
}

} // namespace

json encode(Status s)
{
    return std::string(to_string(s));
}

json encode(const Dyadic& d)
{
    const Dyadic r = reduced(d);
    return json{{"numerator", d.numerator},
                {"exponent", d.exponent},
                {"fraction", to_fraction_string(r)},
                {"decimal", to_decimal(d, 20)}};
}

json encode(const Scheme& s)
{
    return json{{"partition", to_string(s.partition)},
                {"period", s.period},
                {"residue", s.residue},
                {"from_block", s.from_block},
                {"offset", s.offset},
                {"first_points", json::array({s.point(0), s.point(1), s.point(2)})}};
}

json encode(const TailCertificate& c)
{
    json j = json::object();
    if (c.bound)
        j["bound"] = *c.bound;
    if (c.scheme)
        j["scheme"] = encode(*c.scheme);
    return j;
}

json encode(const TailVerdict& v)
{
    return verdict(v, [](const TailCertificate& c) { return encode(c); });
}

json encode(const Certificate& c)
{
    json j;
    j["method"] = c.method;
    if (c.subject)
        j["subject"] = to_string(*c.subject);
    if (c.tail) {
        j["tail"] = encode(*c.tail);
        j["tail_kind"] = c.tail_cofinite ? "cofinite" : "finite";
    }
    if (c.witness)
        j["witness"] = to_string(*c.witness);
    if (!c.values.empty())
        j["values"] = c.values;
    if (!c.parts.empty()) {
        j["parts"] = json::array();
        for (const auto& p : c.parts)
            j["parts"].push_back(encode(p));
    }
    return j;
}

json encode(const FilterVerdict& v)
{
    return verdict(v, [](const Certificate& c) { return encode(c); });
}

json encode(const MeagernessVerdict& v)
{
    return verdict(v, [](const MeagernessWitness& w) {
        json j{{"partition", to_string(w.partition)},
               {"start_index", w.start_index},
               {"horizon", w.horizon},
               {"tail_reason", w.tail_reason}};
        j["hit_from"] = w.hit_from;
        json blocks = json::array();
        for (std::uint64_t m = 0; m < 16 && m <= w.partition.max_block(); ++m)
            blocks.push_back(json::array({w.partition.start(m), w.partition.end(m)}));
        j["first_blocks"] = blocks;
        return j;
    });
}

json encode(const PseudointersectionCertificate& c)
{
    return json{{"set", to_string(c.a)}, {"exceptions", c.exceptions}, {"infinite", encode(c.infinite)}};
}

json encode(const Lemma1Result& r)
{
    json j;
    j["status"] = encode(r.status);
    j["reason"] = r.reason;
    j["depth"] = r.depth();
    json trace = json::array();
    for (const auto& s : r.trace) {
        json t{{"bound", s.bound}, {"index_set", to_string(s.index_set)}, {"carrier", to_string(s.carrier)}};
        if (s.chosen)
            t["chosen_generator"] = *s.chosen;
        trace.push_back(t);
    }
    j["trace"] = trace;
    if (r.certificate)
        j["certificate"] = encode(*r.certificate);
    if (!r.violating.empty())
        j["violating_generators"] = r.violating;
    if (!r.missed_blocks.empty())
        j["missed_blocks"] = r.missed_blocks;
    return j;
}

json encode(const LafResult& r)
{
    json j;
    j["status"] = encode(r.status);
    j["reason"] = r.reason;
    json segs = json::array();
    for (const auto& s : r.segments)
        segs.push_back(json{{"k", s.k}, {"n_k", s.lo}, {"n_k_plus_1", s.hi}, {"weight", static_cast<double>(s.weight)}});
    j["segments"] = segs;
    json in = json::array();
    for (const Status s : r.in_filter)
        in.push_back(encode(s));
    j["links_in_filter"] = in;
    if (r.certificate)
        j["certificate"] = encode(*r.certificate);
    return j;
}

json encode(const FubiniRefutation& r)
{
    json j;
    j["status"] = encode(r.status);
    j["reason"] = r.reason;
    j["row_bound"] = r.row_bound;
    if (r.blocking)
        j["blocking_set"] = to_string(*r.blocking);
    if (r.blocking_member)
        j["blocking_membership"] = encode(*r.blocking_member);
    if (r.violated_k)
        j["violated_k"] = *r.violated_k;
    return j;
}

json encode(const Verdict<PseudoCheck>& v)
{
    return verdict(v, [](const PseudoCheck& c) {
        json j{{"detail", c.detail}};
        if (c.generator)
            j["generator"] = *c.generator;
        if (c.point)
            j["point"] = *c.point;
        return j;
    });
}

json encode(const BlockFamilyMeasure& m)
{
    json j{{"from", m.from},
           {"factors", m.factors},
           {"upper", encode(m.enclosure.upper)},
           {"lower", encode(m.enclosure.lower)},
           {"tail_argument", m.tail_argument}};
    if (m.tail_sum_bound)
        j["tail_sum_bound"] = encode(*m.tail_sum_bound);
    return j;
}

json encode(const NullVerdict& v)
{
    return verdict(v, [](const NullCertificate& c) {
        return json{{"argument", c.argument},
                    {"factors", c.factors},
                    {"partial_product", encode(c.partial)},
                    {"lower_bound", encode(c.lower)}};
    });
}

json encode(const MonteCarloEstimate& e)
{
    return json{{"estimate", e.estimate},
                {"std_error", e.std_error},
                {"hits", e.hits},
                {"samples", e.samples},
                {"seed", e.seed}};
}

json encode(const Theorem1Report& r, std::size_t max_prefix)
{
    json j;
    j["status"] = encode(r.status);
    j["reason"] = r.reason;
    j["partition"] = to_string(r.partition);
    j["blocks"] = r.blocks;
    j["length"] = r.sequence.prefix.size();
    const auto& p = r.sequence.prefix;
    j["prefix"] = std::vector<std::uint64_t>(p.begin(), p.begin() + std::min(max_prefix, p.size()));
    j["hit_from"] = r.hit_from;
    if (r.stuck_block)
        j["stuck_block"] = *r.stuck_block;
    return j;
}

json encode(const ConvergenceVerdict& v)
{
    return verdict(v, [](const ConvergenceCheck& c) {
        json arr = json::array();
        for (const auto& n : c.neighborhoods) {
            json e{{"index", n.index}, {"verdict", encode(n.verdict)}};
            if (n.indices)
                e["index_set"] = to_string(*n.indices);
            arr.push_back(e);
        }
        return json{{"neighborhoods", arr}};
    });
}

json encode(const SubsequenceReport& r)
{
    json j;
    j["status"] = encode(r.status);
    j["reason"] = r.reason;
    if (r.indices)
        j["indices"] = to_string(*r.indices);
    j["prefix"] = r.prefix;
    j["lemma1"] = encode(r.lemma);
    json a = json::array();
    for (const auto& t : r.almost_inside)
        a.push_back(encode(t));
    j["almost_inside"] = a;
    return j;
}

json encode(const DiagonalRefutation& r)
{
    json j;
    j["status"] = encode(r.status);
    j["reason"] = r.reason;
    if (r.f)
        j["set"] = to_string(*r.f);
    if (r.density)
        j["density"] = encode(*r.density);
    json ex = json::array();
    for (const auto& e : r.excluded)
        ex.push_back(json{{"candidate", e.candidate}, {"block", e.block}, {"point", e.point}});
    j["excluded"] = ex;
    return j;
}

json encode(const BasicOpenSet& u)
{
    json arr = json::array();
    for (const auto& [x, b] : u.constraints)
        arr.push_back(json::array({point(x), b ? 1 : 0}));
    return arr;
}

json encode(const ContinuousWitness& f)
{
    json ex = json::array();
    for (const auto& [x, b] : f.exceptions)
        ex.push_back(json::array({point(x), b ? 1 : 0}));
    return json{{"exceptions", ex}, {"value_at_infinity", f.v ? 1 : 0}, {"tail", to_string(f.tail)}};
}

json encode(const CnVerdict& v)
{
    return verdict(v, [](const CnCertificate& c) {
        json j{{"argument", c.argument}};
        if (c.failing_block)
            j["failing_block"] = *c.failing_block;
        if (c.hit_from)
            j["hit_from"] = *c.hit_from;
        return j;
    });
}

json encode(const GameTranscript& t)
{
    json j;
    j["schema"] = kTranscriptSchema;
    j["filter"] = t.filter;
    j["sequence"] = t.sequence;
    j["partition"] = t.partition;
    if (t.seed)
        j["seed"] = *t.seed;
    json rounds = json::array();
    for (const auto& r : t.rounds)
        rounds.push_back(json{{"adversary", encode(r.adversary)},
                              {"engine", encode(r.engine)},
                              {"avoided", r.avoided},
                              {"block", r.block},
                              {"witness", encode(r.witness)},
                              {"cn", encode(r.cn)}});
    j["rounds"] = rounds;
    json fin = json::array();
    for (const Status s : t.final_cn)
        fin.push_back(encode(s));
    j["final_cn"] = fin;
    return j;
}

BasicOpenSet decode_open_set(const json& j)
{
    BasicOpenSet u;
    for (const auto& c : j)
        u.constraints[decode_point(c.at(0))] = c.at(1).get<int>() != 0;
    return u;
}

ContinuousWitness decode_witness(const json& j)
{
    ContinuousWitness f;
    for (const auto& c : j.at("exceptions"))
        f.exceptions[decode_point(c.at(0))] = c.at(1).get<int>() != 0;
    f.v = j.at("value_at_infinity").get<int>() != 0;
    f.tail = parse_set(j.at("tail").get<std::string>());
    return f;
}

GameTranscript decode_transcript(const json& j)
{
    if (j.value("schema", std::string()) != kTranscriptSchema)
        throw ParseError("not a transcript (schema must be " + std::string(kTranscriptSchema) + ")", 0);
    GameTranscript t;
    t.filter = j.at("filter").get<std::string>();
    t.sequence = j.at("sequence").get<std::string>();
    t.partition = j.at("partition").get<std::string>();
    if (j.contains("seed"))
        t.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& r : j.at("rounds")) {
        GameRound g;
        g.adversary = decode_open_set(r.at("adversary"));
        g.engine = decode_open_set(r.at("engine"));
        g.avoided = r.at("avoided").get<std::uint64_t>();
        g.block = r.at("block").get<std::uint64_t>();
        g.witness = decode_witness(r.at("witness"));
        g.cn = decode_status(r.at("cn"));
        t.rounds.push_back(std::move(g));
    }
    for (const auto& s : j.at("final_cn"))
        t.final_cn.push_back(decode_status(s));
    return t;
}

std::string transcript_text(const GameTranscript& t)
{
    return encode(t).dump(2) + "\n";
}

} // namespace filterlab
