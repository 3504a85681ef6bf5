#include "filterlab/expr.hpp"

#include "filterlab/error.hpp"

#include <cctype>
#include <limits>

namespace filterlab {

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    void finish()
    {
        skip();
        if (pos_ != s_.size())
            fail("unexpected trailing input");
    }

    BlockPartition partition()
    {
        skip();
        std::vector<std::uint64_t> prefix;
        if (peek() == '[') {
            prefix = number_list();
            expect(';');
        }
        skip();
        const std::size_t at = pos_;
        if (accept_word("dyadic")) {
            if (!prefix.empty())
                fail("dyadic takes no prefix", at);
            return BlockPartition::dyadic();
        }
        TailRule t;
        if (accept_word("const")) {
            expect(':');
            t.kind = TailRule::Kind::Constant;
            t.c = static_cast<std::int64_t>(unsigned_number());
        } else if (std::isdigit(static_cast<unsigned char>(peek()))) {
            t.kind = TailRule::Kind::Constant;
            t.c = static_cast<std::int64_t>(unsigned_number());
        } else if (accept_word("log2")) {
            t.kind = TailRule::Kind::CeilLog2;
            t.c = optional_offset();
        } else if (accept_prefix("pow")) {
            t.kind = TailRule::Kind::Power;
            t.base = unsigned_number();
            t.c = optional_offset();
        } else if (accept_word("n") || accept_word("k")) {
            t.kind = TailRule::Kind::Linear;
            t.c = optional_offset();
        } else {
            fail("expected a size rule (const:C, n+C, log2+C, powB+C, dyadic)");
        }
        try {
            return BlockPartition(std::move(prefix), t);
        } catch (const Error& e) {
            fail(e.what(), at);
        }
    }

    SetDescription set()
    {
        skip();
        const std::size_t at = pos_;
        const std::string name = word();
        if (name == "empty")
            return SetDescription::empty();
        if (name == "omega")
            return SetDescription::omega();
        if (name == "evens")
            return SetDescription::evens();
        if (name == "odds")
            return SetDescription::odds();
        if (name == "finite") {
            expect('(');
            auto v = number_list();
            expect(')');
            return wrap(at, [&] { return SetDescription::finite(v); });
        }
        if (name == "cofinite") {
            expect('(');
            accept_key("drop");
            auto v = number_list();
            expect(')');
            return wrap(at, [&] { return SetDescription::cofinite(v); });
        }
        if (name == "interval") {
            expect('(');
            const std::uint64_t lo = unsigned_number();
            expect(',');
            std::optional<std::uint64_t> hi;
            skip();
            if (!accept_word("inf"))
                hi = unsigned_number();
            expect(')');
            return wrap(at, [&] { return SetDescription::interval(lo, hi); });
        }
        if (name == "trunc") {
            expect('(');
            accept_key("bits");
            skip();
            std::vector<bool> bits;
            while (peek() == '0' || peek() == '1')
                bits.push_back(s_[pos_++] == '1');
            expect(',');
            accept_key("tail");
            skip();
            bool full = false;
            if (accept_word("full"))
                full = true;
            else if (!accept_word("empty"))
                fail("expected tail=full or tail=empty");
            expect(')');
            return SetDescription::truncated(std::move(bits), full);
        }
        if (name == "blocks") {
            expect('(');
            accept_key("sizes");
            BlockPartition p = partition();
            expect(',');
            accept_key("rule");
            Selector sel = selector();
            std::uint64_t period = 1;
            std::vector<std::uint64_t> residues;
            skip();
            if (peek() == ',') {
                ++pos_;
                accept_key("every");
                period = unsigned_number();
                expect(':');
                residues = number_list();
            }
            expect(')');
            return wrap(at, [&] { return SetDescription::block_rule(p, sel, period, residues); });
        }
        if (name == "rows") {
            skip();
            if (peek() == ':') {
                ++pos_;
                const std::size_t sat = pos_;
                const std::string sugar = word();
                if (sugar == "all")
                    return SetDescription::paired_rows(0, Affine{0, 0}, std::nullopt);
                if (sugar == "diag")
                    return SetDescription::paired_rows(0, Affine{1, 0}, std::nullopt);
                if (sugar == "first") {
                    expect('(');
                    const std::uint64_t t = unsigned_number();
                    expect(')');
                    return SetDescription::paired_rows(0, Affine{0, 0}, Affine{0, static_cast<std::int64_t>(t)});
                }
                fail("unknown rows shorthand '" + sugar + "'", sat);
            }
            expect('(');
            accept_key("from");
            const std::uint64_t from = unsigned_number();
            expect(',');
            accept_key("lo");
            const Affine lo = affine();
            expect(',');
            accept_key("hi");
            skip();
            std::optional<Affine> hi;
            if (!accept_word("inf"))
                hi = affine();
            expect(')');
            return SetDescription::paired_rows(from, lo, hi);
        }
        if (name == "lift") {
            expect('(');
            BlockPartition p = partition();
            expect(',');
            SetDescription inner = set();
            expect(')');
            return wrap(at, [&] { return SetDescription::lift(p, inner); });
        }
        if (name == "and" || name == "or") {
            auto args = set_list();
            return wrap(at, [&] {
                return name == "and" ? SetDescription::all_of(args) : SetDescription::any_of(args);
            });
        }
        if (name == "not") {
            expect('(');
            SetDescription inner = set();
            expect(')');
            return SetDescription::complement(inner);
        }
        fail(name.empty() ? "expected a set expression" : "unknown set '" + name + "'", at);
    }

    FilterPresentation filter()
    {
        skip();
        const std::size_t at = pos_;
        const std::string name = word();
        if (name == "frechet")
            return FilterPresentation::frechet();
        if (name == "fubini")
            return FilterPresentation::fubini();
        if (name == "generated") {
            auto args = set_list();
            return wrap(at, [&] { return FilterPresentation::generated(args); });
        }
        if (name == "density") {
            expect('(');
            if (!accept_key("sizes"))
                accept_key("blocks");
            BlockPartition p = partition();
            expect(')');
            return FilterPresentation::block_density(p);
        }
        if (name == "summable") {
            expect('(');
            accept_key("w");
            skip();
            const std::size_t wat = pos_;
            const std::string w = word();
            expect(')');
            if (w == "harmonic")
                return FilterPresentation::summable(WeightRule::Harmonic);
            if (w == "geom")
                return FilterPresentation::summable(WeightRule::Geometric);
            if (w == "counting")
                return FilterPresentation::summable(WeightRule::Counting);
            fail("unknown weight rule '" + w + "'", wat);
        }
        if (name == "push") {
            expect('(');
            FilterPresentation inner = filter();
            expect(',');
            BlockPartition p = partition();
            expect(')');
            return FilterPresentation::pushforward(inner, p);
        }
        if (name == "restrict") {
            expect('(');
            FilterPresentation inner = filter();
            expect(',');
            SetDescription a = set();
            expect(')');
            return wrap(at, [&] { return FilterPresentation::restriction(inner, a); });
        }
        if (name == "induced") {
            expect('(');
            PointSequence seq = sequence();
            expect(',');
            FilterPresentation inner = filter();
            expect(')');
            return FilterPresentation::induced(seq, inner);
        }
        fail(name.empty() ? "expected a filter expression" : "unknown filter '" + name + "'", at);
    }

    PointSequence sequence()
    {
        skip();
        const std::size_t at = pos_;
        const std::string name = word();
        if (name == "identity")
            return PointSequence::identity();
        if (name == "shift") {
            expect(':');
            return PointSequence::shifted(signed_number());
        }
        if (name == "const") {
            expect(':');
            return PointSequence::constant_at(unsigned_number());
        }
        if (name == "table") {
            expect('(');
            PointSequence s;
            s.prefix = number_list();
            skip();
            if (peek() == ',') {
                ++pos_;
                accept_key("shift");
                s.shift = signed_number();
            }
            expect(')');
            return s;
        }
        fail("expected a sequence (identity, shift:K, const:C, table([..]))", at);
    }

private:
    [[noreturn]] void fail(const std::string& msg) { fail(msg, pos_); }
    [[noreturn]] void fail(const std::string& msg, std::size_t at) { throw ParseError(msg, at); }

    template <class F>
    auto wrap(std::size_t at, F&& f) -> decltype(f())
    {
        try {
            return f();
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            fail(e.what(), at);
        }
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    char peek()
    {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    void expect(char c)
    {
        if (peek() != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string word()
    {
        skip();
        const std::size_t b = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        return std::string(s_.substr(b, pos_ - b));
    }

    bool accept_word(std::string_view w)
    {
        skip();
        if (s_.substr(pos_, w.size()) != w)
            return false;
        const std::size_t e = pos_ + w.size();
        if (e < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[e])) || s_[e] == '_'))
            return false;
        pos_ = e;
        return true;
    }

    bool accept_prefix(std::string_view w)
    {
        skip();
        if (s_.substr(pos_, w.size()) != w)
            return false;
        pos_ += w.size();
        return true;
    }

    // Consumes `key=` when present.
    bool accept_key(std::string_view key)
    {
        skip();
        const std::size_t save = pos_;
        if (accept_word(key) && peek() == '=') {
            ++pos_;
            return true;
        }
        pos_ = save;
        return false;
    }

    std::uint64_t unsigned_number()
    {
        skip();
        const std::size_t b = pos_;
        std::uint64_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            const std::uint64_t d = static_cast<std::uint64_t>(s_[pos_] - '0');
            if (v > (std::numeric_limits<std::uint64_t>::max() - d) / 10)
                fail("number too large", b);
            v = v * 10 + d;
            ++pos_;
        }
        if (pos_ == b)
            fail("expected a number");
        return v;
    }

    std::int64_t signed_number()
    {
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        } else if (peek() == '+') {
            ++pos_;
        }
        const std::size_t at = pos_;
        const std::uint64_t v = unsigned_number();
        if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
            fail("number too large", at);
        return neg ? -static_cast<std::int64_t>(v) : static_cast<std::int64_t>(v);
    }

    std::int64_t optional_offset()
    {
        const char c = peek();
        if (c != '+' && c != '-')
            return 0;
        return signed_number();
    }

    std::vector<std::uint64_t> number_list()
    {
        expect('[');
        std::vector<std::uint64_t> v;
        if (peek() == ']') {
            ++pos_;
            return v;
        }
        for (;;) {
            v.push_back(unsigned_number());
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            expect(']');
            return v;
        }
    }

    std::vector<SetDescription> set_list()
    {
        expect('(');
        std::vector<SetDescription> v;
        for (;;) {
            v.push_back(set());
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            expect(')');
            return v;
        }
    }

    Selector selector()
    {
        skip();
        const std::size_t at = pos_;
        const std::string name = word();
        if (name == "all")
            return Selector::all();
        if (name == "none")
            return Selector::none();
        if (name == "first" || name == "allbutfirst") {
            expect('(');
            const std::uint64_t t = unsigned_number();
            expect(')');
            return name == "first" ? Selector::first(t) : Selector::all_but_first(t);
        }
        if (name == "removed") {
            expect('(');
            auto v = number_list();
            expect(')');
            return Selector::removed_points(v);
        }
        fail("unknown block rule '" + name + "'", at);
    }

    // Sum of terms N, n, N*n with + and - between them.
    Affine affine()
    {
        Affine a;
        bool first = true;
        for (;;) {
            int sign = 1;
            const char c = peek();
            if (c == '+' || c == '-') {
                sign = c == '-' ? -1 : 1;
                ++pos_;
            } else if (!first) {
                break;
            }
            first = false;
            skip();
            if (accept_word("n")) {
                a.slope += sign;
                continue;
            }
            const std::int64_t v = static_cast<std::int64_t>(unsigned_number());
            if (peek() == '*') {
                ++pos_;
                if (!accept_word("n"))
                    fail("expected 'n' after '*'");
                a.slope += sign * v;
            } else {
                a.offset += sign * v;
            }
        }
        return a;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

std::string join(const std::vector<std::uint64_t>& v)
{
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(v[i]);
    }
    return out + "]";
}

std::string signed_suffix(std::int64_t c)
{
    if (c == 0)
        return "";
    return (c > 0 ? "+" : "-") + std::to_string(c > 0 ? static_cast<std::uint64_t>(c) : -static_cast<std::uint64_t>(c));
}

} // namespace

BlockPartition parse_partition(std::string_view text)
{
    Parser p(text);
    auto v = p.partition();
    p.finish();
    return v;
}

SetDescription parse_set(std::string_view text)
{
    Parser p(text);
    auto v = p.set();
    p.finish();
    return v;
}

FilterPresentation parse_filter(std::string_view text)
{
    Parser p(text);
    auto v = p.filter();
    p.finish();
    return v;
}

PointSequence parse_sequence(std::string_view text)
{
    Parser p(text);
    auto v = p.sequence();
    p.finish();
    return v;
}

std::string to_string(const TailRule& t)
{
    switch (t.kind) {
    case TailRule::Kind::Constant: return "const:" + std::to_string(t.c);
    case TailRule::Kind::Linear: return "n" + signed_suffix(t.c);
    case TailRule::Kind::CeilLog2: return "log2" + signed_suffix(t.c);
    case TailRule::Kind::Power: return "pow" + std::to_string(t.base) + signed_suffix(t.c);
    }
    return "?";
}

std::string to_string(const BlockPartition& p)
{
    if (p == BlockPartition::dyadic())
        return "dyadic";
    std::string out;
    if (!p.prefix().empty())
        out = join(p.prefix()) + ";";
    return out + to_string(p.tail());
}

std::string to_string(const Selector& s)
{
    switch (s.kind) {
    case Selector::Kind::All: return "all";
    case Selector::Kind::None: return "none";
    case Selector::Kind::First: return "first(" + std::to_string(s.t) + ")";
    case Selector::Kind::AllButFirst: return "allbutfirst(" + std::to_string(s.t) + ")";
    case Selector::Kind::Removed: return "removed(" + join(s.removed) + ")";
    }
    return "?";
}

std::string to_string(const Affine& a)
{
    if (a.slope == 0)
        return std::to_string(a.offset);
    std::string out;
    if (a.slope == 1)
        out = "n";
    else if (a.slope == -1)
        out = "-n";
    else
        out = std::to_string(a.slope) + "*n";
    return out + signed_suffix(a.offset);
}

std::string to_string(const SetDescription& a)
{
    switch (a.kind()) {
    case SetDescription::Kind::Finite: {
        const auto& e = data_as<FiniteData>(a).elems;
        return e.empty() ? "empty" : "finite(" + join(e) + ")";
    }
    case SetDescription::Kind::Cofinite: {
        const auto& e = data_as<CofiniteData>(a).drop;
        return e.empty() ? "omega" : "cofinite(drop=" + join(e) + ")";
    }
    case SetDescription::Kind::Interval: {
        const auto& d = data_as<IntervalData>(a);
        return "interval(" + std::to_string(d.lo) + "," + (d.hi ? std::to_string(*d.hi) : "inf") + ")";
    }
    case SetDescription::Kind::Truncated: {
        const auto& d = data_as<TruncatedData>(a);
        std::string bits;
        for (bool b : d.bits)
            bits += b ? '1' : '0';
        return "trunc(bits=" + bits + ",tail=" + (d.tail_full ? "full" : "empty") + ")";
    }
    case SetDescription::Kind::BlockRule: {
        if (a == SetDescription::evens())
            return "evens";
        if (a == SetDescription::odds())
            return "odds";
        const auto& d = data_as<BlockRuleData>(a);
        std::string out = "blocks(sizes=" + to_string(d.partition) + ",rule=" + to_string(d.selector);
        if (d.period > 1)
            out += ",every=" + std::to_string(d.period) + ":" + join(d.residues);
        return out + ")";
    }
    case SetDescription::Kind::PairedRows: {
        const auto& d = data_as<PairedRowsData>(a);
        return "rows(from=" + std::to_string(d.from_row) + ",lo=" + to_string(d.lo) +
               ",hi=" + (d.hi ? to_string(*d.hi) : "inf") + ")";
    }
    case SetDescription::Kind::Lift: {
        const auto& d = data_as<LiftData>(a);
        return "lift(" + to_string(d.partition) + "," + to_string(d.index_set) + ")";
    }
    case SetDescription::Kind::And:
    case SetDescription::Kind::Or:
    case SetDescription::Kind::Not: {
        std::string out = a.kind() == SetDescription::Kind::And ? "and(" : a.kind() == SetDescription::Kind::Or ? "or(" : "not(";
        const auto& args = data_as<BoolData>(a).args;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i)
                out += ',';
            out += to_string(args[i]);
        }
        return out + ")";
    }
    }
    return "?";
}

std::string to_string(WeightRule w)
{
    switch (w) {
    case WeightRule::Harmonic: return "harmonic";
    case WeightRule::Geometric: return "geom";
    case WeightRule::Counting: return "counting";
    }
    return "?";
}

std::string to_string(const PointSequence& s)
{
    if (s.constant)
        return "const:" + std::to_string(*s.constant);
    if (s.prefix.empty())
        return s.shift == 0 ? "identity" : "shift:" + std::to_string(s.shift);
    std::string out = "table(" + join(s.prefix);
    if (s.shift != 0)
        out += ",shift=" + std::to_string(s.shift);
    return out + ")";
}

std::string to_string(const FilterPresentation& f)
{
    const FilterNode& n = f.node();
    switch (f.kind()) {
    case FilterPresentation::Kind::Frechet: return "frechet";
    case FilterPresentation::Kind::FubiniFrFr: return "fubini";
    case FilterPresentation::Kind::Generated: {
        std::string out = "generated(";
        for (std::size_t i = 0; i < n.base.size(); ++i) {
            if (i)
                out += ',';
            out += to_string(n.base[i]);
        }
        return out + ")";
    }
    case FilterPresentation::Kind::BlockDensity: return "density(sizes=" + to_string(*n.partition) + ")";
    case FilterPresentation::Kind::Summable: return "summable(w=" + to_string(n.weight) + ")";
    case FilterPresentation::Kind::Pushforward:
        return "push(" + to_string(*n.inner) + "," + to_string(*n.partition) + ")";
    case FilterPresentation::Kind::Restriction:
        return "restrict(" + to_string(*n.inner) + "," + to_string(*n.restrict_to) + ")";
    case FilterPresentation::Kind::Induced:
        return "induced(" + to_string(*n.sequence) + "," + to_string(*n.inner) + ")";
    }
    return "?";
}

} // namespace filterlab
