#include "pushpull/term.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pushpull {

namespace {

using R = OpSignature::Range;
constexpr int kBig = 1'000'000;

const std::array<OpSignature, 9>& table() {
    static const std::array<OpSignature, 9> ops = {{
        {Op::insert, "INSERT", {R{0, 4}}, {}},
        {Op::lds, "LDS", {R{0, 4}, R{0, 16}, R{0, kBig}}, {}},
        {Op::do_, "DO", {}, {Sort::build, Sort::optimize}},
        {Op::forall, "FORALL", {}, {Sort::build, Sort::optimize}},
        {Op::chain, "CHAIN", {R{0, 10000}, R{1, 2}}, {}},
        {Op::tree, "TREE", {R{0, 10000}, R{1, 2}, R{0, 8}}, {}},
        {Op::lns, "LNS", {R{0, 1000}, R{1, 1000}}, {Sort::build}},
        {Op::loop, "LOOP", {R{1, 100000}}, {Sort::optimize}},
        {Op::then, "THEN", {}, {Sort::optimize, Sort::optimize}},
    }};
    return ops;
}

}  // namespace

std::string_view to_string(Op op) noexcept { return signature(op).name; }

std::string_view to_string(Sort sort) noexcept { return sort == Sort::build ? "Build" : "Optimize"; }

Sort sort_of(Op op) noexcept {
    switch (op) {
        case Op::insert:
        case Op::lds:
        case Op::do_:
        case Op::forall: return Sort::build;
        default: return Sort::optimize;
    }
}

const OpSignature& signature(Op op) { return table()[static_cast<std::size_t>(op)]; }

std::optional<Op> op_from_name(std::string_view name) noexcept {
    for (const auto& s : table())
        if (s.name == name) return s.op;
    return std::nullopt;
}

Term::Term(Op op, std::vector<int> ints, std::vector<TermPtr> children)
    : op_(op), ints_(std::move(ints)), children_(std::move(children)) {
    const auto& sig = signature(op);
    const std::string name(sig.name);
    if (ints_.size() != sig.ints.size())
        throw TermError(name + " takes " + std::to_string(sig.ints.size()) + " integer parameter(s)");
    if (children_.size() != sig.children.size())
        throw TermError(name + " takes " + std::to_string(sig.children.size()) + " sub-term(s)");
    for (std::size_t k = 0; k < ints_.size(); ++k)
        if (ints_[k] < sig.ints[k].lo || ints_[k] > sig.ints[k].hi)
            throw TermError(name + " parameter " + std::to_string(k + 1) + " must be in [" +
                            std::to_string(sig.ints[k].lo) + ", " + std::to_string(sig.ints[k].hi) + "], got " +
                            std::to_string(ints_[k]));
    for (std::size_t k = 0; k < children_.size(); ++k) {
        if (!children_[k]) throw TermError(name + " has a missing sub-term");
        if (children_[k]->sort() != sig.children[k])
            throw TermError(name + " argument " + std::to_string(k + 1) + " must be a " +
                            std::string(to_string(sig.children[k])) + " term");
        size_ += children_[k]->size();
        depth_ = std::max(depth_, children_[k]->depth() + 1);
    }
    if (op == Op::forall && children_[0]->op() != Op::lds) throw TermError("FORALL needs an LDS as first argument");
}

bool operator==(const Term& a, const Term& b) noexcept {
    if (&a == &b) return true;
    if (a.op_ != b.op_ || a.ints_ != b.ints_ || a.children_.size() != b.children_.size()) return false;
    for (std::size_t k = 0; k < a.children_.size(); ++k)
        if (!(*a.children_[k] == *b.children_[k])) return false;
    return true;
}

TermPtr make_term(Op op, std::vector<int> ints, std::vector<TermPtr> children) {
    return std::make_shared<const Term>(op, std::move(ints), std::move(children));
}
TermPtr make_insert(int level) { return make_term(Op::insert, {level}); }
TermPtr make_lds(int level, int discrepancies, int threshold) {
    return make_term(Op::lds, {level, discrepancies, threshold});
}
TermPtr make_do(TermPtr build, TermPtr optimize) { return make_term(Op::do_, {}, {std::move(build), std::move(optimize)}); }
TermPtr make_forall(TermPtr lds, TermPtr optimize) {
    return make_term(Op::forall, {}, {std::move(lds), std::move(optimize)});
}
TermPtr make_chain(int n, int m) { return make_term(Op::chain, {n, m}); }
TermPtr make_tree(int n, int m, int k) { return make_term(Op::tree, {n, m, k}); }
TermPtr make_lns(int n, int h, TermPtr build) { return make_term(Op::lns, {n, h}, {std::move(build)}); }
TermPtr make_loop(int n, TermPtr optimize) { return make_term(Op::loop, {n}, {std::move(optimize)}); }
TermPtr make_then(TermPtr first, TermPtr second) {
    return make_term(Op::then, {}, {std::move(first), std::move(second)});
}
TermPtr make_then(std::span<const TermPtr> parts) {
    if (parts.size() < 2) throw TermError("THEN needs at least two sub-terms");
    TermPtr acc = parts.back();
    for (std::size_t k = parts.size() - 1; k-- > 0;) acc = make_then(parts[k], acc);
    return acc;
}

ParseError::ParseError(std::size_t position, const std::string& what)
    : std::runtime_error("at position " + std::to_string(position) + ": " + what), position_(position) {}

namespace {

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    TermPtr parse_all() {
        auto t = parse();
        skip();
        if (pos_ != text_.size()) throw ParseError(pos_, "unexpected trailing input");
        return t;
    }

  private:
    struct Arg {
        std::size_t pos;
        std::optional<long long> number;
        TermPtr term;
    };

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    void expect(char c) {
        if (!peek(c)) throw ParseError(pos_, std::string("expected '") + c + "'");
        ++pos_;
    }

    TermPtr parse() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '+')) ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name.empty()) throw ParseError(start, "expected an operator name");
        const auto op = op_from_name(name);
        if (!op) throw ParseError(start, "unknown operator '" + std::string(name) + "'");
        expect('(');
        std::vector<Arg> args;
        if (!peek(')')) {
            do {
                args.push_back(parse_arg());
            } while (peek(',') && (++pos_, true));
        }
        expect(')');
        return build(*op, start, args);
    }

    Arg parse_arg() {
        skip();
        const std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || std::isdigit(static_cast<unsigned char>(text_[pos_])))) {
            std::size_t end = pos_ + 1;
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
            long long v = 0;
            const auto res = std::from_chars(text_.data() + pos_, text_.data() + end, v);
            if (res.ec != std::errc() || res.ptr != text_.data() + end) throw ParseError(start, "malformed integer");
            pos_ = end;
            return Arg{start, v, nullptr};
        }
        return Arg{start, std::nullopt, parse()};
    }

    TermPtr build(Op op, std::size_t start, std::vector<Arg>& args) {
        const auto& sig = signature(op);
        const std::string name(sig.name);
        std::vector<int> ints;
        std::vector<TermPtr> children;
        std::size_t k = 0;
        for (; k < args.size() && args[k].number; ++k) {
            if (*args[k].number < -kBig * 1000LL || *args[k].number > kBig * 1000LL)
                throw ParseError(args[k].pos, "integer out of range");
            ints.push_back(static_cast<int>(*args[k].number));
        }
        const std::size_t numeric = k;
        for (; k < args.size(); ++k) {
            if (args[k].number) throw ParseError(args[k].pos, name + ": integer parameters must come first");
            children.push_back(args[k].term);
        }
        if (op == Op::tree && ints.size() == 2 && children.empty()) ints.push_back(2);
        if (op == Op::then) {
            if (!ints.empty() || children.size() < 2)
                throw ParseError(start, "THEN takes two or more Optimize sub-terms");
            for (std::size_t c = 0; c < children.size(); ++c)
                if (children[c]->sort() != Sort::optimize)
                    throw ParseError(args[c].pos, "THEN argument " + std::to_string(c + 1) + " must be an Optimize term");
            return make_then(children);
        }
        if (ints.size() != sig.ints.size() || children.size() != sig.children.size())
            throw ParseError(start, name + " expects " + std::to_string(sig.ints.size()) + " integer(s) and " +
                                        std::to_string(sig.children.size()) + " sub-term(s)");
        for (std::size_t c = 0; c < children.size(); ++c) {
            const auto& a = args[numeric + c];
            if (children[c]->sort() != sig.children[c])
                throw ParseError(a.pos, name + " argument must be a " + std::string(to_string(sig.children[c])) + " term");
        }
        if (op == Op::forall && children[0]->op() != Op::lds) throw ParseError(args[0].pos, "FORALL needs an LDS as first argument");
        try {
            return make_term(op, std::move(ints), std::move(children));
        } catch (const TermError& e) {
            throw ParseError(start, e.what());
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void print_into(const Term& t, std::string& out) {
    out += to_string(t.op());
    out += '(';
    bool first = true;
    auto sep = [&] {
        if (!first) out += ',';
        first = false;
    };
    for (int v : t.ints()) {
        sep();
        out += std::to_string(v);
    }
    if (t.op() == Op::then) {
        const Term* cur = &t;
        while (cur->op() == Op::then) {
            sep();
            print_into(cur->child(0), out);
            cur = &cur->child(1);
        }
        sep();
        print_into(*cur, out);
    } else {
        for (const auto& c : t.children()) {
            sep();
            print_into(*c, out);
        }
    }
    out += ')';
}

TermPtr filler(Sort sort) { return sort == Sort::build ? make_insert(3) : make_chain(1, 1); }

// Keeps nodes at depth <= limit (root at 0); a composite node at the limit
// is replaced by a filler of its sort.
TermPtr truncate(const TermPtr& t, int limit) {
    if (t->children().empty()) return t;
    if (limit == 0) return filler(t->sort());
    std::vector<TermPtr> kids;
    for (const auto& c : t->children()) kids.push_back(truncate(c, limit - 1));
    return make_term(t->op(), t->ints(), std::move(kids));
}

}  // namespace

TermPtr parse_term(std::string_view text) { return Parser(text).parse_all(); }

std::string print_term(const Term& t) {
    std::string out;
    print_into(t, out);
    return out;
}

std::vector<TermPtr> parse_term_file(std::string_view text) {
    std::vector<TermPtr> out;
    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        std::size_t end = text.find('\n', line_start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(line_start, end - line_start);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
            try {
                out.push_back(parse_term(line));
            } catch (const ParseError& e) {
                throw ParseError(line_start + e.position(), e.what());
            }
        }
        line_start = end + 1;
    }
    return out;
}

std::vector<TermPtr> load_term_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open term file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_term_file(ss.str());
}

double estimate_complexity(const Term& t) {
    switch (t.op()) {
        case Op::insert: return 1000.0;
        case Op::lds: return (t.arg(0) == 4 ? 6000.0 : 1000.0) * std::ldexp(1.0, t.arg(1));
        case Op::chain: return 1500.0 * t.arg(0);
        case Op::tree: return 600.0 * t.arg(0) * std::ldexp(1.0, t.arg(2));
        case Op::lns: return t.arg(0) * estimate_complexity(t.child(0)) / 100.0;
        case Op::loop: return t.arg(0) * estimate_complexity(t.child(0));
        case Op::do_:
        case Op::forall:
        case Op::then: return estimate_complexity(t.child(0)) + estimate_complexity(t.child(1));
    }
    return 0;
}

TermPtr diet(const TermPtr& t, int bound) {
    if (bound < 1) throw TermError("diet bound must be at least 1");
    if (t->size() <= bound) return t;
    for (int limit = t->depth() - 2; limit >= 0; --limit) {
        auto cut = truncate(t, limit);
        if (cut->size() <= bound) return cut;
    }
    return filler(t->sort());
}

}  // namespace pushpull
