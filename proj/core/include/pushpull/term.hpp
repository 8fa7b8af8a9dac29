#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pushpull {

enum class Op { insert, lds, do_, forall, chain, tree, lns, loop, then };
enum class Sort { build, optimize };

std::string_view to_string(Op op) noexcept;
std::string_view to_string(Sort sort) noexcept;
Sort sort_of(Op op) noexcept;

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Thrown by the factories and by `parse_term` when a term breaks the
/// grammar: wrong arity, wrong child sort, or a parameter out of range.
class TermError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Immutable node of the algebra:
///
///   Build    ::= INSERT(i) | LDS(i,n,l) | DO(Build, Optimize) | FORALL(LDS, Optimize)
///   Optimize ::= CHAIN(n,m) | TREE(n,m,k) | LNS(n,h,Build) | LOOP(n,Optimize)
///              | THEN(Optimize, Optimize)
///
/// Integer parameters come first, sub-terms after. THEN is binary; the
/// text form accepts and prints right-nested chains flat.
class Term {
  public:
    /// Checked constructor; throws TermError.
    Term(Op op, std::vector<int> ints, std::vector<TermPtr> children);

    Op op() const noexcept { return op_; }
    Sort sort() const noexcept { return sort_of(op_); }
    const std::vector<int>& ints() const noexcept { return ints_; }
    int arg(std::size_t k) const { return ints_.at(k); }
    const std::vector<TermPtr>& children() const noexcept { return children_; }
    const Term& child(std::size_t k) const { return *children_.at(k); }

    /// Number of nodes.
    int size() const noexcept { return size_; }
    /// Longest root-to-leaf path, counted in nodes.
    int depth() const noexcept { return depth_; }

    friend bool operator==(const Term& a, const Term& b) noexcept;

  private:
    Op op_;
    std::vector<int> ints_;
    std::vector<TermPtr> children_;
    int size_ = 1;
    int depth_ = 1;
};

/// Parameter count, inclusive range per parameter, and child sorts of an
/// operator. LDS children of FORALL are additionally restricted to LDS.
struct OpSignature {
    Op op;
    std::string_view name;
    struct Range {
        int lo;
        int hi;
    };
    std::vector<Range> ints;
    std::vector<Sort> children;
};
const OpSignature& signature(Op op);
std::optional<Op> op_from_name(std::string_view name) noexcept;

TermPtr make_term(Op op, std::vector<int> ints, std::vector<TermPtr> children = {});
TermPtr make_insert(int level);
TermPtr make_lds(int level, int discrepancies, int threshold);
TermPtr make_do(TermPtr build, TermPtr optimize);
TermPtr make_forall(TermPtr lds, TermPtr optimize);
TermPtr make_chain(int n, int m);
TermPtr make_tree(int n, int m, int k = 2);
TermPtr make_lns(int n, int h, TermPtr build);
TermPtr make_loop(int n, TermPtr optimize);
TermPtr make_then(TermPtr first, TermPtr second);
/// Right-nested THEN over two or more optimizers.
TermPtr make_then(std::span<const TermPtr> parts);

/// Position-tagged syntax error.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t position, const std::string& what);
    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

/// Parses the text syntax, e.g. "DO(LDS(3,3,100),CHAIN(80,2))". Whitespace
/// is ignored. TREE accepts two integers (k defaults to 2).
TermPtr parse_term(std::string_view text);

/// Canonical text: no spaces, TREE with three integers, right-nested THEN
/// printed flat.
std::string print_term(const Term& t);

/// Reads a term library: one term per line, '#' starts a comment.
std::vector<TermPtr> parse_term_file(std::string_view text);
std::vector<TermPtr> load_term_file(const std::string& path);

/// Estimated number of insertions of a run.
double estimate_complexity(const Term& t);

/// Truncates a term to at most `bound` nodes by cutting every branch below
/// the deepest level that fits; cut Build slots become INSERT(3) and cut
/// Optimize slots CHAIN(1,1). Terms within the bound are returned as is.
TermPtr diet(const TermPtr& t, int bound);

}  // namespace pushpull
