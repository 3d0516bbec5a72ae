#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dpbb/lts.hpp"
#include "dpbb/syntax.hpp"

namespace dpbb {

/// One derived transition between canonical expressions.
struct Transition {
    Expr source;
    Label label;
    Expr target;
};

/// One derivation session: computes the least transition relation generated
/// by the operational rules (prefix, rec, choice-left, choice-right), plus
/// X --X--> 0 for every variable when `extended` is set. A session owns a
/// memo table keyed by canonical print; sessions are independent, so
/// parallel use of distinct sessions is safe.
class TransitionEngine {
public:
    explicit TransitionEngine(bool extended) : extended_(extended) {}

    /// Sorted, deduplicated outgoing transitions of e (canonicalized first).
    /// Derivation search memoizes completed goals; a goal that is still in
    /// progress contributes the empty set to its own derivation paths, so
    /// unguarded recursion like rec X.X terminates with no transitions.
    const std::vector<std::pair<Label, Expr>>& transitions(const Expr& e);

    bool extended() const { return extended_; }

private:
    struct Entry {
        enum class State { in_progress, done } state;
        int depth = 0; // DFS stack depth while in progress
        std::vector<std::pair<Label, Expr>> moves;
    };

    // Returns the transition set and the minimum stack depth of any
    // in-progress goal the computation touched; results contaminated by an
    // enclosing in-progress goal are not memoized (they would be
    // under-approximations of the least fixpoint).
    std::pair<std::vector<std::pair<Label, Expr>>, int> derive(const Expr& e, int depth);

    bool extended_;
    std::unordered_map<std::string, Entry> memo_;
};

/// Convenience one-shot query (fresh session per call).
std::vector<std::pair<Label, Expr>> transitions(const Expr& e, bool extended = false);

/// Reachable fragment of an expression: all expressions reachable through
/// derived transitions, with every member's outgoing edges.
struct ReachSet {
    Expr seed;
    std::vector<Expr> members;        // canonical, seed first, insertion order
    std::vector<Transition> edges;
};

ReachSet reachable(const Expr& e, bool extended = false, std::size_t state_cap = default_state_cap);

/// Union of reachable fragments with states interned by canonical form
/// (state identity is the alpha-equivalence class of the expression).
struct BuiltLts {
    Lts lts;
    std::vector<StateId> roots; // one handle per input root, in order
};

BuiltLts build_lts(std::span<const Expr> roots, bool extended = false,
                   std::size_t state_cap = default_state_cap);
BuiltLts build_lts(std::initializer_list<Expr> roots, bool extended = false,
                   std::size_t state_cap = default_state_cap);

} // namespace dpbb
