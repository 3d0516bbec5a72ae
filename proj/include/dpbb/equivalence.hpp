#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dpbb/lts.hpp"
#include "dpbb/semantics.hpp"
#include "dpbb/syntax.hpp"

namespace dpbb {

/// A binary relation over the states of a host LTS. With the
/// symmetric_closure flag set, (a,b) counts as related whenever (b,a) is
/// listed.
struct Relation {
    std::vector<std::pair<StateId, StateId>> pairs;
    bool symmetric_closure = false;

    void normalize(); // sort + dedup
    bool contains(StateId a, StateId b) const;

    static Relation identity(std::size_t n);
    static Relation from_partition(const Partition& p);
};

/// Relational conditions from the definitions of (rooted)
/// divergence-preserving branching bisimulation:
///   T       transfer condition of branching bisimulations
///   D       divergence preservation (equivalence relations only:
///           block-local divergence agreement)
///   Dprime  divergence matched by an infinite related run (mapping variant)
///   Dsecond divergence matched by a single related tau-step
///   R1R2    root conditions: initial steps matched exactly, successors
///           related by the given relation
enum class Condition { T, D, Dprime, Dsecond, R1R2 };

std::string condition_name(Condition c);

struct Counterexample {
    std::string condition;
    std::string p, q;               // offending pair, canonical prints
    std::string detail;             // offending transition or lasso, rendered
    std::vector<std::string> path;  // state names of a witnessing path, if any
};

enum class Outcome { holds, fails, unknown };

struct Verdict {
    Outcome outcome = Outcome::holds;
    std::optional<Counterexample> counterexample;
    std::string note;

    bool ok() const { return outcome == Outcome::holds; }
    static Verdict pass() { return {}; }
    static Verdict fail(Counterexample c) { return {Outcome::fails, std::move(c), {}}; }
    static Verdict dont_know(std::string why) { return {Outcome::unknown, std::nullopt, std::move(why)}; }
};

enum class PartitionBackend { refine, gfp };

/// Reference backend: greatest symmetric relation satisfying (T) and (D''),
/// computed by iterated pair removal from the full relation. The result is
/// an equivalence (asserted) and is returned as a partition with per-block
/// divergence flags.
Partition gfp_dpbb(const Lts& l);

/// Fast backend computing the same partition: signature refinement for
/// branching bisimulation with a divergence splitter in every round.
Partition refine_dpbb(const Lts& l);

/// Greatest relation satisfying (T) only: divergence-blind baseline.
Partition branching_bisim(const Lts& l);

Partition dpbb_partition(const Lts& l, PartitionBackend backend = PartitionBackend::refine);

struct CheckOptions {
    PartitionBackend backend = PartitionBackend::refine;
    std::size_t state_cap = default_state_cap;
};

/// Joint LTS plus the computed partition, for callers that need evidence.
struct CheckOutcome {
    bool equivalent = false;
    BuiltLts built;
    Partition partition;
    Verdict verdict;
};

// Closed-term deciders. Throw std::invalid_argument on non-closed input.
Verdict check_dpbb(const Expr& p, const Expr& q, const CheckOptions& = {});
Verdict check_rooted(const Expr& p, const Expr& q, const CheckOptions& = {});
CheckOutcome check_dpbb_full(const Expr& p, const Expr& q, const CheckOptions& = {});
CheckOutcome check_rooted_full(const Expr& p, const Expr& q, const CheckOptions& = {});

/// Divergence-blind variants (branching bisimilarity / rooted b.b.).
Verdict check_branching(const Expr& p, const Expr& q, const CheckOptions& = {});

// Open-term deciders for v-closed expressions, via the extended
// (variables-as-labels) transition system. Throw on inputs that are not
// v-closed.
Verdict check_open_dpbb(const Expr& e, const Expr& f, const VarName& v, const CheckOptions& = {});
Verdict check_open_rooted(const Expr& e, const Expr& f, const VarName& v, const CheckOptions& = {});
Verdict check_open_branching(const Expr& e, const Expr& f, const VarName& v, const CheckOptions& = {});
CheckOutcome check_open_dpbb_full(const Expr& e, const Expr& f, const VarName& v, const CheckOptions& = {});
CheckOutcome check_open_rooted_full(const Expr& e, const Expr& f, const VarName& v, const CheckOptions& = {});

/// Least n such that no state reachable from any root is equivalent to a^n
/// (the n-fold prefix of the given action). Bounded by the number of
/// reachable states, since the a^i are pairwise inequivalent. Open roots are
/// handled through the extended transition system.
std::size_t fresh_depth(std::span<const Expr> roots, const Action& a = Action::visible("a"),
                        const CheckOptions& = {});
std::size_t fresh_depth(std::initializer_list<Expr> roots, const Action& a = Action::visible("a"),
                        const CheckOptions& = {});

struct VerifyOptions {
    std::size_t lasso_cap = default_lasso_cap;
};

/// Checks the selected conditions for every related pair of r over l.
/// (D) requires r to be an equivalence and reduces to block-local divergence
/// agreement; a general-relation (D) verifier is intentionally not provided.
/// (D') and (D'') quantify over the simple lassos of the left component.
Verdict verify_relation(const Lts& l, const Relation& r, const std::set<Condition>& conditions,
                        const VerifyOptions& = {});

/// For every tau-path whose endpoints lie in one block of p, all
/// intermediate states must lie in that block.
Verdict stuttering_check(const Lts& l, const Partition& p);

} // namespace dpbb
