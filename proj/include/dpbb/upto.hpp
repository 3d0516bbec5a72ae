#pragma once

#include <optional>
#include <vector>

#include "dpbb/equivalence.hpp"
#include "dpbb/lts.hpp"
#include "dpbb/syntax.hpp"

namespace dpbb {

/// A candidate up-to relation B over a host LTS together with its closure
/// B-hat = dpbb ; B ; dpbb, computed from the host's equivalence partition.
struct UptoRelation {
    Relation base;     // symmetric closure applied
    Partition dpbb;    // host's divergence-preserving branching partition
    Relation closure;  // materialized B-hat (superset of base)

    bool in_closure(StateId a, StateId b) const;
};

UptoRelation make_upto(const Relation& b, const Lts& l, PartitionBackend backend = PartitionBackend::refine);

/// Relational composition dpbb ; B ; dpbb over l's computed partition.
Relation compose_closure(const Relation& b, const Lts& l, PartitionBackend backend = PartitionBackend::refine);

struct UptoOptions {
    PartitionBackend backend = PartitionBackend::refine;
    std::size_t lasso_cap = default_lasso_cap;
    std::size_t state_cap = default_state_cap;
    int universe_rounds = 3; // bounded retries for universe expansion
};

/// Checks that b is a rooted divergence-preserving branching bisimulation up
/// to the host's equivalence:
///   U1  single steps matched by single steps into the closure,
///   U2  stuttering decompositions matched by stuttering decompositions,
///   U3  every simple lasso of the left component matched by an infinite
///       tau-run of the right staying inside the closure image of the
///       lasso's states.
/// All three conditions are evaluated; violations are reported together.
/// A lasso-cap overflow yields an `unknown` verdict, never a silent pass.
Verdict verify_upto(const Relation& b, const Lts& l, const UptoOptions& = {});

/// The relation U_{E,F}: pairs G[rec X.E / X] with G[rec X.F / X] for every
/// G in a finite universe of X-closed expressions (X itself plus everything
/// reachable from X, E, F in the extended transition system, closed under
/// extended successors).
struct Uef {
    VarName var = VarName("X");
    Expr e, f;
    std::vector<Expr> g_universe;
    BuiltLts host;                                      // joint closed LTS of all instances
    Relation pairs;                                     // with symmetric closure
    std::vector<std::pair<StateId, StateId>> oriented;  // (G[recE/X], G[recF/X]) per G
};

/// Requires e, f X-closed with check_open_rooted(e, f) true; throws
/// std::invalid_argument otherwise.
Uef build_uef(const Expr& e, const Expr& f, const VarName& x = VarName("X"), const UptoOptions& = {});

/// Full pipeline replaying the recursion-congruence argument: check the
/// open rooted equivalence of (e, f); if it holds, build U_{E,F}, verify it
/// as an up-to relation, and compare with the direct rooted check of
/// rec X.e vs rec X.f. The up-to and direct verdicts must agree.
struct RecCongruence {
    Verdict open_rooted;
    std::optional<std::size_t> universe_size;
    Verdict upto;    // unknown+note "skipped" when the precondition fails
    Verdict direct;  // check_rooted(rec x.e, rec x.f)
    bool agreed;
};

RecCongruence conclude_rec_congruence(const Expr& e, const Expr& f, const VarName& x = VarName("X"),
                                      const UptoOptions& = {});

} // namespace dpbb
