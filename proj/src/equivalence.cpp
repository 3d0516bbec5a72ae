#include "dpbb/equivalence.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_set>

namespace dpbb {

void Relation::normalize() {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

bool Relation::contains(StateId a, StateId b) const {
    auto has = [&](StateId x, StateId y) {
        return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(x, y));
    };
    return has(a, b) || (symmetric_closure && has(b, a));
}

Relation Relation::identity(std::size_t n) {
    Relation r;
    r.pairs.reserve(n);
    for (StateId s = 0; s < n; ++s) r.pairs.emplace_back(s, s);
    return r;
}

Relation Relation::from_partition(const Partition& p) {
    Relation r;
    for (const auto& block : p.blocks)
        for (StateId a : block)
            for (StateId b : block) r.pairs.emplace_back(a, b);
    r.normalize();
    return r;
}

std::string condition_name(Condition c) {
    switch (c) {
    case Condition::T: return "T";
    case Condition::D: return "D";
    case Condition::Dprime: return "D'";
    case Condition::Dsecond: return "D''";
    case Condition::R1R2: return "R1R2";
    }
    return "?";
}

namespace {

// Precomputed per-state views used by the fixpoint checks.
struct Analysis {
    const Lts& l;
    std::vector<std::vector<StateId>> tauclos;
    std::vector<std::vector<StateId>> tausucc; // one-step tau successors

    explicit Analysis(const Lts& lts) : l(lts) {
        std::size_t n = l.num_states();
        tauclos.resize(n);
        tausucc.resize(n);
        for (StateId s = 0; s < n; ++s) {
            tauclos[s] = tau_closure(l, s);
            for (const Edge& e : l.out(s))
                if (l.is_tau(e.label)) tausucc[s].push_back(e.target);
        }
    }
};

using RelMatrix = std::vector<std::vector<std::uint8_t>>;

// Condition (T) for the pair (p, q) against the current relation: every step
// p --a--> p' must be matched by q ==> q'' --(a)--> q' with p R q'' and
// p' R q'.
bool transfer_holds(const Analysis& an, const RelMatrix& rel, StateId p, StateId q) {
    for (const Edge& pe : an.l.out(p)) {
        bool tau = an.l.is_tau(pe.label);
        bool matched = false;
        for (StateId qq : an.tauclos[q]) {
            if (!rel[p][qq]) continue;
            if (tau && rel[pe.target][qq]) { matched = true; break; }
            for (const Edge& qe : an.l.out(qq))
                if (qe.label == pe.label && rel[pe.target][qe.target]) { matched = true; break; }
            if (matched) break;
        }
        if (!matched) return false;
    }
    return true;
}

// Condition (D'') for the pair (p, q): no infinite tau-run from p that stays
// inside the states unrelated to every one-step tau successor of q.
bool dsecond_holds(const Analysis& an, const RelMatrix& rel, StateId p, StateId q) {
    std::size_t n = an.l.num_states();
    std::vector<bool> bad(n, true);
    for (StateId s = 0; s < n; ++s)
        for (StateId qs : an.tausucc[q])
            if (rel[s][qs]) { bad[s] = false; break; }
    return !diverges_within(an.l, p, bad);
}

Partition relation_to_partition(const Lts& l, const RelMatrix& rel) {
    std::size_t n = l.num_states();
    std::vector<BlockId> block_of(n, 0);
    std::vector<StateId> leader;
    for (StateId s = 0; s < n; ++s) {
        if (!rel[s][s]) throw std::logic_error("computed relation is not reflexive");
        bool found = false;
        for (std::size_t b = 0; b < leader.size(); ++b) {
            if (rel[s][leader[b]]) {
                if (rel[s] != rel[leader[b]])
                    throw std::logic_error("computed relation is not transitive");
                block_of[s] = static_cast<BlockId>(b);
                found = true;
                break;
            }
        }
        if (!found) {
            block_of[s] = static_cast<BlockId>(leader.size());
            leader.push_back(s);
        }
    }
    for (StateId s = 0; s < n; ++s)
        for (StateId t = 0; t < n; ++t)
            if (rel[s][t] != rel[t][s]) throw std::logic_error("computed relation is not symmetric");
    Partition part = Partition::from_block_of(std::move(block_of));
    auto flags = block_divergence(l, part);
    part.divergent.assign(flags.begin(), flags.end());
    return part;
}

Partition gfp_partition(const Lts& l, bool with_divergence) {
    std::size_t n = l.num_states();
    Analysis an(l);
    RelMatrix rel(n, std::vector<std::uint8_t>(n, 1));
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId p = 0; p < n; ++p)
            for (StateId q = 0; q < n; ++q) {
                if (!rel[p][q]) continue;
                if (!transfer_holds(an, rel, p, q) ||
                    (with_divergence && !dsecond_holds(an, rel, p, q))) {
                    rel[p][q] = rel[q][p] = 0;
                    changed = true;
                }
            }
    }
    return relation_to_partition(l, rel);
}

} // namespace

Partition gfp_dpbb(const Lts& l) { return gfp_partition(l, true); }
Partition branching_bisim(const Lts& l) { return gfp_partition(l, false); }

// ---------------------------------------------------------------------------
// Refinement backend

namespace {

// Signature of s within the current partition: the non-inert (label, block)
// pairs reachable after an inert tau-path (tau-steps inside s's block).
std::vector<std::pair<LabelId, BlockId>> signature_of(const Lts& l, const Partition& p, StateId s) {
    BlockId home = p.block_of[s];
    std::vector<StateId> inert;
    {
        std::vector<bool> seen(l.num_states(), false);
        std::deque<StateId> work{s};
        seen[s] = true;
        while (!work.empty()) {
            StateId cur = work.front();
            work.pop_front();
            inert.push_back(cur);
            for (const Edge& e : l.out(cur))
                if (l.is_tau(e.label) && p.block_of[e.target] == home && !seen[e.target]) {
                    seen[e.target] = true;
                    work.push_back(e.target);
                }
        }
    }
    std::vector<std::pair<LabelId, BlockId>> sig;
    for (StateId cur : inert)
        for (const Edge& e : l.out(cur)) {
            BlockId tb = p.block_of[e.target];
            if (l.is_tau(e.label) && tb == home) continue;
            sig.emplace_back(e.label, tb);
        }
    std::sort(sig.begin(), sig.end());
    sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
    return sig;
}

} // namespace

Partition refine_dpbb(const Lts& l) {
    std::size_t n = l.num_states();
    if (n == 0) return Partition{};
    Partition part = Partition::from_block_of(std::vector<BlockId>(n, 0));
    bool changed = true;
    while (changed) {
        changed = false;

        // Divergence splitter: separate the states with an infinite tau-path
        // inside their block from the rest of the block.
        {
            std::vector<BlockId> nb(n, 0);
            BlockId next = 0;
            for (const auto& block : part.blocks) {
                std::vector<bool> mask(n, false);
                for (StateId s : block) mask[s] = true;
                std::vector<StateId> div, rest;
                for (StateId s : block) (diverges_within(l, s, mask) ? div : rest).push_back(s);
                if (!div.empty() && !rest.empty()) {
                    for (StateId s : div) nb[s] = next;
                    ++next;
                    for (StateId s : rest) nb[s] = next;
                    ++next;
                    changed = true;
                } else {
                    for (StateId s : block) nb[s] = next;
                    ++next;
                }
            }
            part = Partition::from_block_of(std::move(nb));
        }

        // Signature splitter.
        {
            std::vector<BlockId> nb(n, 0);
            BlockId next = 0;
            bool split = false;
            for (const auto& block : part.blocks) {
                std::map<std::vector<std::pair<LabelId, BlockId>>, std::vector<StateId>> groups;
                for (StateId s : block) groups[signature_of(l, part, s)].push_back(s);
                if (groups.size() > 1) split = true;
                for (const auto& [sig, members] : groups) {
                    for (StateId s : members) nb[s] = next;
                    ++next;
                }
            }
            if (split) {
                part = Partition::from_block_of(std::move(nb));
                changed = true;
            }
        }
    }
    auto flags = block_divergence(l, part);
    part.divergent.assign(flags.begin(), flags.end());
    return part;
}

Partition dpbb_partition(const Lts& l, PartitionBackend backend) {
    return backend == PartitionBackend::refine ? refine_dpbb(l) : gfp_dpbb(l);
}

// ---------------------------------------------------------------------------
// Deciders

namespace {

void require_closed(const Expr& e, const char* role) {
    if (!is_closed(e))
        throw std::invalid_argument(std::string(role) + " expression is not closed: " + print(e));
}

void require_x_closed(const Expr& e, const VarName& v, const char* role) {
    if (!is_x_closed(e, v))
        throw std::invalid_argument(std::string(role) + " expression is not " + v.str() +
                                    "-closed: " + print(e));
}

std::string render_step(const Lts& l, StateId src, LabelId lab, StateId dst) {
    return l.state_name(src) + " --" + l.label(lab).token() + "--> " + l.state_name(dst);
}

// Finds an infinite tau-run witness from s inside `allowed`: a stem followed
// by a cycle, rendered as the visited state sequence with the junction state
// repeated at the end.
std::optional<std::vector<StateId>> divergence_witness(const Lts& l, StateId s,
                                                       const std::vector<bool>& allowed) {
    if (!allowed[s]) return std::nullopt;
    std::vector<StateId> path{s};
    std::vector<int> pos(l.num_states(), -1);
    std::vector<bool> dead(l.num_states(), false);
    pos[s] = 0;
    std::vector<std::size_t> cursor{0};
    while (!cursor.empty()) {
        StateId cur = path.back();
        auto edges = l.out(cur);
        std::size_t& idx = cursor.back();
        bool descended = false;
        while (idx < edges.size()) {
            const Edge& e = edges[idx++];
            if (!l.is_tau(e.label) || !allowed[e.target] || dead[e.target]) continue;
            if (pos[e.target] >= 0) {
                std::vector<StateId> witness = path;
                witness.push_back(e.target);
                return witness;
            }
            pos[e.target] = static_cast<int>(path.size());
            path.push_back(e.target);
            cursor.push_back(0);
            descended = true;
            break;
        }
        if (!descended && cursor.back() >= edges.size()) {
            dead[path.back()] = true;
            pos[path.back()] = -1;
            path.pop_back();
            cursor.pop_back();
        }
    }
    return std::nullopt;
}

CheckOutcome run_block_check(std::vector<Expr> exprs, bool extended, const CheckOptions& opts,
                             bool divergence) {
    CheckOutcome out;
    out.built = build_lts(std::span<const Expr>(exprs.data(), exprs.size()), extended, opts.state_cap);
    const Lts& l = out.built.lts;
    out.partition = divergence ? dpbb_partition(l, opts.backend) : branching_bisim(l);
    StateId r0 = out.built.roots[0], r1 = out.built.roots[1];
    out.equivalent = out.partition.block_of[r0] == out.partition.block_of[r1];
    if (out.equivalent) {
        out.verdict = Verdict::pass();
    } else {
        // Diagnose: adding the root pair to the computed equivalence must
        // break (T) or (D''), and only the added pair can be to blame.
        Relation r = Relation::from_partition(out.partition);
        r.pairs.emplace_back(r0, r1);
        r.pairs.emplace_back(r1, r0);
        r.normalize();
        std::set<Condition> conds{Condition::T};
        if (divergence) conds.insert(Condition::Dsecond);
        Verdict diag = verify_relation(l, r, conds);
        if (diag.outcome == Outcome::fails) {
            out.verdict = diag;
        } else {
            out.verdict = Verdict::fail(Counterexample{
                "distinct-classes", l.state_name(r0), l.state_name(r1), "roots are in distinct blocks", {}});
        }
    }
    return out;
}

CheckOutcome run_rooted_check(std::vector<Expr> exprs, bool extended, const CheckOptions& opts) {
    CheckOutcome out;
    out.built = build_lts(std::span<const Expr>(exprs.data(), exprs.size()), extended, opts.state_cap);
    const Lts& l = out.built.lts;
    out.partition = dpbb_partition(l, opts.backend);
    StateId r0 = out.built.roots[0], r1 = out.built.roots[1];

    auto match_initial = [&](StateId p, StateId q, const char* cond) -> std::optional<Counterexample> {
        for (const Edge& pe : l.out(p)) {
            bool matched = false;
            for (const Edge& qe : l.out(q))
                if (qe.label == pe.label &&
                    out.partition.block_of[pe.target] == out.partition.block_of[qe.target]) {
                    matched = true;
                    break;
                }
            if (!matched)
                return Counterexample{cond, l.state_name(r0), l.state_name(r1),
                                      "unmatched initial transition " + render_step(l, p, pe.label, pe.target),
                                      {}};
        }
        return std::nullopt;
    };

    std::optional<Counterexample> cex = match_initial(r0, r1, "R1");
    if (!cex) cex = match_initial(r1, r0, "R2");
    out.equivalent = !cex.has_value();
    out.verdict = cex ? Verdict::fail(std::move(*cex)) : Verdict::pass();
    return out;
}

} // namespace

CheckOutcome check_dpbb_full(const Expr& p, const Expr& q, const CheckOptions& opts) {
    require_closed(p, "left");
    require_closed(q, "right");
    return run_block_check({p, q}, false, opts, true);
}

CheckOutcome check_rooted_full(const Expr& p, const Expr& q, const CheckOptions& opts) {
    require_closed(p, "left");
    require_closed(q, "right");
    return run_rooted_check({p, q}, false, opts);
}

Verdict check_dpbb(const Expr& p, const Expr& q, const CheckOptions& opts) {
    return check_dpbb_full(p, q, opts).verdict;
}

Verdict check_rooted(const Expr& p, const Expr& q, const CheckOptions& opts) {
    return check_rooted_full(p, q, opts).verdict;
}

Verdict check_branching(const Expr& p, const Expr& q, const CheckOptions& opts) {
    require_closed(p, "left");
    require_closed(q, "right");
    return run_block_check({p, q}, false, opts, false).verdict;
}

CheckOutcome check_open_dpbb_full(const Expr& e, const Expr& f, const VarName& v,
                                  const CheckOptions& opts) {
    require_x_closed(e, v, "left");
    require_x_closed(f, v, "right");
    return run_block_check({e, f}, true, opts, true);
}

CheckOutcome check_open_rooted_full(const Expr& e, const Expr& f, const VarName& v,
                                    const CheckOptions& opts) {
    require_x_closed(e, v, "left");
    require_x_closed(f, v, "right");
    return run_rooted_check({e, f}, true, opts);
}

Verdict check_open_dpbb(const Expr& e, const Expr& f, const VarName& v, const CheckOptions& opts) {
    return check_open_dpbb_full(e, f, v, opts).verdict;
}

Verdict check_open_rooted(const Expr& e, const Expr& f, const VarName& v, const CheckOptions& opts) {
    return check_open_rooted_full(e, f, v, opts).verdict;
}

Verdict check_open_branching(const Expr& e, const Expr& f, const VarName& v, const CheckOptions& opts) {
    require_x_closed(e, v, "left");
    require_x_closed(f, v, "right");
    return run_block_check({e, f}, true, opts, false).verdict;
}

std::size_t fresh_depth(std::span<const Expr> roots, const Action& a, const CheckOptions& opts) {
    bool extended = false;
    for (const Expr& r : roots)
        if (!is_closed(r)) extended = true;
    std::size_t reach_count = build_lts(roots, extended, opts.state_cap).lts.num_states();

    std::vector<Expr> all(roots.begin(), roots.end());
    all.push_back(action_power(a, reach_count));
    BuiltLts built = build_lts(std::span<const Expr>(all.data(), all.size()), extended, opts.state_cap);
    const Lts& l = built.lts;
    Partition part = dpbb_partition(l, opts.backend);

    std::span<const StateId> root_handles(built.roots.data(), roots.size());
    std::vector<StateId> from_roots = l.reachable_from(root_handles);

    for (std::size_t n = 0; n <= reach_count; ++n) {
        auto an = l.find_state(action_power(a, n));
        if (!an) throw std::logic_error("a^n state missing from joint LTS");
        BlockId target = part.block_of[*an];
        bool hit = false;
        for (StateId s : from_roots)
            if (part.block_of[s] == target) { hit = true; break; }
        if (!hit) return n;
    }
    throw std::logic_error("fresh_depth exceeded its reachable-state bound");
}

std::size_t fresh_depth(std::initializer_list<Expr> roots, const Action& a, const CheckOptions& opts) {
    return fresh_depth(std::span<const Expr>(roots.begin(), roots.size()), a, opts);
}

// ---------------------------------------------------------------------------
// Condition verifier

namespace {

std::string render_lasso(const Lts& l, const Lasso& lasso) {
    std::ostringstream os;
    os << "lasso stem [";
    for (std::size_t i = 0; i < lasso.stem.size(); ++i)
        os << (i ? ", " : "") << l.state_name(lasso.stem[i]);
    os << "] cycle [";
    for (std::size_t i = 0; i < lasso.cycle.size(); ++i)
        os << (i ? ", " : "") << l.state_name(lasso.cycle[i]);
    os << "]";
    return os.str();
}

std::vector<std::string> path_names(const Lts& l, const std::vector<StateId>& path) {
    std::vector<std::string> out;
    out.reserve(path.size());
    for (StateId s : path) out.push_back(l.state_name(s));
    return out;
}

} // namespace

Verdict verify_relation(const Lts& l, const Relation& r, const std::set<Condition>& conditions,
                        const VerifyOptions& opts) {
    std::size_t n = l.num_states();
    std::vector<std::pair<StateId, StateId>> pairs = r.pairs;
    if (r.symmetric_closure)
        for (auto [a, b] : r.pairs) pairs.emplace_back(b, a);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (auto [a, b] : pairs)
        if (a >= n || b >= n) throw std::invalid_argument("relation mentions an invalid state");

    std::unordered_set<std::uint64_t> members;
    members.reserve(pairs.size() * 2);
    for (auto [a, b] : pairs) members.insert((static_cast<std::uint64_t>(a) << 32) | b);
    auto related = [&](StateId a, StateId b) {
        return members.count((static_cast<std::uint64_t>(a) << 32) | b) > 0;
    };

    Analysis an(l);
    std::vector<std::optional<std::vector<Lasso>>> lassos(n);
    auto lassos_of = [&](StateId s) -> const std::vector<Lasso>& {
        if (!lassos[s]) lassos[s] = simple_lassos(l, s, opts.lasso_cap);
        return *lassos[s];
    };

    if (conditions.count(Condition::T)) {
        for (auto [p, q] : pairs)
            for (const Edge& pe : l.out(p)) {
                bool tau = l.is_tau(pe.label);
                bool matched = false;
                for (StateId qq : an.tauclos[q]) {
                    if (!related(p, qq)) continue;
                    if (tau && related(pe.target, qq)) { matched = true; break; }
                    for (const Edge& qe : l.out(qq))
                        if (qe.label == pe.label && related(pe.target, qe.target)) { matched = true; break; }
                    if (matched) break;
                }
                if (!matched)
                    return Verdict::fail(Counterexample{"T", l.state_name(p), l.state_name(q),
                                                        "unmatched step " + render_step(l, p, pe.label, pe.target),
                                                        {}});
            }
    }

    if (conditions.count(Condition::D)) {
        // Equivalence check over the mentioned field: reflexive, symmetric,
        // and class-consistent.
        std::vector<bool> field(n, false);
        for (auto [a, b] : pairs) field[a] = field[b] = true;
        for (StateId s = 0; s < n; ++s)
            if (field[s] && !related(s, s))
                throw std::invalid_argument("(D) requires an equivalence relation (not reflexive)");
        for (auto [a, b] : pairs) {
            if (!related(b, a)) throw std::invalid_argument("(D) requires an equivalence relation (not symmetric)");
            for (StateId c = 0; c < n; ++c)
                if (field[c] && related(b, c) != related(a, c))
                    throw std::invalid_argument("(D) requires an equivalence relation (not transitive)");
        }
        // Block-local divergence agreement.
        std::vector<bool> done(n, false);
        for (StateId s = 0; s < n; ++s) {
            if (!field[s] || done[s]) continue;
            std::vector<StateId> block;
            std::vector<bool> mask(n, false);
            for (StateId t = 0; t < n; ++t)
                if (field[t] && related(s, t)) {
                    block.push_back(t);
                    mask[t] = true;
                    done[t] = true;
                }
            std::optional<StateId> diverging, steady;
            for (StateId t : block) (diverges_within(l, t, mask) ? diverging : steady) = t;
            if (diverging && steady) {
                auto witness = divergence_witness(l, *diverging, mask);
                return Verdict::fail(Counterexample{
                    "D", l.state_name(*diverging), l.state_name(*steady),
                    "block-local divergence disagreement",
                    witness ? path_names(l, *witness) : std::vector<std::string>{}});
            }
        }
    }

    if (conditions.count(Condition::Dprime)) {
        for (auto [p, q] : pairs)
            for (const Lasso& lasso : lassos_of(p)) {
                std::vector<bool> allowed(n, false);
                for (StateId s : lasso.state_set())
                    for (StateId t = 0; t < n; ++t)
                        if (related(s, t)) allowed[t] = true;
                if (!allowed[q] || !diverges_within(l, q, allowed))
                    return Verdict::fail(Counterexample{"D'", l.state_name(p), l.state_name(q),
                                                        "no related infinite run matches " + render_lasso(l, lasso),
                                                        {}});
            }
    }

    if (conditions.count(Condition::Dsecond)) {
        for (auto [p, q] : pairs) {
            std::vector<bool> bad(n, true);
            for (StateId s = 0; s < n; ++s)
                for (StateId qs : an.tausucc[q])
                    if (related(s, qs)) { bad[s] = false; break; }
            if (auto witness = divergence_witness(l, p, bad))
                return Verdict::fail(Counterexample{"D''", l.state_name(p), l.state_name(q),
                                                    "divergence unmatched by any tau-successor",
                                                    path_names(l, *witness)});
        }
    }

    if (conditions.count(Condition::R1R2)) {
        for (auto [p, q] : pairs) {
            for (const Edge& pe : l.out(p)) {
                bool matched = false;
                for (const Edge& qe : l.out(q))
                    if (qe.label == pe.label && related(pe.target, qe.target)) { matched = true; break; }
                if (!matched)
                    return Verdict::fail(Counterexample{"R1", l.state_name(p), l.state_name(q),
                                                        "unmatched initial step " +
                                                            render_step(l, p, pe.label, pe.target),
                                                        {}});
            }
            for (const Edge& qe : l.out(q)) {
                bool matched = false;
                for (const Edge& pe : l.out(p))
                    if (pe.label == qe.label && related(pe.target, qe.target)) { matched = true; break; }
                if (!matched)
                    return Verdict::fail(Counterexample{"R2", l.state_name(p), l.state_name(q),
                                                        "unmatched initial step " +
                                                            render_step(l, q, qe.label, qe.target),
                                                        {}});
            }
        }
    }

    return Verdict::pass();
}

Verdict stuttering_check(const Lts& l, const Partition& p) {
    std::size_t n = l.num_states();
    // Reverse tau adjacency.
    std::vector<std::vector<StateId>> rev(n);
    for (StateId s = 0; s < n; ++s)
        for (const Edge& e : l.out(s))
            if (l.is_tau(e.label)) rev[e.target].push_back(s);

    for (const auto& block : p.blocks) {
        std::vector<bool> in_block(n, false);
        for (StateId s : block) in_block[s] = true;
        // States that tau-reach the block (through anything).
        std::vector<bool> back(n, false);
        std::deque<StateId> work;
        for (StateId s : block) {
            back[s] = true;
            work.push_back(s);
        }
        while (!work.empty()) {
            StateId cur = work.front();
            work.pop_front();
            for (StateId pred : rev[cur])
                if (!back[pred]) {
                    back[pred] = true;
                    work.push_back(pred);
                }
        }
        for (StateId s : block)
            for (const Edge& e : l.out(s)) {
                if (!l.is_tau(e.label) || in_block[e.target]) continue;
                if (!back[e.target]) continue;
                // Violation: s --tau--> e.target ==> s' with s, s' in the
                // block and e.target outside. Reconstruct a forward path.
                std::vector<StateId> path{s, e.target};
                std::vector<int> parent(n, -1);
                std::deque<StateId> q{e.target};
                parent[e.target] = static_cast<int>(e.target);
                StateId hit = e.target;
                bool found = false;
                while (!q.empty() && !found) {
                    StateId cur = q.front();
                    q.pop_front();
                    for (const Edge& e2 : l.out(cur)) {
                        if (!l.is_tau(e2.label) || parent[e2.target] >= 0) continue;
                        parent[e2.target] = static_cast<int>(cur);
                        if (in_block[e2.target]) {
                            hit = e2.target;
                            found = true;
                            break;
                        }
                        q.push_back(e2.target);
                    }
                }
                std::vector<StateId> tail;
                for (StateId cur = hit; cur != e.target; cur = static_cast<StateId>(parent[cur]))
                    tail.push_back(cur);
                std::reverse(tail.begin(), tail.end());
                path.insert(path.end(), tail.begin(), tail.end());
                return Verdict::fail(Counterexample{"stuttering", l.state_name(s), l.state_name(path.back()),
                                                    "tau-path between block members leaves the block",
                                                    path_names(l, path)});
            }
    }
    return Verdict::pass();
}

} // namespace dpbb
