#pragma once

// Shared oracles and property bundles for the unit and acceptance suites.
// These deliberately avoid the library's algorithms where they act as
// independent checks (brute-force path extension, exhaustive walks).

#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dpbb/equivalence.hpp"
#include "dpbb/harness.hpp"
#include "dpbb/lts.hpp"
#include "dpbb/semantics.hpp"
#include "dpbb/syntax.hpp"

namespace dpbb::testing {

inline Expr E(const std::string& s) { return parse(s); }

inline GenConfig closed_config(std::uint64_t seed, int depth = 4) {
    GenConfig c;
    c.seed = seed;
    c.max_depth = depth;
    return c;
}

inline GenConfig open_config(std::uint64_t seed, int depth = 4) {
    GenConfig c = closed_config(seed, depth);
    c.free_pool = {VarName("X")};
    return c;
}

// ---------------------------------------------------------------------------
// Random LTS generator (seeded, sparse tau subgraph).

inline Lts random_lts(std::mt19937_64& rng, std::size_t max_states, double edge_factor = 1.7,
                      double tau_share = 0.45) {
    std::size_t n = 1 + rng() % max_states;
    Lts l;
    for (std::size_t i = 0; i < n; ++i)
        l.add_state(Expr::var(VarName("S" + std::to_string(i))));
    std::size_t m = static_cast<std::size_t>(edge_factor * static_cast<double>(n));
    Label labels[3] = {Label::tau(), Label::act(Action::visible("a")), Label::act(Action::visible("b"))};
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        StateId src = static_cast<StateId>(rng() % n);
        StateId dst = static_cast<StateId>(rng() % n);
        const Label& lab = unit(rng) < tau_share ? labels[0] : labels[1 + rng() % 2];
        l.add_edge(src, lab, dst);
    }
    l.finalize();
    return l;
}

// ---------------------------------------------------------------------------
// Brute-force divergence oracle: a tau-path of length `steps` exists from s
// inside `allowed` (pigeonhole: steps = |states|+1 implies a cycle).

inline bool bf_can_extend(const Lts& l, StateId s, const std::vector<bool>& allowed, std::size_t steps) {
    if (!allowed[s]) return false;
    std::size_t n = l.num_states();
    // memo[k*n+s]: 0 unknown, 1 yes, 2 no
    std::vector<std::uint8_t> memo((steps + 1) * n, 0);
    auto rec = [&](auto&& self, StateId cur, std::size_t k) -> bool {
        if (k == 0) return true;
        std::uint8_t& m = memo[k * n + cur];
        if (m) return m == 1;
        bool ok = false;
        for (const Edge& e : l.out(cur))
            if (l.is_tau(e.label) && allowed[e.target] && self(self, e.target, k - 1)) {
                ok = true;
                break;
            }
        m = ok ? 1 : 2;
        return ok;
    };
    return rec(rec, s, steps);
}

inline bool bf_diverges_within(const Lts& l, StateId s, const std::vector<bool>& allowed) {
    return bf_can_extend(l, s, allowed, l.num_states() + 1);
}

// Random tau-walk of the requested length; nullopt when the walk gets stuck.
inline std::optional<std::vector<StateId>> random_tau_walk(const Lts& l, StateId s, std::size_t len,
                                                           std::mt19937_64& rng) {
    std::vector<StateId> walk{s};
    StateId cur = s;
    for (std::size_t i = 0; i < len; ++i) {
        std::vector<StateId> succ;
        for (const Edge& e : l.out(cur))
            if (l.is_tau(e.label)) succ.push_back(e.target);
        if (succ.empty()) return std::nullopt;
        cur = succ[rng() % succ.size()];
        walk.push_back(cur);
    }
    return walk;
}

// ---------------------------------------------------------------------------
// Property bundles. Each returns an empty string on success and a rendered
// diagnostic on failure.

inline std::set<std::pair<std::string, std::string>> move_set(const std::vector<std::pair<Label, Expr>>& ms) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [lab, tgt] : ms) out.emplace(lab.token(), print(tgt));
    return out;
}

// Substitution transfer as one set equality:
// transitions(E[P/X]) = {(a, E'[P/X]) : E -a-> E'} u (exposed ? transitions(P) : {}).
// Covers both inclusions: projected E-steps and exposed P-steps survive the
// substitution, and nothing else is derivable.
inline std::string check_substitution_transfer(const Expr& e, const VarName& x, const Expr& p) {
    Expr ep = substitute(e, {{x, p}});
    auto actual = move_set(transitions(ep));
    std::set<std::pair<std::string, std::string>> expected;
    for (const auto& [lab, tgt] : transitions(e))
        expected.emplace(lab.token(), print(substitute(tgt, {{x, p}})));
    if (exposed(x, e))
        for (const auto& [lab, tgt] : transitions(p)) expected.emplace(lab.token(), print(tgt));
    if (actual != expected) {
        std::ostringstream os;
        os << "substitution transfer mismatch for E=" << print(e) << " P=" << print(p) << ": |actual|=" << actual.size()
           << " |expected|=" << expected.size();
        return os.str();
    }
    return {};
}

// transitions(rec X.E) = {(a, E'[rec X.E / X]) : E -a-> E'}.
inline std::string check_rec_unfolding_transfer(const Expr& e, const VarName& x) {
    Expr rec_e = canonical(Expr::rec(x, e));
    auto actual = move_set(transitions(rec_e));
    std::set<std::pair<std::string, std::string>> expected;
    for (const auto& [lab, tgt] : transitions(e))
        expected.emplace(lab.token(), print(substitute(tgt, {{x, rec_e}})));
    if (actual != expected) {
        std::ostringstream os;
        os << "rec unfolding mismatch for E=" << print(e) << ": |actual|=" << actual.size()
           << " |expected|=" << expected.size();
        return os.str();
    }
    return {};
}

// exposed(X, E) iff the extended system derives E --X--> 0.
inline std::string check_exposed_characterisation(const Expr& e, const VarName& x) {
    bool syntactic = exposed(x, e);
    bool semantic = false;
    for (const auto& [lab, tgt] : transitions(e, true))
        if (lab.is_var() && lab.var_name() == x && tgt.kind() == Expr::Kind::nil) semantic = true;
    if (syntactic != semantic)
        return "exposure mismatch for " + print(e) + ": syntactic=" + std::to_string(syntactic) +
               " semantic=" + std::to_string(semantic);
    return {};
}

// refine_dpbb and gfp_dpbb must produce identical partitions.
inline std::string check_backend_agreement(const Lts& l) {
    Partition fast = refine_dpbb(l);
    Partition slow = gfp_dpbb(l);
    if (!(fast == slow)) {
        std::ostringstream os;
        os << "backend mismatch on " << l.num_states() << " states: refine has " << fast.blocks.size()
           << " blocks, gfp has " << slow.blocks.size();
        return os.str();
    }
    return {};
}

// The computed partition satisfies T, D', D'' and block-local D.
inline std::string check_self_verification(const Lts& l, const Partition& part,
                                           std::size_t lasso_cap = default_lasso_cap) {
    Relation rel = Relation::from_partition(part);
    Verdict v = verify_relation(l, rel, {Condition::T, Condition::Dprime, Condition::Dsecond, Condition::D},
                                VerifyOptions{lasso_cap});
    if (!v.ok()) {
        std::ostringstream os;
        os << "self-verification failed";
        if (v.counterexample)
            os << ": condition " << v.counterexample->condition << " pair (" << v.counterexample->p << ", "
               << v.counterexample->q << ") " << v.counterexample->detail;
        return os.str();
    }
    return {};
}

// Weak decompositions p ==> p'' --a--> p' of related states must be matched
// by q ==> q'' --(a)--> q' with both waypoints related; checked exhaustively
// over the computed partition.
inline std::string check_weak_step_matching(const Lts& l, const Partition& part) {
    std::size_t n = l.num_states();
    std::vector<std::vector<StateId>> clos(n);
    for (StateId s = 0; s < n; ++s) clos[s] = tau_closure(l, s);
    auto same = [&](StateId a, StateId b) { return part.block_of[a] == part.block_of[b]; };
    for (StateId p = 0; p < n; ++p)
        for (StateId q = 0; q < n; ++q) {
            if (!same(p, q)) continue;
            for (StateId pmid : clos[p])
                for (const Edge& pe : l.out(pmid)) {
                    bool matched = false;
                    for (StateId qmid : clos[q]) {
                        if (!same(pmid, qmid)) continue;
                        if (l.is_tau(pe.label) && same(pe.target, qmid)) { matched = true; break; }
                        for (const Edge& qe : l.out(qmid))
                            if (qe.label == pe.label && same(pe.target, qe.target)) { matched = true; break; }
                        if (matched) break;
                    }
                    if (!matched) {
                        std::ostringstream os;
                        os << "weak-step matching fails for (" << l.state_name(p) << ", " << l.state_name(q)
                           << ") via " << l.state_name(pmid) << " --" << l.label(pe.label).token() << "--> "
                           << l.state_name(pe.target);
                        return os.str();
                    }
                }
        }
    return {};
}

// Third route to the equivalence for tiny LTSs: enumerate every symmetric
// relation over the states, keep those satisfying the literal transfer and
// divergence conditions (brute-force path extension for the latter), and
// take their union. Union-closure of the conditions makes that union the
// greatest such relation.
inline std::vector<std::vector<bool>> exhaustive_dpbb(const Lts& l) {
    std::size_t n = l.num_states();
    std::vector<std::vector<StateId>> clos(n), tausucc(n);
    for (StateId s = 0; s < n; ++s) {
        clos[s] = tau_closure(l, s);
        for (const Edge& e : l.out(s))
            if (l.is_tau(e.label)) tausucc[s].push_back(e.target);
    }
    std::vector<std::pair<StateId, StateId>> slots;
    for (StateId i = 0; i < n; ++i)
        for (StateId j = i; j < n; ++j) slots.emplace_back(i, j);
    std::vector<std::vector<bool>> best(n, std::vector<bool>(n, false));

    for (std::uint64_t mask = 0; mask < (1ull << slots.size()); ++mask) {
        std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
        for (std::size_t k = 0; k < slots.size(); ++k)
            if (mask & (1ull << k)) rel[slots[k].first][slots[k].second] =
                rel[slots[k].second][slots[k].first] = true;
        bool ok = true;
        for (StateId p = 0; p < n && ok; ++p)
            for (StateId q = 0; q < n && ok; ++q) {
                if (!rel[p][q]) continue;
                for (const Edge& pe : l.out(p)) {
                    bool matched = false;
                    for (StateId qq : clos[q]) {
                        if (!rel[p][qq]) continue;
                        if (l.is_tau(pe.label) && rel[pe.target][qq]) { matched = true; break; }
                        for (const Edge& qe : l.out(qq))
                            if (qe.label == pe.label && rel[pe.target][qe.target]) { matched = true; break; }
                        if (matched) break;
                    }
                    if (!matched) { ok = false; break; }
                }
                if (!ok) break;
                std::vector<bool> bad(n, true);
                for (StateId s = 0; s < n; ++s)
                    for (StateId qs : tausucc[q])
                        if (rel[s][qs]) { bad[s] = false; break; }
                if (bf_can_extend(l, p, bad, n + 1)) ok = false;
            }
        if (ok)
            for (StateId i = 0; i < n; ++i)
                for (StateId j = 0; j < n; ++j)
                    if (rel[i][j]) best[i][j] = true;
    }
    return best;
}

// Open-term characterisation: extended-LTS verdicts coincide with the
// a^(n+1)-substitution verdicts, for both the plain and rooted relations,
// and a positive open verdict survives sampled closed instantiations.
inline std::string check_open_instantiation_agreement(const Expr& e, const Expr& f, const VarName& x,
                                            std::mt19937_64& rng, int sampled_closed = 5) {
    Action a = Action::visible("a");
    bool open_dpbb = check_open_dpbb(e, f, x).ok();
    bool open_rooted = check_open_rooted(e, f, x).ok();
    std::size_t n = fresh_depth({e, f}, a);
    Expr probe = action_power(a, n + 1);
    Expr ec = substitute(e, {{x, probe}});
    Expr fc = substitute(f, {{x, probe}});
    bool closed_dpbb = check_dpbb(ec, fc).ok();
    bool closed_rooted = check_rooted(ec, fc).ok();
    if (open_dpbb != closed_dpbb || open_rooted != closed_rooted) {
        std::ostringstream os;
        os << "open/closed verdict mismatch for E=" << print(e) << " F=" << print(f) << " n=" << n << ": open=("
           << open_dpbb << "," << open_rooted << ") closed=(" << closed_dpbb << "," << closed_rooted << ")";
        return os.str();
    }
    if (open_dpbb) {
        GenConfig cfg = closed_config(rng(), 3);
        std::mt19937_64 sub_rng(cfg.seed);
        for (int i = 0; i < sampled_closed; ++i) {
            Expr p = random_expr(cfg, sub_rng);
            if (!check_dpbb(substitute(e, {{x, p}}), substitute(f, {{x, p}})).ok()) {
                return "open verdict fails closed instantiation for E=" + print(e) + " F=" + print(f) + " P=" + print(p);
            }
        }
    }
    return {};
}

} // namespace dpbb::testing
