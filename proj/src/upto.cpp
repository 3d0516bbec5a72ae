#include "dpbb/upto.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

#include "dpbb/semantics.hpp"

namespace dpbb {

namespace {

std::set<std::pair<BlockId, BlockId>> closure_block_pairs(const Relation& base, const Partition& part) {
    std::set<std::pair<BlockId, BlockId>> bp;
    auto add = [&](StateId a, StateId b) { bp.emplace(part.block_of[a], part.block_of[b]); };
    for (auto [a, b] : base.pairs) {
        add(a, b);
        if (base.symmetric_closure) add(b, a);
    }
    return bp;
}

} // namespace

bool UptoRelation::in_closure(StateId a, StateId b) const { return closure.contains(a, b); }

UptoRelation make_upto(const Relation& b, const Lts& l, PartitionBackend backend) {
    UptoRelation u;
    u.base = b;
    u.base.pairs.reserve(b.pairs.size() * 2);
    if (b.symmetric_closure)
        for (auto [x, y] : b.pairs) u.base.pairs.emplace_back(y, x);
    u.base.symmetric_closure = false;
    u.base.normalize();
    u.dpbb = dpbb_partition(l, backend);
    auto bp = closure_block_pairs(u.base, u.dpbb);
    for (auto [ba, bb] : bp)
        for (StateId a : u.dpbb.blocks[ba])
            for (StateId b2 : u.dpbb.blocks[bb]) u.closure.pairs.emplace_back(a, b2);
    u.closure.normalize();
    return u;
}

Relation compose_closure(const Relation& b, const Lts& l, PartitionBackend backend) {
    return make_upto(b, l, backend).closure;
}

Verdict verify_upto(const Relation& b, const Lts& l, const UptoOptions& opts) {
    UptoRelation u = make_upto(b, l, opts.backend);
    std::size_t n = l.num_states();

    std::vector<std::vector<StateId>> tauclos(n);
    for (StateId s = 0; s < n; ++s) tauclos[s] = tau_closure(l, s);

    std::vector<Counterexample> violations;
    bool lasso_overflow = false;
    std::string overflow_note;

    // (U1) single-step transfer into the closure.
    for (auto [p, q] : u.base.pairs) {
        for (const Edge& pe : l.out(p)) {
            bool matched = false;
            for (const Edge& qe : l.out(q))
                if (qe.label == pe.label && u.in_closure(pe.target, qe.target)) { matched = true; break; }
            if (!matched) {
                violations.push_back(Counterexample{"U1", l.state_name(p), l.state_name(q),
                                                    "unmatched step " + l.state_name(p) + " --" +
                                                        l.label(pe.label).token() + "--> " +
                                                        l.state_name(pe.target),
                                                    {}});
                break;
            }
        }
    }

    // (U2) stuttering decompositions p ==> p'' --(a)--> p'.
    for (auto [p, q] : u.base.pairs) {
        bool violated = false;
        for (StateId pmid : tauclos[p]) {
            // The empty optional step: p ==> pmid.
            auto match_decomp = [&](std::optional<std::pair<LabelId, StateId>> step) -> bool {
                for (StateId qmid : tauclos[q]) {
                    if (!u.in_closure(pmid, qmid)) continue;
                    if (!step) return true; // q ==> qmid, optional step skipped
                    auto [lab, ptgt] = *step;
                    if (l.is_tau(lab) && u.in_closure(ptgt, qmid)) return true;
                    for (const Edge& qe : l.out(qmid))
                        if (qe.label == lab && u.in_closure(ptgt, qe.target)) return true;
                }
                return false;
            };
            if (!match_decomp(std::nullopt)) {
                violations.push_back(Counterexample{"U2", l.state_name(p), l.state_name(q),
                                                    "unmatched stuttering prefix to " + l.state_name(pmid),
                                                    {}});
                violated = true;
                break;
            }
            for (const Edge& pe : l.out(pmid)) {
                if (!match_decomp(std::make_pair(pe.label, pe.target))) {
                    violations.push_back(Counterexample{
                        "U2", l.state_name(p), l.state_name(q),
                        "unmatched decomposition via " + l.state_name(pmid) + " --" +
                            l.label(pe.label).token() + "--> " + l.state_name(pe.target),
                        {}});
                    violated = true;
                    break;
                }
            }
            if (violated) break;
        }
    }

    // (U3) divergence: for every simple lasso from p, an infinite tau-run of
    // q inside the closure image of the lasso's states.
    std::vector<std::optional<std::vector<Lasso>>> lassos(n);
    for (auto [p, q] : u.base.pairs) {
        if (!lassos[p]) {
            try {
                lassos[p] = simple_lassos(l, p, opts.lasso_cap);
            } catch (const resource_limit_error& err) {
                lasso_overflow = true;
                overflow_note = err.what();
                continue;
            }
        }
        for (const Lasso& lasso : *lassos[p]) {
            std::vector<bool> allowed(n, false);
            for (StateId s : lasso.state_set())
                for (StateId t = 0; t < n; ++t)
                    if (u.in_closure(s, t)) allowed[t] = true;
            if (!allowed[q] || !diverges_within(l, q, allowed)) {
                std::ostringstream os;
                os << "no closure-related infinite run matches the divergence of " << l.state_name(p);
                violations.push_back(Counterexample{"U3", l.state_name(p), l.state_name(q), os.str(), {}});
                break;
            }
        }
    }

    if (!violations.empty()) {
        Verdict v = Verdict::fail(violations.front());
        std::set<std::string> conds;
        for (const auto& c : violations) conds.insert(c.condition);
        std::ostringstream os;
        os << "violated:";
        for (const auto& c : conds) os << " " << c;
        if (lasso_overflow) os << " (and lasso cap exceeded: " << overflow_note << ")";
        v.note = os.str();
        return v;
    }
    if (lasso_overflow)
        return Verdict::dont_know("lasso cap exceeded while checking (U3): " + overflow_note);
    return Verdict::pass();
}

namespace {

// Least set of X-closed expressions containing seeds and closed under
// extended-system successors; canonical prints used for identity.
std::vector<Expr> extended_universe(const std::vector<Expr>& seeds, std::size_t state_cap) {
    TransitionEngine engine(true);
    std::vector<Expr> out;
    std::unordered_set<std::string> seen;
    std::deque<Expr> work;
    for (const Expr& s : seeds) {
        Expr c = canonical(s);
        if (seen.insert(print(c)).second) {
            out.push_back(c);
            work.push_back(c);
        }
    }
    while (!work.empty()) {
        Expr cur = std::move(work.front());
        work.pop_front();
        for (const auto& [label, target] : engine.transitions(cur)) {
            if (out.size() >= state_cap)
                throw resource_limit_error("U_{E,F} universe exceeds state cap");
            if (seen.insert(print(target)).second) {
                out.push_back(target);
                work.push_back(target);
            }
        }
    }
    return out;
}

} // namespace

Uef build_uef(const Expr& e, const Expr& f, const VarName& x, const UptoOptions& opts) {
    if (!is_x_closed(e, x) || !is_x_closed(f, x))
        throw std::invalid_argument("build_uef requires " + x.str() + "-closed expressions");
    CheckOptions copts{opts.backend, opts.state_cap};
    if (!check_open_rooted(e, f, x, copts).ok())
        throw std::invalid_argument("build_uef requires rooted-equivalent operands");

    Uef uef;
    uef.var = x;
    uef.e = canonical(e);
    uef.f = canonical(f);

    Expr rec_e = canonical(Expr::rec(x, uef.e));
    Expr rec_f = canonical(Expr::rec(x, uef.f));

    std::vector<Expr> universe = extended_universe({Expr::var(x), uef.e, uef.f}, opts.state_cap);

    for (int round = 0; round <= opts.universe_rounds; ++round) {
        // Instantiate the universe over both recursive closures.
        std::vector<Expr> roots;
        std::vector<std::pair<std::size_t, std::size_t>> idx; // (left,right) root positions per G
        for (const Expr& g : universe) {
            roots.push_back(substitute(g, {{x, rec_e}}));
            roots.push_back(substitute(g, {{x, rec_f}}));
            idx.emplace_back(roots.size() - 2, roots.size() - 1);
        }
        BuiltLts built = build_lts(std::span<const Expr>(roots.data(), roots.size()), false, opts.state_cap);

        uef.oriented.clear();
        Relation rel;
        for (auto [le, ri] : idx) {
            StateId a = built.roots[le], b = built.roots[ri];
            uef.oriented.emplace_back(a, b);
            rel.pairs.emplace_back(a, b);
        }
        rel.symmetric_closure = true;
        rel.normalize();

        uef.g_universe = universe;
        uef.host = std::move(built);
        uef.pairs = std::move(rel);

        // The universe is reachability-closed by construction, so one more
        // closure round is a fixpoint check; stop as soon as it is stable.
        std::vector<Expr> expanded = extended_universe(universe, opts.state_cap);
        if (expanded.size() == universe.size()) break;
        universe = std::move(expanded);
    }
    return uef;
}

RecCongruence conclude_rec_congruence(const Expr& e, const Expr& f, const VarName& x,
                                      const UptoOptions& opts) {
    RecCongruence out{Verdict::pass(), std::nullopt, Verdict::dont_know("skipped"), Verdict::pass(), false};
    CheckOptions copts{opts.backend, opts.state_cap};
    out.open_rooted = check_open_rooted(e, f, x, copts);

    Expr rec_e = canonical(Expr::rec(x, canonical(e)));
    Expr rec_f = canonical(Expr::rec(x, canonical(f)));
    out.direct = check_rooted(rec_e, rec_f, copts);

    if (!out.open_rooted.ok()) {
        out.upto = Verdict::dont_know("skipped: operands are not open rooted-equivalent");
        out.agreed = true; // nothing to compare
        return out;
    }
    Uef uef = build_uef(e, f, x, opts);
    out.universe_size = uef.g_universe.size();
    out.upto = verify_upto(uef.pairs, uef.host.lts, opts);
    out.agreed = out.upto.ok() && out.direct.ok();
    if (!out.agreed && out.upto.outcome == Outcome::unknown)
        out.upto.note += " (agreement not established)";
    return out;
}

} // namespace dpbb
