#include "dpbb/harness.hpp"

#include <algorithm>
#include <chrono>

#include "dpbb/semantics.hpp"

namespace dpbb {

namespace {

double chance(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

Expr gen(const GenConfig& c, std::mt19937_64& rng, int depth, std::vector<VarName>& bound) {
    auto leaf = [&]() -> Expr {
        std::vector<VarName> vars = bound;
        vars.insert(vars.end(), c.free_pool.begin(), c.free_pool.end());
        if (!vars.empty() && chance(rng) < 0.45) return Expr::var(vars[pick(rng, vars.size())]);
        return Expr::nil();
    };
    if (depth <= 1) return leaf();
    double roll = chance(rng);
    if (roll < c.choice_probability) {
        Expr l = gen(c, rng, depth - 1, bound);
        Expr r = gen(c, rng, depth - 1, bound);
        return Expr::choice(std::move(l), std::move(r));
    }
    roll -= c.choice_probability;
    if (roll < c.rec_probability && !c.var_pool.empty()) {
        VarName binder = c.var_pool[pick(rng, c.var_pool.size())];
        bound.push_back(binder);
        Expr body = gen(c, rng, depth - 1, bound);
        bound.pop_back();
        return Expr::rec(std::move(binder), std::move(body));
    }
    if (!c.action_alphabet.empty()) {
        const Action& a = c.action_alphabet[pick(rng, c.action_alphabet.size())];
        return Expr::prefix(a, gen(c, rng, depth - 1, bound));
    }
    return leaf();
}

} // namespace

Expr random_expr(const GenConfig& c, std::mt19937_64& rng) {
    std::vector<VarName> bound;
    return canonical(gen(c, rng, std::max(1, c.max_depth), bound));
}

Expr random_expr(const GenConfig& c) {
    std::mt19937_64 rng(c.seed);
    return random_expr(c, rng);
}

// ---------------------------------------------------------------------------
// Equivalence-preserving rewrites

std::string rewrite_rule_name(RewriteRule r) {
    switch (r) {
    case RewriteRule::rec_unfold: return "rec-unfold";
    case RewriteRule::choice_comm: return "choice-comm";
    case RewriteRule::choice_assoc: return "choice-assoc";
    case RewriteRule::choice_unit: return "choice-unit";
    case RewriteRule::choice_idem: return "choice-idem";
    }
    return "?";
}

namespace {

void collect_rewrites(const Expr& e, std::vector<int>& path, bool allow_expansion,
                      std::size_t size_cap, std::size_t whole_size, std::vector<RewriteStep>& out) {
    switch (e.kind()) {
    case Expr::Kind::rec:
        if (whole_size + e.node_count() <= size_cap)
            out.push_back(RewriteStep{RewriteRule::rec_unfold, path, false});
        break;
    case Expr::Kind::choice:
        out.push_back(RewriteStep{RewriteRule::choice_comm, path, false});
        if (e.left().kind() == Expr::Kind::choice)
            out.push_back(RewriteStep{RewriteRule::choice_assoc, path, false}); // (a+b)+c -> a+(b+c)
        if (e.right().kind() == Expr::Kind::choice)
            out.push_back(RewriteStep{RewriteRule::choice_assoc, path, true}); // a+(b+c) -> (a+b)+c
        if (e.right().kind() == Expr::Kind::nil || e.left().kind() == Expr::Kind::nil)
            out.push_back(RewriteStep{RewriteRule::choice_unit, path, false});
        if (e.left() == e.right()) out.push_back(RewriteStep{RewriteRule::choice_idem, path, false});
        break;
    default:
        break;
    }
    if (allow_expansion && whole_size + 1 <= size_cap) {
        out.push_back(RewriteStep{RewriteRule::choice_unit, path, true}); // E -> E + 0
        if (whole_size + e.node_count() <= size_cap)
            out.push_back(RewriteStep{RewriteRule::choice_idem, path, true}); // E -> E + E
    }
    switch (e.kind()) {
    case Expr::Kind::prefix:
    case Expr::Kind::rec:
        path.push_back(0);
        collect_rewrites(e.body(), path, allow_expansion, size_cap, whole_size, out);
        path.pop_back();
        break;
    case Expr::Kind::choice:
        path.push_back(0);
        collect_rewrites(e.left(), path, allow_expansion, size_cap, whole_size, out);
        path.pop_back();
        path.push_back(1);
        collect_rewrites(e.right(), path, allow_expansion, size_cap, whole_size, out);
        path.pop_back();
        break;
    default:
        break;
    }
}

Expr rewrite_here(const Expr& e, const RewriteStep& step) {
    switch (step.rule) {
    case RewriteRule::rec_unfold:
        if (e.kind() != Expr::Kind::rec) throw std::invalid_argument("rec-unfold: not a rec");
        return substitute(e.body(), {{e.var_name(), e}});
    case RewriteRule::choice_comm:
        if (e.kind() != Expr::Kind::choice) throw std::invalid_argument("choice-comm: not a choice");
        return Expr::choice(e.right(), e.left());
    case RewriteRule::choice_assoc:
        if (e.kind() != Expr::Kind::choice) throw std::invalid_argument("choice-assoc: not a choice");
        if (!step.expand) {
            Expr l = e.left();
            if (l.kind() != Expr::Kind::choice) throw std::invalid_argument("choice-assoc: shape mismatch");
            return Expr::choice(l.left(), Expr::choice(l.right(), e.right()));
        } else {
            Expr r = e.right();
            if (r.kind() != Expr::Kind::choice) throw std::invalid_argument("choice-assoc: shape mismatch");
            return Expr::choice(Expr::choice(e.left(), r.left()), r.right());
        }
    case RewriteRule::choice_unit:
        if (step.expand) return Expr::choice(e, Expr::nil());
        if (e.kind() != Expr::Kind::choice) throw std::invalid_argument("choice-unit: not a choice");
        if (e.right().kind() == Expr::Kind::nil) return e.left();
        if (e.left().kind() == Expr::Kind::nil) return e.right();
        throw std::invalid_argument("choice-unit: no 0 operand");
    case RewriteRule::choice_idem:
        if (step.expand) return Expr::choice(e, e);
        if (e.kind() != Expr::Kind::choice || !(e.left() == e.right()))
            throw std::invalid_argument("choice-idem: operands differ");
        return e.left();
    }
    throw std::invalid_argument("unknown rewrite rule");
}

Expr rewrite_at(const Expr& e, const RewriteStep& step, std::size_t depth) {
    if (depth == step.path.size()) return rewrite_here(e, step);
    int dir = step.path[depth];
    switch (e.kind()) {
    case Expr::Kind::prefix:
        return Expr::prefix(e.action(), rewrite_at(e.body(), step, depth + 1));
    case Expr::Kind::rec:
        return Expr::rec(e.var_name(), rewrite_at(e.body(), step, depth + 1));
    case Expr::Kind::choice:
        return dir == 0 ? Expr::choice(rewrite_at(e.left(), step, depth + 1), e.right())
                        : Expr::choice(e.left(), rewrite_at(e.right(), step, depth + 1));
    default:
        throw std::invalid_argument("rewrite path leads into a leaf");
    }
}

} // namespace

std::vector<RewriteStep> applicable_rewrites(const Expr& e, bool allow_expansion, std::size_t size_cap) {
    std::vector<RewriteStep> out;
    std::vector<int> path;
    Expr c = canonical(e);
    collect_rewrites(c, path, allow_expansion, size_cap, c.node_count(), out);
    return out;
}

Expr apply_rewrite(const Expr& e, const RewriteStep& step) {
    return canonical(rewrite_at(canonical(e), step, 0));
}

Expr equivalent_variant(const Expr& e, int steps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Expr cur = canonical(e);
    for (int i = 0; i < steps; ++i) {
        auto rewrites = applicable_rewrites(cur);
        if (rewrites.empty()) break;
        cur = apply_rewrite(cur, rewrites[pick(rng, rewrites.size())]);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Campaigns

namespace {

Action campaign_action(const GenConfig& c) {
    for (const Action& a : c.action_alphabet)
        if (!a.is_tau()) return a;
    return Action::visible("a");
}

} // namespace

Report congruence_campaign(int n_cases, const GenConfig& c) {
    auto t0 = std::chrono::steady_clock::now();
    Report report;
    report.campaign = "congruence";
    report.seed = c.seed;
    std::mt19937_64 rng(c.seed);
    VarName x("X");

    GenConfig open_cfg = c;
    open_cfg.free_pool = {x};

    for (int i = 0; i < n_cases; ++i) {
        CampaignCase cc;
        cc.case_seed = rng();
        std::mt19937_64 case_rng(cc.case_seed);

        Expr lhs = random_expr(open_cfg, case_rng);
        Expr rhs;
        bool seeded = false;
        if (chance(case_rng) < 0.2) {
            // Random pair, kept only when the checker accepts it.
            for (int attempt = 0; attempt < 8 && !seeded; ++attempt) {
                Expr cand = random_expr(open_cfg, case_rng);
                if (check_open_rooted(lhs, cand, x).ok()) {
                    rhs = cand;
                    seeded = true;
                }
            }
        }
        if (!seeded) rhs = equivalent_variant(lhs, 1 + static_cast<int>(pick(case_rng, 3)), case_rng());

        cc.lhs = print(lhs);
        cc.rhs = print(rhs);

        auto record = [&](const std::string& name, bool ok) {
            cc.checks.emplace_back(name, ok);
            if (!ok) cc.violated = true;
        };

        record("pair-rooted", check_open_rooted(lhs, rhs, x).ok());

        Action a = campaign_action(c);
        record("prefix-visible", check_open_rooted(Expr::prefix(a, lhs), Expr::prefix(a, rhs), x).ok());
        record("prefix-tau",
               check_open_rooted(Expr::prefix(Action::tau(), lhs), Expr::prefix(Action::tau(), rhs), x).ok());

        Expr h = random_expr(open_cfg, case_rng);
        record("choice-right", check_open_rooted(Expr::choice(lhs, h), Expr::choice(rhs, h), x).ok());
        record("choice-left", check_open_rooted(Expr::choice(h, lhs), Expr::choice(h, rhs), x).ok());

        record("rec-binding",
               check_rooted(canonical(Expr::rec(x, lhs)), canonical(Expr::rec(x, rhs))).ok());

        if (cc.violated) ++report.violations;
        ++report.cases_run;
        report.cases.push_back(std::move(cc));
    }
    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

Report coarsest_campaign(int n_cases, const GenConfig& c) {
    auto t0 = std::chrono::steady_clock::now();
    Report report;
    report.campaign = "coarsest";
    report.seed = c.seed;
    std::mt19937_64 rng(c.seed);

    GenConfig closed_cfg = c;
    closed_cfg.free_pool.clear();
    Action a = campaign_action(c);

    for (int i = 0; i < n_cases; ++i) {
        CampaignCase cc;
        cc.case_seed = rng();
        std::mt19937_64 case_rng(cc.case_seed);
        Expr p = random_expr(closed_cfg, case_rng);
        // Mostly independent pairs; every fifth case seeds a rewrite variant
        // so the equivalent side of the iff is exercised as well.
        Expr q = (i % 5 == 4) ? equivalent_variant(p, 1 + static_cast<int>(pick(case_rng, 3)), case_rng())
                              : random_expr(closed_cfg, case_rng);
        cc.lhs = print(p);
        cc.rhs = print(q);

        std::size_t n = fresh_depth({p, q}, a);
        bool rooted = check_rooted(p, q).ok();
        Expr guard = action_power(a, n + 1);
        bool padded = check_dpbb(Expr::choice(p, guard), Expr::choice(q, guard)).ok();

        cc.checks.emplace_back("rooted", rooted);
        cc.checks.emplace_back("padded-dpbb", padded);
        cc.violated = rooted != padded;
        if (cc.violated) ++report.violations;
        ++report.cases_run;
        report.cases.push_back(std::move(cc));
    }
    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace dpbb
