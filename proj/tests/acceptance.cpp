// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria are exact (zero tolerance); random instances use fixed
// seeds so runs are reproducible.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "dpbb/equivalence.hpp"
#include "dpbb/harness.hpp"
#include "dpbb/semantics.hpp"
#include "dpbb/upto.hpp"
#include "test_support.hpp"

using namespace dpbb;
using dpbb::testing::E;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("%s  %d. %-28s %s (%.1fs)\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

template <typename F>
void criterion(int index, const std::string& name, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto [p, d] = f();
        pass = p;
        detail = d;
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(index, name, pass, detail, secs);
}

std::pair<bool, std::string> fixed_examples() {
    int bad = 0;
    auto expect = [&](bool got, bool want) {
        if (got != want) ++bad;
    };
    expect(check_dpbb(E("0"), E("tau.0")).ok(), true);
    expect(check_rooted(E("0"), E("tau.0")).ok(), false);
    expect(check_dpbb(E("0 + a.0"), E("tau.0 + a.0")).ok(), false);
    expect(check_open_dpbb(E("X"), E("tau.X"), VarName("X")).ok(), true);
    expect(check_open_rooted(E("X"), E("tau.X"), VarName("X")).ok(), false);
    expect(check_dpbb(E("rec X.X"), E("rec X.tau.X")).ok(), false);
    Action a = Action::visible("a");
    for (int i = 0; i <= 6; ++i)
        for (int j = 0; j <= 6; ++j)
            expect(check_dpbb(action_power(a, i), action_power(a, j)).ok(), i == j);
    return {bad == 0, bad == 0 ? "all exact booleans match" : std::to_string(bad) + " mismatches"};
}

// Shared instance sweep for criteria 2-4.
struct SweepOutcome {
    int instances = 0;
    int backend_mismatches = 0;
    int self_verification_failures = 0;
    int stuttering_failures = 0;
    std::size_t max_states = 0;
};

SweepOutcome sweep;
bool sweep_done = false;

void run_sweep() {
    if (sweep_done) return;
    std::mt19937_64 rng(0xACCE5501);
    auto process = [&](const Lts& l) {
        ++sweep.instances;
        sweep.max_states = std::max(sweep.max_states, l.num_states());
        Partition fast = refine_dpbb(l);
        Partition slow = gfp_dpbb(l);
        if (!(fast == slow)) ++sweep.backend_mismatches;
        if (!testing::check_self_verification(l, fast).empty()) ++sweep.self_verification_failures;
        if (!stuttering_check(l, fast).ok()) ++sweep.stuttering_failures;
    };
    // 300 random graph LTSs of <= 30 states, sweeping edge density while
    // keeping the tau subgraph below the cycle-explosion threshold.
    const std::pair<double, double> density[6] = {
        {1.0, 0.85}, {1.2, 0.7}, {1.6, 0.55}, {2.0, 0.45}, {2.4, 0.35}, {2.8, 0.3}};
    for (int i = 0; i < 300; ++i) {
        auto [edges, tau_share] = density[i % 6];
        process(testing::random_lts(rng, 30, edges, tau_share));
    }
    // 500 random closed expressions of depth <= 6.
    for (int i = 0; i < 500; ++i) {
        GenConfig cfg = testing::closed_config(rng(), 6);
        std::mt19937_64 grng(cfg.seed);
        process(build_lts({random_expr(cfg, grng)}).lts);
    }
    // Extra headroom: deeper expressions on top of the required counts.
    for (int i = 0; i < 60; ++i) {
        GenConfig cfg = testing::closed_config(rng(), 9);
        cfg.action_alphabet.push_back(Action::visible("c"));
        std::mt19937_64 grng(cfg.seed);
        process(build_lts({random_expr(cfg, grng)}).lts);
    }
    // Extended-system LTSs from open expressions (variable-labelled edges).
    for (int i = 0; i < 150; ++i) {
        GenConfig cfg = testing::open_config(rng(), 6);
        std::mt19937_64 grng(cfg.seed);
        process(build_lts({random_expr(cfg, grng), random_expr(cfg, grng)}, true).lts);
    }
    sweep_done = true;
}

std::pair<bool, std::string> backend_agreement() {
    run_sweep();
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d instances (max %zu states), %d mismatches", sweep.instances,
                  sweep.max_states, sweep.backend_mismatches);
    return {sweep.backend_mismatches == 0, buf};
}

std::pair<bool, std::string> condition_self_verification() {
    run_sweep();
    return {sweep.self_verification_failures == 0,
            std::to_string(sweep.instances) + " partitions checked for {T, D', D''} + block-local D, " +
                std::to_string(sweep.self_verification_failures) + " failures"};
}

std::pair<bool, std::string> stuttering_property() {
    run_sweep();
    return {sweep.stuttering_failures == 0,
            std::to_string(sweep.instances) + " partitions, " +
                std::to_string(sweep.stuttering_failures) + " stuttering violations"};
}

std::pair<bool, std::string> congruence() {
    GenConfig cfg;
    cfg.seed = 0xACCE5505;
    Report r = congruence_campaign(500, cfg);
    return {r.violations == 0,
            std::to_string(r.cases_run) + " seeded pairs, " + std::to_string(r.violations) + " violations"};
}

std::pair<bool, std::string> coarsest() {
    GenConfig cfg;
    cfg.seed = 0xACCE5506;
    Report r = coarsest_campaign(300, cfg);
    return {r.violations == 0,
            std::to_string(r.cases_run) + " random pairs, " + std::to_string(r.violations) + " mismatches"};
}

std::pair<bool, std::string> upto_pipeline() {
    std::mt19937_64 rng(0xACCE5507);
    VarName x("X");
    int cases = 0, unknowns = 0, disagreements = 0, not_verified = 0, seed_misses = 0;
    while (cases < 100) {
        GenConfig cfg = testing::open_config(rng(), 4);
        std::mt19937_64 grng(cfg.seed);
        Expr e = random_expr(cfg, grng);
        Expr f = equivalent_variant(e, 1 + static_cast<int>(rng() % 3), rng());
        if (!check_open_rooted(e, f, x).ok()) {
            ++seed_misses; // rewrites must preserve the relation; count loudly
            continue;
        }
        ++cases;
        Uef uef = build_uef(e, f, x);
        Verdict v = verify_upto(uef.pairs, uef.host.lts);
        Verdict direct = check_rooted(canonical(Expr::rec(x, e)), canonical(Expr::rec(x, f)));
        if (v.outcome == Outcome::unknown) ++unknowns;
        if (!v.ok()) ++not_verified;
        if (v.ok() != direct.ok()) ++disagreements;
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "%d pairs: %d unverified, %d unknown, %d disagreements, %d seeding misses", cases,
                  not_verified, unknowns, disagreements, seed_misses);
    return {not_verified == 0 && unknowns == 0 && disagreements == 0 && seed_misses == 0, buf};
}

std::pair<bool, std::string> substitution_transfer() {
    std::mt19937_64 rng(0xACCE5508);
    VarName x("X");
    int bad = 0;
    for (int i = 0; i < 500; ++i) {
        GenConfig ecfg = testing::open_config(rng(), 5);
        std::mt19937_64 ergn(ecfg.seed);
        Expr e = random_expr(ecfg, ergn);
        GenConfig pcfg = testing::closed_config(rng(), 4);
        std::mt19937_64 prgn(pcfg.seed);
        Expr p = random_expr(pcfg, prgn);
        if (!testing::check_substitution_transfer(e, x, p).empty()) ++bad;
        if (!testing::check_rec_unfolding_transfer(e, x).empty()) ++bad;
    }
    return {bad == 0, "500 instances of substitution + rec-unfolding transfer, " + std::to_string(bad) + " violations"};
}

std::pair<bool, std::string> open_term_characterisation() {
    std::mt19937_64 rng(0xACCE5509);
    VarName x("X");
    int bad = 0;
    for (int i = 0; i < 300; ++i) {
        GenConfig cfg = testing::open_config(rng(), 4);
        std::mt19937_64 grng(cfg.seed);
        Expr e = random_expr(cfg, grng);
        Expr f = (i % 3 == 0) ? equivalent_variant(e, 2, rng()) : random_expr(cfg, grng);
        if (!testing::check_open_instantiation_agreement(e, f, x, rng).empty()) ++bad;
    }
    return {bad == 0, "300 pairs cross-checked, " + std::to_string(bad) + " mismatches"};
}

} // namespace

int main() {
    criterion(1, "fixed-example suite", fixed_examples);
    criterion(2, "backend oracle equivalence", backend_agreement);
    criterion(3, "condition self-verification", condition_self_verification);
    criterion(4, "stuttering property", stuttering_property);
    criterion(5, "congruence campaign", congruence);
    criterion(6, "coarsest-congruence iff", coarsest);
    criterion(7, "up-to pipeline", upto_pipeline);
    criterion(8, "substitution transfer", substitution_transfer);
    criterion(9, "open-term characterisation", open_term_characterisation);

    if (failures == 0)
        std::printf("acceptance: all 9 criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures;
}
