// dpbb: equivalence tooling for basic CCS with recursion.
//
// Subcommands: fmt, lts, check, minimize, verify, upto, fuzz.
// Exit codes: 0 success/equivalent, 1 inequivalent or violation, 2 usage or
// syntax error, 3 resource cap exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpbb/equivalence.hpp"
#include "dpbb/harness.hpp"
#include "dpbb/json_io.hpp"
#include "dpbb/lts.hpp"
#include "dpbb/semantics.hpp"
#include "dpbb/upto.hpp"

namespace {

using namespace dpbb;
using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_inequivalent = 1;
constexpr int exit_usage = 2;
constexpr int exit_resource = 3;

std::size_t env_cap(const char* name, std::size_t fallback) {
    if (const char* v = std::getenv(name)) {
        char* end = nullptr;
        unsigned long long parsed = std::strtoull(v, &end, 10);
        if (end && *end == '\0' && parsed > 0) return static_cast<std::size_t>(parsed);
        std::cerr << "warning: ignoring invalid " << name << "='" << v << "'\n";
    }
    return fallback;
}

// Expressions are accepted inline or as @file references.
Expr read_expr(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw std::invalid_argument("cannot open expression file: " + arg.substr(1));
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }
    return parse(arg);
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << content;
}

struct Caps {
    std::size_t states;
    std::size_t lassos;
};

int cmd_fmt(const std::string& expr_arg) {
    std::cout << print(read_expr(expr_arg)) << "\n";
    return exit_ok;
}

int cmd_lts(const std::string& expr_arg, bool extended, const std::string& out_path, const Caps& caps) {
    BuiltLts built = build_lts({read_expr(expr_arg)}, extended, caps.states);
    std::ostringstream os;
    write_aut(os, built.lts, built.roots[0]);
    write_output(out_path, os.str());
    if (!out_path.empty() && out_path != "-")
        std::cout << built.lts.num_states() << " states, " << built.lts.num_edges() << " edges -> "
                  << out_path << "\n";
    return exit_ok;
}

int cmd_check(const std::string& lhs_arg, const std::string& rhs_arg, const std::string& mode,
              const std::string& open_var, bool as_json, const Caps& caps) {
    Expr lhs = read_expr(lhs_arg), rhs = read_expr(rhs_arg);
    CheckOptions opts;
    opts.state_cap = caps.states;
    std::optional<CheckOutcome> full;
    Verdict v;
    if (!open_var.empty()) {
        VarName x(open_var);
        if (mode == "dpbb") full = check_open_dpbb_full(lhs, rhs, x, opts);
        else if (mode == "rooted") full = check_open_rooted_full(lhs, rhs, x, opts);
        else v = check_open_branching(lhs, rhs, x, opts);
    } else {
        if (mode == "dpbb") full = check_dpbb_full(lhs, rhs, opts);
        else if (mode == "rooted") full = check_rooted_full(lhs, rhs, opts);
        else v = check_branching(lhs, rhs, opts);
    }
    if (full) v = full->verdict;
    if (as_json) {
        nlohmann::json j = verdict_to_json(v, {mode});
        if (v.ok() && full) j["witness_partition"] = partition_to_json(full->partition, full->built.lts);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (v.ok() ? "equivalent" : "inequivalent") << "\n";
    }
    if (!v.ok() && !as_json && v.counterexample)
        std::cerr << "counterexample (" << v.counterexample->condition << "): " << v.counterexample->detail
                  << "\n";
    return v.ok() ? exit_ok : exit_inequivalent;
}

int cmd_minimize(const std::string& expr_arg, const std::string& out_path, const Caps& caps) {
    BuiltLts built = build_lts({read_expr(expr_arg)}, false, caps.states);
    Partition part = refine_dpbb(built.lts);
    Lts quo = quotient(built.lts, part);
    std::ostringstream os;
    write_aut(os, quo, part.block_of[built.roots[0]]);
    write_output(out_path, os.str());
    if (!out_path.empty() && out_path != "-")
        std::cout << built.lts.num_states() << " -> " << quo.num_states() << " states, "
                  << quo.num_edges() << " edges -> " << out_path << "\n";
    return exit_ok;
}

int cmd_verify(const std::string& relation_path, const std::string& conditions_arg,
               const std::vector<std::string>& expr_args, bool as_json, const Caps& caps) {
    std::ifstream in(relation_path);
    if (!in) throw std::invalid_argument("cannot open relation file: " + relation_path);
    json jrel = json::parse(in);
    ParsedRelation parsed = relation_from_json(jrel);

    std::set<Condition> conds;
    std::vector<std::string> cond_names;
    std::stringstream ss(conditions_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "T") conds.insert(Condition::T);
        else if (item == "D") conds.insert(Condition::D);
        else if (item == "Dprime") conds.insert(Condition::Dprime);
        else if (item == "Dsecond") conds.insert(Condition::Dsecond);
        else if (item == "R1R2") conds.insert(Condition::R1R2);
        else throw CLI::ValidationError("--conditions", "unknown condition: " + item);
        cond_names.push_back(item);
    }

    // The LTS is built from the named roots plus every relation member.
    std::vector<Expr> roots;
    for (const auto& a : expr_args) roots.push_back(read_expr(a));
    for (const auto& [a, b] : parsed.pairs) {
        roots.push_back(a);
        roots.push_back(b);
    }
    BuiltLts built = build_lts(std::span<const Expr>(roots.data(), roots.size()), false, caps.states);

    Relation rel;
    rel.symmetric_closure = parsed.symmetric;
    for (const auto& [a, b] : parsed.pairs)
        rel.pairs.emplace_back(*built.lts.find_state(a), *built.lts.find_state(b));
    rel.normalize();

    Verdict v = verify_relation(built.lts, rel, conds, VerifyOptions{caps.lassos});
    if (as_json)
        std::cout << verdict_to_json(v, cond_names).dump(2) << "\n";
    else {
        std::cout << (v.ok() ? "verified" : "violated") << "\n";
        if (!v.ok() && v.counterexample)
            std::cerr << "counterexample (" << v.counterexample->condition << "): pair ("
                      << v.counterexample->p << ", " << v.counterexample->q << "), "
                      << v.counterexample->detail << "\n";
    }
    return v.ok() ? exit_ok : exit_inequivalent;
}

int cmd_upto(const std::string& lhs_arg, const std::string& rhs_arg, const std::string& var,
             bool as_json, const Caps& caps) {
    Expr lhs = read_expr(lhs_arg), rhs = read_expr(rhs_arg);
    VarName x(var);
    UptoOptions opts;
    opts.state_cap = caps.states;
    opts.lasso_cap = caps.lassos;
    RecCongruence rc = conclude_rec_congruence(lhs, rhs, x, opts);
    json j = rec_congruence_to_json(rc);
    if (rc.open_rooted.ok()) {
        Uef uef = build_uef(lhs, rhs, x, opts);
        j["uef"] = uef_to_json(uef);
    }
    if (as_json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "open rooted-equivalent: " << (rc.open_rooted.ok() ? "yes" : "no") << "\n";
        if (rc.universe_size) std::cout << "universe size: " << *rc.universe_size << "\n";
        std::cout << "up-to verification:     "
                  << (rc.upto.ok() ? "holds" : rc.upto.outcome == Outcome::unknown ? "unknown" : "fails")
                  << "\n";
        std::cout << "direct rooted check:    " << (rc.direct.ok() ? "holds" : "fails") << "\n";
    }
    bool ok = rc.open_rooted.ok() ? (rc.upto.ok() && rc.direct.ok() && rc.agreed) : rc.direct.ok();
    return ok ? exit_ok : exit_inequivalent;
}

int cmd_fuzz(const std::string& campaign, int cases, std::uint64_t seed, bool as_json) {
    GenConfig cfg;
    cfg.seed = seed;
    Report r = campaign == "congruence" ? congruence_campaign(cases, cfg) : coarsest_campaign(cases, cfg);
    if (as_json)
        std::cout << report_to_json(r).dump(2) << "\n";
    else
        std::cout << r.campaign << ": " << r.cases_run << " cases, " << r.violations << " violations\n";
    return r.violations == 0 ? exit_ok : exit_inequivalent;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"equivalence tooling for basic CCS with recursion"};
    app.require_subcommand(1);

    Caps caps{env_cap("DPBB_STATE_CAP", default_state_cap), env_cap("DPBB_LASSO_CAP", default_lasso_cap)};

    std::string expr1, expr2, out_path, open_var, var = "X", relation_path, conditions;
    std::vector<std::string> verify_exprs;
    bool extended = false, as_json = false;
    bool mode_dpbb = false, mode_rooted = false, mode_branching = false;
    bool fuzz_congruence = false, fuzz_coarsest = false;
    int cases = 100;
    std::uint64_t seed = 0;

    auto* fmt = app.add_subcommand("fmt", "canonical pretty print");
    fmt->add_option("expr", expr1, "process expression (or @file)")->required();

    auto* lts = app.add_subcommand("lts", "build and export the reachable LTS (.aut)");
    lts->add_option("expr", expr1)->required();
    lts->add_flag("--extended", extended, "use the variables-as-labels extension");
    lts->add_option("--out", out_path, "output .aut file (default stdout)");

    auto* check = app.add_subcommand("check", "decide an equivalence");
    check->add_option("expr1", expr1)->required();
    check->add_option("expr2", expr2)->required();
    check->add_flag("--dpbb", mode_dpbb, "divergence-preserving branching bisimilarity");
    check->add_flag("--rooted", mode_rooted, "rooted divergence-preserving branching bisimilarity");
    check->add_flag("--branching", mode_branching, "divergence-blind branching bisimilarity");
    check->add_option("--open", open_var, "treat inputs as VAR-closed open terms");
    check->add_flag("--json", as_json, "emit a JSON verdict");

    auto* minimize = app.add_subcommand("minimize", "quotient modulo the equivalence");
    minimize->add_option("expr", expr1)->required();
    minimize->add_option("--out", out_path, "output .aut file (default stdout)");

    auto* verify = app.add_subcommand("verify", "verify relational conditions");
    verify->add_option("--relation", relation_path, "JSON file with expression pairs")->required();
    verify->add_option("--conditions", conditions, "comma-separated: T,D,Dprime,Dsecond,R1R2")->required();
    verify->add_option("expr", verify_exprs, "extra root expressions");
    verify->add_flag("--json", as_json);

    auto* upto = app.add_subcommand("upto", "recursion congruence via the up-to pipeline");
    upto->add_option("expr1", expr1)->required();
    upto->add_option("expr2", expr2)->required();
    upto->add_option("--var", var, "recursion variable (default X)");
    upto->add_flag("--json", as_json);

    auto* fuzz = app.add_subcommand("fuzz", "randomized campaigns");
    fuzz->add_flag("--congruence", fuzz_congruence);
    fuzz->add_flag("--coarsest", fuzz_coarsest);
    fuzz->add_option("--cases", cases, "number of cases");
    fuzz->add_option("--seed", seed, "campaign seed");
    fuzz->add_flag("--json", as_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e); // prints the message or requested help text
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (fmt->parsed()) return cmd_fmt(expr1);
        if (lts->parsed()) return cmd_lts(expr1, extended, out_path, caps);
        if (check->parsed()) {
            int modes = int(mode_dpbb) + int(mode_rooted) + int(mode_branching);
            if (modes != 1) {
                std::cerr << "check: exactly one of --dpbb, --rooted, --branching is required\n";
                return exit_usage;
            }
            std::string mode = mode_dpbb ? "dpbb" : mode_rooted ? "rooted" : "branching";
            return cmd_check(expr1, expr2, mode, open_var, as_json, caps);
        }
        if (minimize->parsed()) return cmd_minimize(expr1, out_path, caps);
        if (verify->parsed()) return cmd_verify(relation_path, conditions, verify_exprs, as_json, caps);
        if (upto->parsed()) return cmd_upto(expr1, expr2, var, as_json, caps);
        if (fuzz->parsed()) {
            if (int(fuzz_congruence) + int(fuzz_coarsest) != 1) {
                std::cerr << "fuzz: exactly one of --congruence, --coarsest is required\n";
                return exit_usage;
            }
            return cmd_fuzz(fuzz_congruence ? "congruence" : "coarsest", cases, seed, as_json);
        }
    } catch (const parse_error& e) {
        std::cerr << "syntax error at " << e.line() << ":" << e.column() << ": " << e.what() << "\n";
        return exit_usage;
    } catch (const resource_limit_error& e) {
        std::cerr << "resource cap exceeded: " << e.what() << "\n";
        return exit_resource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
