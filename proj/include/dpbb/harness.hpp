#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dpbb/equivalence.hpp"
#include "dpbb/syntax.hpp"

namespace dpbb {

/// Deterministic random-expression generator configuration. Generation with
/// equal seeds is bit-for-bit reproducible.
struct GenConfig {
    int max_depth = 5;
    std::vector<Action> action_alphabet = {Action::tau(), Action::visible("a"), Action::visible("b")};
    std::vector<VarName> var_pool = {VarName("X"), VarName("Y")}; // binder names
    std::vector<VarName> free_pool = {};                          // allowed free variables
    double rec_probability = 0.3;
    double choice_probability = 0.45;
    std::uint64_t seed = 0;
};

Expr random_expr(const GenConfig& c);
Expr random_expr(const GenConfig& c, std::mt19937_64& rng);

/// Rewrite rules that preserve rooted equivalence: both sides of every rule
/// derive identical transition sets at every instantiation.
enum class RewriteRule { rec_unfold, choice_comm, choice_assoc, choice_unit, choice_idem };

std::string rewrite_rule_name(RewriteRule r);

struct RewriteStep {
    RewriteRule rule;
    std::vector<int> path; // child indices from the root (0 = left/body, 1 = right)
    bool expand = false;   // unit/idem/assoc applied in the growing direction
};

std::vector<RewriteStep> applicable_rewrites(const Expr& e, bool allow_expansion = true,
                                             std::size_t size_cap = 400);
Expr apply_rewrite(const Expr& e, const RewriteStep& step);

/// Applies `steps` random equivalence-preserving rewrites.
Expr equivalent_variant(const Expr& e, int steps, std::uint64_t seed);

struct CampaignCase {
    std::uint64_t case_seed = 0;
    std::string lhs, rhs; // canonical prints of the pair under test
    std::vector<std::pair<std::string, bool>> checks;
    bool violated = false;
};

struct Report {
    std::string campaign;
    std::uint64_t seed = 0;
    int cases_run = 0;
    int violations = 0;
    std::vector<CampaignCase> cases;
    double wall_ms = 0; // excluded from determinism comparisons
};

/// Seeds rooted-equivalent open pairs (rewrite variants plus occasional
/// random pairs filtered by the checker) and asserts compatibility of
/// prefix, both choice contexts, and rec-binding.
Report congruence_campaign(int n_cases, const GenConfig& c);

/// Random closed pairs (P, Q): check_rooted(P, Q) must coincide with
/// check_dpbb(P + a^(n+1), Q + a^(n+1)) where n is the pair's fresh depth.
Report coarsest_campaign(int n_cases, const GenConfig& c);

} // namespace dpbb
