#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dpbb/errors.hpp"
#include "dpbb/syntax.hpp"

namespace dpbb {

using StateId = std::uint32_t;
using LabelId = std::uint32_t;
using BlockId = std::uint32_t;

struct Edge {
    LabelId label;
    StateId target;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Finite labelled transition system. States carry canonical expressions as
/// display names; adjacency lists are deduplicated and sorted once the LTS
/// is finalized. Immutable after finalize() and safe for concurrent readers.
class Lts {
public:
    StateId add_state(Expr e);
    void add_edge(StateId src, const Label& label, StateId dst);
    /// Sorts the label table, remaps edge label ids accordingly, and sorts +
    /// dedups adjacency lists. Must be called before queries.
    void finalize();
    bool finalized() const { return finalized_; }

    std::size_t num_states() const { return states_.size(); }
    std::size_t num_edges() const;
    std::size_t num_labels() const { return labels_.size(); }

    const Expr& state_expr(StateId s) const { return states_[s]; }
    const std::string& state_name(StateId s) const { return names_[s]; }
    std::span<const Edge> out(StateId s) const { return out_[s]; }
    const Label& label(LabelId l) const { return labels_[l]; }
    bool is_tau(LabelId l) const { return labels_[l].is_tau(); }

    /// Looks a state up by its canonical print (first match for duplicates).
    std::optional<StateId> find_state(const std::string& canonical_print) const;
    std::optional<StateId> find_state(const Expr& e) const { return find_state(print(e)); }

    /// States reachable from s following edges of any label.
    std::vector<StateId> reachable_from(StateId s) const;
    std::vector<StateId> reachable_from(std::span<const StateId> roots) const;

private:
    LabelId intern_label(const Label& l);

    std::vector<Expr> states_;
    std::vector<std::string> names_;
    std::vector<Label> labels_;
    std::unordered_map<std::string, LabelId> label_index_;
    std::vector<std::vector<Edge>> out_;
    std::unordered_map<std::string, StateId> name_index_;
    bool finalized_ = false;
};

/// Side-by-side union of two LTSs; states of b are offset by a.num_states().
Lts disjoint_union(const Lts& a, const Lts& b);

/// Finite stand-in for an infinite tau-run: a simple stem from the origin
/// into a simple tau-cycle. The junction state ends the stem and starts the
/// cycle; no other state repeats.
struct Lasso {
    std::vector<StateId> stem;  // origin ... junction
    std::vector<StateId> cycle; // junction ... last (implicit edge back)

    std::vector<StateId> state_set() const;
    friend bool operator==(const Lasso&, const Lasso&) = default;
};

/// Equivalence partition of an LTS's states with a per-block divergence
/// marker (some state of the block has an infinite tau-path inside it).
/// Canonical form: blocks sorted by least member, members sorted.
struct Partition {
    std::vector<BlockId> block_of;
    std::vector<std::vector<StateId>> blocks;
    std::vector<bool> divergent;

    static Partition from_block_of(std::vector<BlockId> block_of);
    static Partition identity(std::size_t n);
    void canonicalize();

    friend bool operator==(const Partition&, const Partition&) = default;
};

/// {s' : s =tau=>* s'} including s itself.
std::vector<StateId> tau_closure(const Lts& l, StateId s);

/// True iff an infinite tau-path from s exists visiting only states in
/// `allowed` (a tau-cycle inside `allowed` reachable from s inside it).
bool diverges_within(const Lts& l, StateId s, const std::vector<bool>& allowed);
bool diverges_within_all(const Lts& l, StateId s); // allowed = all states

/// All lassos with simple stem and simple cycle starting at s. Every
/// infinite tau-path's state set contains some enumerated lasso's state set.
/// Throws resource_limit_error beyond `cap` lassos.
std::vector<Lasso> simple_lassos(const Lts& l, StateId s, std::size_t cap = default_lasso_cap);

/// Block-level LTS: tau-edges inside a block are dropped unless the block is
/// divergent, in which case one tau self-loop is kept. Block states carry
/// the expression of their least member.
Lts quotient(const Lts& l, const Partition& p);

/// Per-block divergence flags for an arbitrary partition of l.
std::vector<bool> block_divergence(const Lts& l, const Partition& p);

// Aldebaran (.aut) export/import. Labels: "tau", visible name, or "var:X".
void write_aut(std::ostream& os, const Lts& l, StateId root = 0);
struct AutGraph {
    Lts lts;
    StateId root;
};
AutGraph read_aut(std::istream& is);

} // namespace dpbb
