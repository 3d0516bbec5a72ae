#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dpbb/errors.hpp"

namespace dpbb {

/// An action: either the internal action tau or a visible action with a
/// lowercase identifier name. Visible names never collide with "tau".
class Action {
public:
    static Action tau() { return Action(std::string()); }
    static Action visible(std::string name);

    bool is_tau() const { return name_.empty(); }
    const std::string& name() const { return name_; } // empty for tau

    /// Printable token ("tau" or the visible name).
    std::string token() const { return is_tau() ? "tau" : name_; }

    friend bool operator==(const Action&, const Action&) = default;
    friend std::strong_ordering operator<=>(const Action& a, const Action& b) {
        if (a.is_tau() != b.is_tau()) return a.is_tau() ? std::strong_ordering::less : std::strong_ordering::greater;
        return a.name_ <=> b.name_;
    }

private:
    explicit Action(std::string name) : name_(std::move(name)) {}
    std::string name_;
};

/// A recursion variable name: uppercase identifier, lexically disjoint from
/// visible action names.
class VarName {
public:
    explicit VarName(std::string name);

    const std::string& str() const { return name_; }

    friend bool operator==(const VarName&, const VarName&) = default;
    friend std::strong_ordering operator<=>(const VarName&, const VarName&) = default;

private:
    std::string name_;
};

/// Transition label: an action, or a recursion variable used as a label in
/// the extended transition system.
class Label {
public:
    static Label act(Action a) { return Label(std::move(a), {}); }
    static Label tau() { return act(Action::tau()); }
    static Label var(VarName v) { return Label(Action::tau(), std::move(v)); }

    bool is_var() const { return var_.has_value(); }
    bool is_tau() const { return !is_var() && action_.is_tau(); }
    const Action& action() const { return action_; } // valid only when !is_var()
    const VarName& var_name() const { return *var_; }

    /// Token used in .aut output: "tau", the action name, or "var:X".
    std::string token() const;

    friend bool operator==(const Label&, const Label&) = default;
    friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
        if (a.is_var() != b.is_var()) return a.is_var() ? std::strong_ordering::greater : std::strong_ordering::less;
        if (a.is_var()) return *a.var_ <=> *b.var_;
        return a.action_ <=> b.action_;
    }

private:
    Label(Action a, std::optional<VarName> v) : action_(std::move(a)), var_(std::move(v)) {}
    Action action_;
    std::optional<VarName> var_;
};

/// Immutable process expression tree:
///   0 | X | a.E | E + E | rec X. E
/// Values are cheap to copy (shared nodes) and freely shareable.
class Expr {
public:
    enum class Kind { nil, var, prefix, choice, rec };

    Expr() : Expr(nil()) {}

    static Expr nil();
    static Expr var(VarName v);
    static Expr prefix(Action a, Expr body);
    static Expr choice(Expr left, Expr right);
    static Expr rec(VarName binder, Expr body);

    Kind kind() const;
    const Action& action() const;    // prefix
    const VarName& var_name() const; // var, rec binder
    Expr body() const;               // prefix, rec
    Expr left() const;               // choice
    Expr right() const;              // choice

    std::size_t node_count() const;

    /// Structural equality (exact tree, including binder names).
    friend bool operator==(const Expr& a, const Expr& b) { return equal(a, b); }

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static bool equal(const Expr&, const Expr&);
    std::shared_ptr<const Node> node_;

    friend Expr canonical(const Expr&);
    friend bool is_canonical_flagged(const Expr&);
};

/// Parses the concrete syntax:
///   expr   := choice
///   choice := prefix { "+" prefix }
///   prefix := { act "." } atom
///   atom   := "0" | VAR | "rec" VAR "." expr | "(" expr ")"
/// with lowercase identifiers as actions ("tau" for the internal action) and
/// uppercase identifiers as recursion variables. The result is canonicalized.
/// Throws parse_error with line/column information.
Expr parse(const std::string& text);

/// Renders a re-parseable canonical form; alpha-equivalent inputs print
/// identically. Prefix binds tighter than "+", which is left-associated.
std::string print(const Expr& e);

/// Alpha-canonical form: rec binders renamed to a deterministic sequence
/// (X, Y, Z, X1, ...) chosen by a left-to-right walk, skipping names that
/// occur free or are bound by an enclosing binder. Idempotent.
Expr canonical(const Expr& e);

/// Variables with a free occurrence in e.
std::set<VarName> free_vars(const Expr& e);

bool is_closed(const Expr& e);
bool is_x_closed(const Expr& e, const VarName& v); // FV(e) subseteq {v}

/// Whether v is exposed in e: v itself, exposed under a distinct rec binder,
/// or exposed in either branch of a choice.
bool exposed(const VarName& v, const Expr& e);

/// Simultaneous capture-avoiding substitution of free occurrences; the
/// result is canonicalized. Substituting a vector is not in general the same
/// as composing single substitutions.
Expr substitute(const Expr& e, const std::vector<std::pair<VarName, Expr>>& subs);

/// a^n: the n-fold prefix a.a. ... .0.
Expr action_power(const Action& a, std::size_t n);

} // namespace dpbb
