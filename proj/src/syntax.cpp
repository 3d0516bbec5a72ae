#include "dpbb/syntax.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <unordered_set>

namespace dpbb {

namespace {

bool lower_ident(const std::string& s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

bool upper_ident(const std::string& s) {
    if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

} // namespace

Action Action::visible(std::string name) {
    if (name == "tau" || name == "rec" || !lower_ident(name))
        throw std::invalid_argument("invalid visible action name: '" + name + "'");
    return Action(std::move(name));
}

VarName::VarName(std::string name) : name_(std::move(name)) {
    if (!upper_ident(name_))
        throw std::invalid_argument("invalid recursion variable name: '" + name_ + "'");
}

std::string Label::token() const {
    if (is_var()) return "var:" + var_->str();
    return action_.token();
}

// ---------------------------------------------------------------------------
// Expr nodes

struct Expr::Node {
    Kind kind;
    Action act = Action::tau();             // prefix
    std::optional<VarName> var;             // var / rec binder
    std::shared_ptr<const Node> child0;     // prefix body, choice left, rec body
    std::shared_ptr<const Node> child1;     // choice right
    bool canonical_root = false;            // set only by canonical()/parse
};

Expr Expr::nil() {
    static const auto n = std::make_shared<const Node>(Node{Kind::nil, Action::tau(), {}, nullptr, nullptr, true});
    return Expr(n);
}

Expr Expr::var(VarName v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::var;
    n->var = std::move(v);
    n->canonical_root = true; // a bare free variable is its own canonical form
    return Expr(std::move(n));
}

Expr Expr::prefix(Action a, Expr body) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::prefix;
    n->act = std::move(a);
    n->child0 = std::move(body.node_);
    return Expr(std::move(n));
}

Expr Expr::choice(Expr left, Expr right) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::choice;
    n->child0 = std::move(left.node_);
    n->child1 = std::move(right.node_);
    return Expr(std::move(n));
}

Expr Expr::rec(VarName binder, Expr body) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::rec;
    n->var = std::move(binder);
    n->child0 = std::move(body.node_);
    return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const Action& Expr::action() const { return node_->act; }
const VarName& Expr::var_name() const { return *node_->var; }
Expr Expr::body() const { return Expr(node_->child0); }
Expr Expr::left() const { return Expr(node_->child0); }
Expr Expr::right() const { return Expr(node_->child1); }

std::size_t Expr::node_count() const {
    switch (kind()) {
    case Kind::nil:
    case Kind::var: return 1;
    case Kind::prefix:
    case Kind::rec: return 1 + body().node_count();
    case Kind::choice: return 1 + left().node_count() + right().node_count();
    }
    return 1;
}

bool Expr::equal(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Kind::nil: return true;
    case Kind::var: return a.var_name() == b.var_name();
    case Kind::prefix: return a.action() == b.action() && equal(a.body(), b.body());
    case Kind::choice: return equal(a.left(), b.left()) && equal(a.right(), b.right());
    case Kind::rec: return a.var_name() == b.var_name() && equal(a.body(), b.body());
    }
    return false;
}

bool is_canonical_flagged(const Expr& e) { return e.node_->canonical_root; }

// ---------------------------------------------------------------------------
// Free variables and predicates

namespace {

void free_vars_walk(const Expr& e, std::set<VarName>& bound, std::set<VarName>& out) {
    switch (e.kind()) {
    case Expr::Kind::nil: return;
    case Expr::Kind::var:
        if (!bound.count(e.var_name())) out.insert(e.var_name());
        return;
    case Expr::Kind::prefix: free_vars_walk(e.body(), bound, out); return;
    case Expr::Kind::choice:
        free_vars_walk(e.left(), bound, out);
        free_vars_walk(e.right(), bound, out);
        return;
    case Expr::Kind::rec: {
        auto [it, inserted] = bound.insert(e.var_name());
        free_vars_walk(e.body(), bound, out);
        if (inserted) bound.erase(it);
        return;
    }
    }
}

void all_names_walk(const Expr& e, std::set<std::string>& out) {
    switch (e.kind()) {
    case Expr::Kind::nil: return;
    case Expr::Kind::var: out.insert(e.var_name().str()); return;
    case Expr::Kind::prefix: all_names_walk(e.body(), out); return;
    case Expr::Kind::choice:
        all_names_walk(e.left(), out);
        all_names_walk(e.right(), out);
        return;
    case Expr::Kind::rec:
        out.insert(e.var_name().str());
        all_names_walk(e.body(), out);
        return;
    }
}

} // namespace

std::set<VarName> free_vars(const Expr& e) {
    std::set<VarName> bound, out;
    free_vars_walk(e, bound, out);
    return out;
}

bool is_closed(const Expr& e) { return free_vars(e).empty(); }

bool is_x_closed(const Expr& e, const VarName& v) {
    for (const auto& w : free_vars(e))
        if (w != v) return false;
    return true;
}

bool exposed(const VarName& v, const Expr& e) {
    switch (e.kind()) {
    case Expr::Kind::var: return e.var_name() == v;
    case Expr::Kind::rec: return e.var_name() != v && exposed(v, e.body());
    case Expr::Kind::choice: return exposed(v, e.left()) || exposed(v, e.right());
    default: return false;
    }
}

// ---------------------------------------------------------------------------
// Canonicalization

namespace {

// Canonical binder name sequence: X, Y, Z, X1, Y1, Z1, X2, ...
std::string canonical_name(std::size_t idx) {
    static const char letters[3] = {'X', 'Y', 'Z'};
    std::string s(1, letters[idx % 3]);
    if (idx >= 3) s += std::to_string(idx / 3);
    return s;
}

struct CanonCtx {
    std::set<std::string> forbidden; // free vars of the whole expression
    std::vector<std::string> enclosing;

    bool taken(const std::string& n) const {
        if (forbidden.count(n)) return true;
        for (const auto& m : enclosing)
            if (m == n) return true;
        return false;
    }

    std::string fresh() const {
        for (std::size_t i = 0;; ++i) {
            std::string n = canonical_name(i);
            if (!taken(n)) return n;
        }
    }
};

Expr canon_walk(const Expr& e, CanonCtx& ctx, std::map<VarName, VarName>& env) {
    switch (e.kind()) {
    case Expr::Kind::nil: return Expr::nil();
    case Expr::Kind::var: {
        auto it = env.find(e.var_name());
        return Expr::var(it == env.end() ? e.var_name() : it->second);
    }
    case Expr::Kind::prefix: return Expr::prefix(e.action(), canon_walk(e.body(), ctx, env));
    case Expr::Kind::choice: {
        Expr l = canon_walk(e.left(), ctx, env);
        Expr r = canon_walk(e.right(), ctx, env);
        return Expr::choice(std::move(l), std::move(r));
    }
    case Expr::Kind::rec: {
        VarName fresh(ctx.fresh());
        ctx.enclosing.push_back(fresh.str());
        auto saved = env.find(e.var_name());
        std::optional<VarName> old;
        if (saved != env.end()) old = saved->second;
        env.insert_or_assign(e.var_name(), fresh);
        Expr b = canon_walk(e.body(), ctx, env);
        if (old)
            env.insert_or_assign(e.var_name(), *old);
        else
            env.erase(e.var_name());
        ctx.enclosing.pop_back();
        return Expr::rec(std::move(fresh), std::move(b));
    }
    }
    return Expr::nil();
}

} // namespace

Expr canonical(const Expr& e) {
    if (is_canonical_flagged(e)) return e;
    CanonCtx ctx;
    for (const auto& v : free_vars(e)) ctx.forbidden.insert(v.str());
    std::map<VarName, VarName> env;
    Expr out = canon_walk(e, ctx, env);
    // Flag the root so canonical() is O(1) on already-canonical values.
    const_cast<Expr::Node*>(out.node_.get())->canonical_root = true;
    return out;
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

using SubstMap = std::map<VarName, Expr>;

Expr subst_walk(const Expr& e, const SubstMap& subs, std::set<std::string>& avoid, std::size_t& fresh_counter) {
    switch (e.kind()) {
    case Expr::Kind::nil: return Expr::nil();
    case Expr::Kind::var: {
        auto it = subs.find(e.var_name());
        return it == subs.end() ? e : it->second;
    }
    case Expr::Kind::prefix: return Expr::prefix(e.action(), subst_walk(e.body(), subs, avoid, fresh_counter));
    case Expr::Kind::choice: {
        Expr l = subst_walk(e.left(), subs, avoid, fresh_counter);
        Expr r = subst_walk(e.right(), subs, avoid, fresh_counter);
        return Expr::choice(std::move(l), std::move(r));
    }
    case Expr::Kind::rec: {
        SubstMap inner = subs;
        inner.erase(e.var_name()); // bound occurrences are untouched
        // Drop entries for variables without a free occurrence in the body,
        // so irrelevant images cannot force a rename.
        std::set<VarName> fv = free_vars(e.body());
        for (auto it = inner.begin(); it != inner.end();)
            it = fv.count(it->first) ? std::next(it) : inner.erase(it);
        if (inner.empty()) return e;
        // Rename the binder if it would capture a free variable of an image.
        bool capture = false;
        for (const auto& entry : inner)
            if (free_vars(entry.second).count(e.var_name())) { capture = true; break; }
        if (!capture)
            return Expr::rec(e.var_name(), subst_walk(e.body(), inner, avoid, fresh_counter));
        std::string fresh;
        do {
            fresh = "T__" + std::to_string(fresh_counter++);
        } while (avoid.count(fresh));
        avoid.insert(fresh);
        VarName fv_name(fresh);
        inner.insert_or_assign(e.var_name(), Expr::var(fv_name));
        return Expr::rec(std::move(fv_name), subst_walk(e.body(), inner, avoid, fresh_counter));
    }
    }
    return Expr::nil();
}

} // namespace

Expr substitute(const Expr& e, const std::vector<std::pair<VarName, Expr>>& subs) {
    SubstMap m;
    std::set<std::string> avoid;
    all_names_walk(e, avoid);
    for (const auto& [v, img] : subs) {
        m.insert_or_assign(v, img);
        all_names_walk(img, avoid);
    }
    std::size_t fresh_counter = 0;
    return canonical(subst_walk(e, m, avoid, fresh_counter));
}

Expr action_power(const Action& a, std::size_t n) {
    Expr e = Expr::nil();
    for (std::size_t i = 0; i < n; ++i) e = Expr::prefix(a, std::move(e));
    return canonical(e);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// True when the rendered form of e ends in an open rec body that would
// swallow a following "+ ...".
bool open_right_edge(const Expr& e) {
    switch (e.kind()) {
    case Expr::Kind::rec: return true;
    case Expr::Kind::prefix: return e.body().kind() == Expr::Kind::choice ? false : open_right_edge(e.body());
    case Expr::Kind::choice: return e.right().kind() == Expr::Kind::choice ? false : open_right_edge(e.right());
    default: return false;
    }
}

void render(const Expr& e, std::string& out);

void render_prefix_level(const Expr& e, std::string& out) {
    switch (e.kind()) {
    case Expr::Kind::nil: out += '0'; return;
    case Expr::Kind::var: out += e.var_name().str(); return;
    case Expr::Kind::prefix:
        out += e.action().token();
        out += '.';
        if (e.body().kind() == Expr::Kind::choice) {
            out += '(';
            render(e.body(), out);
            out += ')';
        } else {
            render_prefix_level(e.body(), out);
        }
        return;
    case Expr::Kind::rec:
        out += "rec ";
        out += e.var_name().str();
        out += ". ";
        render(e.body(), out);
        return;
    case Expr::Kind::choice:
        out += '(';
        render(e, out);
        out += ')';
        return;
    }
}

void render(const Expr& e, std::string& out) {
    if (e.kind() != Expr::Kind::choice) {
        render_prefix_level(e, out);
        return;
    }
    // Flatten the left spine: choice is left-associated.
    std::vector<Expr> ops;
    Expr cur = e;
    while (cur.kind() == Expr::Kind::choice) {
        ops.push_back(cur.right());
        cur = cur.left();
    }
    ops.push_back(cur);
    for (std::size_t i = ops.size(); i-- > 0;) {
        const Expr& op = ops[i];
        bool last = (i == 0); // ops is in reverse order
        bool parens = op.kind() == Expr::Kind::choice || (!last && open_right_edge(op));
        if (parens) out += '(';
        if (op.kind() == Expr::Kind::choice)
            render(op, out);
        else
            render_prefix_level(op, out);
        if (parens) out += ')';
        if (!last) out += " + ";
    }
}

} // namespace

std::string print(const Expr& e) {
    std::string out;
    render(canonical(e), out);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
    enum class Type { zero, plus, dot, lparen, rparen, ident_lower, ident_upper, kw_rec, kw_tau, end };
    Type type;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
            ++pos_;
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= text_.size()) { tok_.type = Token::Type::end; tok_.text.clear(); return; }
        char c = text_[pos_];
        auto single = [&](Token::Type t) {
            tok_.type = t;
            tok_.text = std::string(1, c);
            ++pos_; ++col_;
        };
        switch (c) {
        case '+': single(Token::Type::plus); return;
        case '.': single(Token::Type::dot); return;
        case '(': single(Token::Type::lparen); return;
        case ')': single(Token::Type::rparen); return;
        case '0': single(Token::Type::zero); return;
        default: break;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_; ++col_;
            }
            tok_.text = text_.substr(start, pos_ - start);
            if (tok_.text == "rec") tok_.type = Token::Type::kw_rec;
            else if (tok_.text == "tau") tok_.type = Token::Type::kw_tau;
            else if (std::isupper(static_cast<unsigned char>(tok_.text[0]))) tok_.type = Token::Type::ident_upper;
            else tok_.type = Token::Type::ident_lower;
            return;
        }
        throw parse_error("unexpected character '" + std::string(1, c) + "'", line_, col_);
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_{Token::Type::end, "", 1, 1};
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    Expr run() {
        Expr e = parse_choice();
        const Token& t = lex_.peek();
        if (t.type != Token::Type::end)
            throw parse_error("unexpected token '" + t.text + "'", t.line, t.col);
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) {
        const Token& t = lex_.peek();
        throw parse_error(msg + (t.type == Token::Type::end ? " at end of input" : " at '" + t.text + "'"),
                          t.line, t.col);
    }

    Expr parse_choice() {
        Expr e = parse_prefix();
        while (lex_.peek().type == Token::Type::plus) {
            lex_.next();
            e = Expr::choice(std::move(e), parse_prefix());
        }
        return e;
    }

    Expr parse_prefix() {
        // { act "." } atom  -- an action is committed when followed by '.'.
        std::vector<Action> acts;
        for (;;) {
            const Token& t = lex_.peek();
            if (t.type == Token::Type::kw_tau || t.type == Token::Type::ident_lower) {
                Token a = lex_.next();
                if (lex_.peek().type != Token::Type::dot)
                    fail("expected '.' after action '" + a.text + "'");
                lex_.next();
                acts.push_back(a.type == Token::Type::kw_tau ? Action::tau() : Action::visible(a.text));
            } else {
                break;
            }
        }
        Expr e = parse_atom();
        for (std::size_t i = acts.size(); i-- > 0;) e = Expr::prefix(acts[i], std::move(e));
        return e;
    }

    Expr parse_atom() {
        const Token& t = lex_.peek();
        switch (t.type) {
        case Token::Type::zero:
            lex_.next();
            return Expr::nil();
        case Token::Type::ident_upper: {
            Token v = lex_.next();
            return Expr::var(VarName(v.text));
        }
        case Token::Type::kw_rec: {
            lex_.next();
            if (lex_.peek().type != Token::Type::ident_upper) fail("expected recursion variable after 'rec'");
            Token v = lex_.next();
            if (lex_.peek().type != Token::Type::dot) fail("expected '.' after 'rec " + v.text + "'");
            lex_.next();
            Expr body = parse_choice();
            return Expr::rec(VarName(v.text), std::move(body));
        }
        case Token::Type::lparen: {
            lex_.next();
            Expr e = parse_choice();
            if (lex_.peek().type != Token::Type::rparen) fail("expected ')'");
            lex_.next();
            return e;
        }
        default:
            fail("expected an expression");
        }
    }

    Lexer lex_;
};

} // namespace

Expr parse(const std::string& text) { return canonical(Parser(text).run()); }

} // namespace dpbb
