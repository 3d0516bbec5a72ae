#include "dpbb/lts.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace dpbb {

StateId Lts::add_state(Expr e) {
    assert(!finalized_);
    Expr c = canonical(e);
    states_.push_back(c);
    names_.push_back(print(c));
    out_.emplace_back();
    return static_cast<StateId>(states_.size() - 1);
}

LabelId Lts::intern_label(const Label& l) {
    auto [it, inserted] = label_index_.try_emplace(l.token(), static_cast<LabelId>(labels_.size()));
    if (inserted) labels_.push_back(l);
    return it->second;
}

void Lts::add_edge(StateId src, const Label& label, StateId dst) {
    assert(!finalized_);
    assert(src < states_.size() && dst < states_.size());
    out_[src].push_back(Edge{intern_label(label), dst});
}

void Lts::finalize() {
    assert(!finalized_);
    // Remap label ids so that id order equals the Label total order
    // (tau < visible < var-label, then by name).
    std::vector<LabelId> order(labels_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](LabelId a, LabelId b) { return labels_[a] < labels_[b]; });
    std::vector<LabelId> remap(labels_.size());
    std::vector<Label> sorted;
    sorted.reserve(labels_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        remap[order[i]] = static_cast<LabelId>(i);
        sorted.push_back(labels_[order[i]]);
    }
    labels_ = std::move(sorted);
    label_index_.clear();
    for (std::size_t i = 0; i < labels_.size(); ++i) label_index_.emplace(labels_[i].token(), static_cast<LabelId>(i));
    for (auto& edges : out_) {
        for (auto& e : edges) e.label = remap[e.label];
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }
    for (std::size_t s = 0; s < names_.size(); ++s) name_index_.try_emplace(names_[s], static_cast<StateId>(s));
    finalized_ = true;
}

std::size_t Lts::num_edges() const {
    std::size_t n = 0;
    for (const auto& edges : out_) n += edges.size();
    return n;
}

std::optional<StateId> Lts::find_state(const std::string& canonical_print) const {
    auto it = name_index_.find(canonical_print);
    if (it == name_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<StateId> Lts::reachable_from(StateId s) const {
    StateId roots[1] = {s};
    return reachable_from(std::span<const StateId>(roots, 1));
}

std::vector<StateId> Lts::reachable_from(std::span<const StateId> roots) const {
    std::vector<bool> seen(num_states(), false);
    std::deque<StateId> work;
    std::vector<StateId> out;
    for (StateId r : roots)
        if (!seen[r]) {
            seen[r] = true;
            work.push_back(r);
            out.push_back(r);
        }
    while (!work.empty()) {
        StateId s = work.front();
        work.pop_front();
        for (const Edge& e : out_[s])
            if (!seen[e.target]) {
                seen[e.target] = true;
                work.push_back(e.target);
                out.push_back(e.target);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Lts disjoint_union(const Lts& a, const Lts& b) {
    Lts u;
    for (std::size_t s = 0; s < a.num_states(); ++s) u.add_state(a.state_expr(static_cast<StateId>(s)));
    for (std::size_t s = 0; s < b.num_states(); ++s) u.add_state(b.state_expr(static_cast<StateId>(s)));
    StateId off = static_cast<StateId>(a.num_states());
    for (std::size_t s = 0; s < a.num_states(); ++s)
        for (const Edge& e : a.out(static_cast<StateId>(s)))
            u.add_edge(static_cast<StateId>(s), a.label(e.label), e.target);
    for (std::size_t s = 0; s < b.num_states(); ++s)
        for (const Edge& e : b.out(static_cast<StateId>(s)))
            u.add_edge(static_cast<StateId>(s) + off, b.label(e.label), e.target + off);
    u.finalize();
    return u;
}

std::vector<StateId> Lasso::state_set() const {
    std::vector<StateId> s = stem;
    s.insert(s.end(), cycle.begin(), cycle.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

Partition Partition::from_block_of(std::vector<BlockId> block_of) {
    Partition p;
    p.block_of = std::move(block_of);
    BlockId max_b = 0;
    for (BlockId b : p.block_of) max_b = std::max(max_b, b);
    p.blocks.assign(p.block_of.empty() ? 0 : max_b + 1, {});
    for (StateId s = 0; s < p.block_of.size(); ++s) p.blocks[p.block_of[s]].push_back(s);
    p.blocks.erase(std::remove_if(p.blocks.begin(), p.blocks.end(),
                                  [](const auto& b) { return b.empty(); }),
                   p.blocks.end());
    p.divergent.assign(p.blocks.size(), false);
    p.canonicalize();
    return p;
}

Partition Partition::identity(std::size_t n) {
    std::vector<BlockId> ids(n);
    std::iota(ids.begin(), ids.end(), 0u);
    return from_block_of(std::move(ids));
}

void Partition::canonicalize() {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::vector<std::size_t> order(blocks.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return blocks[a].front() < blocks[b].front(); });
    std::vector<std::vector<StateId>> nb;
    std::vector<bool> nd;
    nb.reserve(blocks.size());
    for (std::size_t i : order) {
        nb.push_back(std::move(blocks[i]));
        nd.push_back(i < divergent.size() ? static_cast<bool>(divergent[i]) : false);
    }
    blocks = std::move(nb);
    divergent = std::move(nd);
    for (BlockId b = 0; b < blocks.size(); ++b)
        for (StateId s : blocks[b]) block_of[s] = b;
}

std::vector<StateId> tau_closure(const Lts& l, StateId s) {
    std::vector<bool> seen(l.num_states(), false);
    std::deque<StateId> work{s};
    std::vector<StateId> out{s};
    seen[s] = true;
    while (!work.empty()) {
        StateId cur = work.front();
        work.pop_front();
        for (const Edge& e : l.out(cur))
            if (l.is_tau(e.label) && !seen[e.target]) {
                seen[e.target] = true;
                work.push_back(e.target);
                out.push_back(e.target);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool diverges_within(const Lts& l, StateId s, const std::vector<bool>& allowed) {
    if (!allowed[s]) return false;
    // Tau-reachable set from s inside `allowed`.
    std::vector<bool> reach(l.num_states(), false);
    std::deque<StateId> work{s};
    reach[s] = true;
    while (!work.empty()) {
        StateId cur = work.front();
        work.pop_front();
        for (const Edge& e : l.out(cur))
            if (l.is_tau(e.label) && allowed[e.target] && !reach[e.target]) {
                reach[e.target] = true;
                work.push_back(e.target);
            }
    }
    // Any tau-cycle within the reachable restricted subgraph?
    enum : std::uint8_t { white, grey, black };
    std::vector<std::uint8_t> color(l.num_states(), white);
    // Iterative DFS with call frames (edge indices are positions in out()).
    for (StateId start = 0; start < l.num_states(); ++start) {
        if (!reach[start] || color[start] != white) continue;
        std::vector<std::pair<StateId, std::size_t>> stack{{start, 0}};
        color[start] = grey;
        while (!stack.empty()) {
            auto& [cur, idx] = stack.back();
            auto edges = l.out(cur);
            bool descended = false;
            while (idx < edges.size()) {
                const Edge& e = edges[idx++];
                if (!l.is_tau(e.label) || !reach[e.target]) continue;
                if (color[e.target] == grey) return true; // back edge: cycle
                if (color[e.target] == white) {
                    color[e.target] = grey;
                    stack.emplace_back(e.target, 0);
                    descended = true;
                    break;
                }
            }
            if (!descended && (stack.back().second >= edges.size())) {
                color[cur] = black;
                stack.pop_back();
            }
        }
    }
    return false;
}

bool diverges_within_all(const Lts& l, StateId s) {
    return diverges_within(l, s, std::vector<bool>(l.num_states(), true));
}

std::vector<Lasso> simple_lassos(const Lts& l, StateId s, std::size_t cap) {
    std::vector<Lasso> out;
    std::vector<StateId> path{s};
    std::vector<int> pos_on_path(l.num_states(), -1);
    pos_on_path[s] = 0;

    // DFS over simple tau-paths; frames track the edge cursor per state.
    std::vector<std::size_t> cursor{0};
    while (!cursor.empty()) {
        StateId cur = path.back();
        auto edges = l.out(cur);
        std::size_t& idx = cursor.back();
        bool descended = false;
        while (idx < edges.size()) {
            const Edge& e = edges[idx++];
            if (!l.is_tau(e.label)) continue;
            int j = pos_on_path[e.target];
            if (j >= 0) {
                if (out.size() >= cap)
                    throw resource_limit_error("lasso enumeration exceeds cap (" + std::to_string(cap) + ")");
                Lasso lasso;
                lasso.stem.assign(path.begin(), path.begin() + j + 1);
                lasso.cycle.assign(path.begin() + j, path.end());
                out.push_back(std::move(lasso));
            } else {
                pos_on_path[e.target] = static_cast<int>(path.size());
                path.push_back(e.target);
                cursor.push_back(0);
                descended = true;
                break;
            }
        }
        if (!descended && cursor.back() >= edges.size()) {
            pos_on_path[path.back()] = -1;
            path.pop_back();
            cursor.pop_back();
        }
    }
    return out;
}

std::vector<bool> block_divergence(const Lts& l, const Partition& p) {
    std::vector<bool> out(p.blocks.size(), false);
    for (BlockId b = 0; b < p.blocks.size(); ++b) {
        std::vector<bool> allowed(l.num_states(), false);
        for (StateId s : p.blocks[b]) allowed[s] = true;
        for (StateId s : p.blocks[b])
            if (diverges_within(l, s, allowed)) {
                out[b] = true;
                break;
            }
    }
    return out;
}

Lts quotient(const Lts& l, const Partition& p) {
    Lts q;
    for (const auto& block : p.blocks) q.add_state(l.state_expr(block.front()));
    for (StateId s = 0; s < l.num_states(); ++s) {
        BlockId sb = p.block_of[s];
        for (const Edge& e : l.out(s)) {
            BlockId tb = p.block_of[e.target];
            if (l.is_tau(e.label) && sb == tb) continue; // inert
            q.add_edge(sb, l.label(e.label), tb);
        }
    }
    for (BlockId b = 0; b < p.blocks.size(); ++b)
        if (b < p.divergent.size() && p.divergent[b]) q.add_edge(b, Label::tau(), b);
    q.finalize();
    return q;
}

void write_aut(std::ostream& os, const Lts& l, StateId root) {
    os << "des (" << root << ", " << l.num_edges() << ", " << l.num_states() << ")\n";
    for (StateId s = 0; s < l.num_states(); ++s)
        for (const Edge& e : l.out(s))
            os << "(" << s << ", \"" << l.label(e.label).token() << "\", " << e.target << ")\n";
}

namespace {

Label label_from_token(const std::string& tok) {
    if (tok == "tau") return Label::tau();
    if (tok.rfind("var:", 0) == 0) return Label::var(VarName(tok.substr(4)));
    return Label::act(Action::visible(tok));
}

} // namespace

AutGraph read_aut(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("empty .aut input");
    unsigned long root = 0, edges = 0, states = 0;
    if (std::sscanf(line.c_str(), "des (%lu, %lu, %lu)", &root, &edges, &states) != 3)
        throw std::invalid_argument("malformed .aut header: " + line);
    AutGraph g;
    g.root = static_cast<StateId>(root);
    for (unsigned long s = 0; s < states; ++s)
        g.lts.add_state(Expr::var(VarName("S" + std::to_string(s))));
    for (unsigned long i = 0; i < edges; ++i) {
        if (!std::getline(is, line)) throw std::invalid_argument("truncated .aut input");
        std::size_t q1 = line.find('"');
        std::size_t q2 = line.rfind('"');
        if (q1 == std::string::npos || q2 <= q1) throw std::invalid_argument("malformed .aut edge: " + line);
        unsigned long src = 0, dst = 0;
        if (std::sscanf(line.c_str(), "(%lu,", &src) != 1 ||
            std::sscanf(line.c_str() + q2 + 1, ", %lu)", &dst) != 1)
            throw std::invalid_argument("malformed .aut edge: " + line);
        g.lts.add_edge(static_cast<StateId>(src), label_from_token(line.substr(q1 + 1, q2 - q1 - 1)),
                       static_cast<StateId>(dst));
    }
    g.lts.finalize();
    return g;
}

} // namespace dpbb
