#include "dpbb/semantics.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "dpbb/errors.hpp"

namespace dpbb {

namespace {

void sort_moves(std::vector<std::pair<Label, Expr>>& moves) {
    std::sort(moves.begin(), moves.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return print(a.second) < print(b.second);
    });
    moves.erase(std::unique(moves.begin(), moves.end(),
                            [](const auto& a, const auto& b) {
                                return a.first == b.first && print(a.second) == print(b.second);
                            }),
                moves.end());
}

} // namespace

const std::vector<std::pair<Label, Expr>>& TransitionEngine::transitions(const Expr& e) {
    Expr c = canonical(e);
    std::string key = print(c);
    auto it = memo_.find(key);
    if (it != memo_.end() && it->second.state == Entry::State::done) return it->second.moves;
    auto [moves, low] = derive(c, 0);
    (void)low; // the outermost goal is never contaminated
    auto& entry = memo_[key];
    entry.state = Entry::State::done;
    entry.moves = std::move(moves);
    return entry.moves;
}

std::pair<std::vector<std::pair<Label, Expr>>, int> TransitionEngine::derive(const Expr& e, int depth) {
    std::string key = print(e);
    if (auto it = memo_.find(key); it != memo_.end()) {
        if (it->second.state == Entry::State::done) return {it->second.moves, std::numeric_limits<int>::max()};
        // In-progress goal: contributes nothing on this path (least fixpoint).
        return {{}, it->second.depth};
    }
    {
        Entry& entry = memo_[key];
        entry.state = Entry::State::in_progress;
        entry.depth = depth;
    }

    std::vector<std::pair<Label, Expr>> moves;
    int low = std::numeric_limits<int>::max();
    switch (e.kind()) {
    case Expr::Kind::nil:
        break;
    case Expr::Kind::var:
        if (extended_) moves.emplace_back(Label::var(e.var_name()), Expr::nil());
        break;
    case Expr::Kind::prefix:
        moves.emplace_back(Label::act(e.action()), canonical(e.body()));
        break;
    case Expr::Kind::choice: {
        auto [lm, llow] = derive(canonical(e.left()), depth + 1);
        auto [rm, rlow] = derive(canonical(e.right()), depth + 1);
        moves = std::move(lm);
        moves.insert(moves.end(), rm.begin(), rm.end());
        low = std::min(llow, rlow);
        break;
    }
    case Expr::Kind::rec: {
        Expr unfolding = substitute(e.body(), {{e.var_name(), e}});
        auto [um, ulow] = derive(unfolding, depth + 1);
        moves = std::move(um);
        low = ulow;
        break;
    }
    }
    sort_moves(moves);

    if (low >= depth) {
        // No dependency on a goal still on the stack below us: the set is
        // exact and can be recorded.
        Entry& entry = memo_[key];
        entry.state = Entry::State::done;
        entry.moves = moves;
    } else {
        memo_.erase(key);
    }
    return {std::move(moves), low};
}

std::vector<std::pair<Label, Expr>> transitions(const Expr& e, bool extended) {
    TransitionEngine engine(extended);
    return engine.transitions(e);
}

ReachSet reachable(const Expr& e, bool extended, std::size_t state_cap) {
    TransitionEngine engine(extended);
    ReachSet out;
    out.seed = canonical(e);
    std::unordered_map<std::string, std::size_t> seen;
    std::deque<Expr> work;
    work.push_back(out.seed);
    seen.emplace(print(out.seed), 0);
    out.members.push_back(out.seed);
    while (!work.empty()) {
        Expr cur = std::move(work.front());
        work.pop_front();
        for (const auto& [label, target] : engine.transitions(cur)) {
            std::string name = print(target);
            if (!seen.count(name)) {
                if (out.members.size() >= state_cap)
                    throw resource_limit_error("reachable set exceeds state cap (" +
                                               std::to_string(state_cap) + ") from " + print(e));
                seen.emplace(name, out.members.size());
                out.members.push_back(target);
                work.push_back(target);
            }
            out.edges.push_back(Transition{cur, label, target});
        }
    }
    return out;
}

BuiltLts build_lts(std::span<const Expr> roots, bool extended, std::size_t state_cap) {
    TransitionEngine engine(extended);
    BuiltLts out;
    std::unordered_map<std::string, StateId> index;
    std::deque<StateId> work;

    auto intern = [&](const Expr& canon) -> StateId {
        std::string name = print(canon);
        if (auto it = index.find(name); it != index.end()) return it->second;
        if (out.lts.num_states() >= state_cap)
            throw resource_limit_error("LTS exceeds state cap (" + std::to_string(state_cap) + ")");
        StateId s = out.lts.add_state(canon);
        index.emplace(std::move(name), s);
        work.push_back(s);
        return s;
    };

    for (const Expr& r : roots) out.roots.push_back(intern(canonical(r)));
    while (!work.empty()) {
        StateId s = work.front();
        work.pop_front();
        for (const auto& [label, target] : engine.transitions(out.lts.state_expr(s)))
            out.lts.add_edge(s, label, intern(target));
    }
    out.lts.finalize();
    return out;
}

BuiltLts build_lts(std::initializer_list<Expr> roots, bool extended, std::size_t state_cap) {
    return build_lts(std::span<const Expr>(roots.begin(), roots.size()), extended, state_cap);
}

} // namespace dpbb
