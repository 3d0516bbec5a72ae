#include "dpbb/json_io.hpp"

namespace dpbb {

using nlohmann::json;

json verdict_to_json(const Verdict& v, const std::vector<std::string>& conditions) {
    json j;
    switch (v.outcome) {
    case Outcome::holds: j["result"] = true; j["status"] = "holds"; break;
    case Outcome::fails: j["result"] = false; j["status"] = "fails"; break;
    case Outcome::unknown: j["result"] = nullptr; j["status"] = "unknown"; break;
    }
    j["conditions"] = conditions;
    if (v.counterexample) {
        const Counterexample& c = *v.counterexample;
        j["counterexample"] = {
            {"pair", {c.p, c.q}},
            {"condition", c.condition},
            {"detail", c.detail},
            {"path", c.path},
        };
    } else {
        j["counterexample"] = nullptr;
    }
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

json partition_to_json(const Partition& p, const Lts& l) {
    json blocks = json::array();
    for (BlockId b = 0; b < p.blocks.size(); ++b) {
        json states = json::array();
        for (StateId s : p.blocks[b]) states.push_back(l.state_name(s));
        blocks.push_back({{"states", states},
                          {"divergent", b < p.divergent.size() ? static_cast<bool>(p.divergent[b]) : false}});
    }
    return {{"blocks", blocks}};
}

json report_to_json(const Report& r, bool include_timing) {
    json cases = json::array();
    for (const auto& c : r.cases) {
        json checks = json::array();
        for (const auto& [name, ok] : c.checks) checks.push_back({{"check", name}, {"ok", ok}});
        cases.push_back({{"seed", c.case_seed},
                         {"lhs", c.lhs},
                         {"rhs", c.rhs},
                         {"checks", checks},
                         {"violated", c.violated}});
    }
    json j{{"campaign", r.campaign},
           {"seed", r.seed},
           {"cases_run", r.cases_run},
           {"violations", r.violations},
           {"cases", cases}};
    if (include_timing) j["wall_ms"] = r.wall_ms;
    return j;
}

json rec_congruence_to_json(const RecCongruence& r) {
    json j;
    j["open_rooted"] = verdict_to_json(r.open_rooted);
    j["upto"] = verdict_to_json(r.upto);
    j["direct"] = verdict_to_json(r.direct);
    j["agreed"] = r.agreed;
    if (r.universe_size) j["universe_size"] = *r.universe_size;
    return j;
}

json uef_to_json(const Uef& u) {
    json universe = json::array();
    for (const Expr& g : u.g_universe) universe.push_back(print(g));
    json pairs = json::array();
    for (auto [a, b] : u.oriented)
        pairs.push_back({u.host.lts.state_name(a), u.host.lts.state_name(b)});
    return {{"var", u.var.str()},
            {"e", print(u.e)},
            {"f", print(u.f)},
            {"universe", universe},
            {"pairs", pairs}};
}

ParsedRelation relation_from_json(const json& j) {
    ParsedRelation out;
    const json* list = &j;
    if (j.is_object()) {
        out.symmetric = j.value("symmetric", false);
        if (!j.contains("pairs")) throw std::invalid_argument("relation JSON lacks \"pairs\"");
        list = &j.at("pairs");
    }
    if (!list->is_array()) throw std::invalid_argument("relation JSON must be a list of pairs");
    for (const auto& entry : *list) {
        if (!entry.is_array() || entry.size() != 2)
            throw std::invalid_argument("relation entries must be [expr, expr] pairs");
        out.pairs.emplace_back(parse(entry.at(0).get<std::string>()),
                               parse(entry.at(1).get<std::string>()));
    }
    return out;
}

json relation_to_json(const Relation& r, const Lts& l) {
    json pairs = json::array();
    for (auto [a, b] : r.pairs) pairs.push_back({l.state_name(a), l.state_name(b)});
    return {{"pairs", pairs}, {"symmetric", r.symmetric_closure}};
}

} // namespace dpbb
