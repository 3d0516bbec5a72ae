#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "dpbb/equivalence.hpp"
#include "dpbb/harness.hpp"
#include "dpbb/lts.hpp"
#include "dpbb/upto.hpp"

namespace dpbb {

nlohmann::json verdict_to_json(const Verdict& v, const std::vector<std::string>& conditions = {});
nlohmann::json partition_to_json(const Partition& p, const Lts& l);
nlohmann::json report_to_json(const Report& r, bool include_timing = true);
nlohmann::json rec_congruence_to_json(const RecCongruence& r);
nlohmann::json uef_to_json(const Uef& u);

/// Relation file format: a JSON list of [expr, expr] string pairs, plus an
/// optional "symmetric" flag: {"pairs": [["0","tau.0"], ...], "symmetric": true}
/// or just the bare list.
struct ParsedRelation {
    std::vector<std::pair<Expr, Expr>> pairs;
    bool symmetric = false;
};
ParsedRelation relation_from_json(const nlohmann::json& j);
nlohmann::json relation_to_json(const Relation& r, const Lts& l);

} // namespace dpbb
