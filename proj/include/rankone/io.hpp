// JSON schemas: schedule files, generator specs, level sets, permutations.
#pragma once

#include "rankone/cellset.hpp"
#include "rankone/permutation.hpp"
#include "rankone/schedule.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace rankone::io {

using nlohmann::json;

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

/// Integers may be JSON numbers or decimal strings (for values beyond 64 bits).
inline Int parse_int(const json& j, const std::string& where) {
  if (j.is_number_integer()) return from_i64(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return from_u64(j.get<std::uint64_t>());
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>(), 10);
    } catch (const std::invalid_argument&) {
    }
  }
  throw ConfigError(where + ": expected an integer");
}

inline Rational parse_rational_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(from_i64(j.get<std::int64_t>()));
  if (!j.is_string()) throw ConfigError(where + ": expected a \"p/q\" string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

inline std::vector<std::int64_t> parse_i64_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<std::int64_t> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ConfigError(where + ": expected integers");
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

inline StagePredicate parse_stage_rule(const std::string& rule) {
  if (rule == "alternate") return alternate_rule;
  throw ConfigError("unknown j_stage_rule '" + rule + "' (supported: alternate)");
}

inline RankOneSchedule schedule_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("schedule: expected an object");
  if (j.contains("generator")) {
    reject_unknown(j, {"generator", "primes", "j_stage_rule", "depth", "initial_height",
                       "initial_width", "rigid_base_cuts"},
                   "generator");
    if (j.at("generator") != "paper") throw ConfigError("generator: only \"paper\" is known");
    GeneratorOptions opts;
    if (j.contains("initial_height")) opts.initial_height = parse_int(j["initial_height"], "initial_height");
    if (j.contains("initial_width"))
      opts.initial_width = parse_rational_json(j["initial_width"], "initial_width");
    if (j.contains("rigid_base_cuts")) {
      if (!j["rigid_base_cuts"].is_number_integer()) throw ConfigError("rigid_base_cuts: integer");
      opts.rigid_base_cuts = j["rigid_base_cuts"].get<std::int64_t>();
    }
    auto primes = j.contains("primes") ? parse_i64_list(j["primes"], "primes")
                                       : std::vector<std::int64_t>{};
    std::string rule = j.value("j_stage_rule", std::string("alternate"));
    if (!j.value("depth", json(12)).is_number_integer()) throw ConfigError("depth: integer");
    int depth = j.value("depth", 12);
    return paper_schedule(parse_stage_rule(rule), primes, depth, opts);
  }
  reject_unknown(j, {"initial_height", "initial_width", "stages"}, "schedule");
  RankOneSchedule s;
  s.initial_height = parse_int(j.at("initial_height"), "initial_height");
  s.initial_width = parse_rational_json(j.at("initial_width"), "initial_width");
  if (s.initial_height < 1) throw ConfigError("initial_height must be >= 1");
  if (s.initial_width <= 0) throw ConfigError("initial_width must be > 0");
  if (!j.at("stages").is_array()) throw ConfigError("stages: expected an array");
  for (const auto& st : j["stages"]) {
    reject_unknown(st, {"cuts", "spacers", "kind"}, "stage");
    StageParams p;
    if (!st.at("cuts").is_number_integer()) throw ConfigError("cuts: expected an integer");
    p.cuts = st["cuts"].get<std::int64_t>();
    if (p.cuts < 1) throw ConfigError("cuts must be positive");
    p.kind = stage_kind_from_string(st.value("kind", std::string("CUSTOM")));
    if (st.contains("spacers"))
      for (const auto& v : st["spacers"]) p.spacers.push_back(parse_int(v, "spacers"));
    else if (p.kind != StageKind::HalfJPrime)
      p.spacers.assign(static_cast<std::size_t>(p.cuts), Int(0));
    s.stages.push_back(std::move(p));
  }
  return s;
}

inline json schedule_to_json(const RankOneSchedule& s) {
  json stages = json::array();
  for (const auto& st : s.stages) {
    json sp = json::array();
    for (const auto& v : st.spacers) {
      if (fits_u64(v)) sp.push_back(to_u64(v));
      else sp.push_back(v.get_str());
    }
    stages.push_back({{"cuts", st.cuts}, {"spacers", sp}, {"kind", to_string(st.kind)}});
  }
  return {{"initial_height", s.initial_height.get_str()},
          {"initial_width", format_rational(s.initial_width)},
          {"stages", stages}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

/// {"stage": j, "levels": [..]} or {"stage": j, "ranges": [[lo, hi], ..]}.
inline CellSet cellset_from_json(const json& j) {
  reject_unknown(j, {"stage", "levels", "ranges"}, "set");
  if (!j.at("stage").is_number_integer()) throw ConfigError("set.stage: integer");
  const int stage = j["stage"].get<int>();
  if (stage < 1) throw ConfigError("set.stage must be >= 1");
  std::vector<LevelRange> rs;
  if (j.contains("levels"))
    for (const auto& v : j["levels"]) {
      Int l = parse_int(v, "set.levels");
      rs.push_back({l, l + 1});
    }
  if (j.contains("ranges"))
    for (const auto& v : j["ranges"]) {
      if (!v.is_array() || v.size() != 2) throw ConfigError("set.ranges: [lo, hi] pairs");
      Int lo = parse_int(v[0], "set.ranges"), hi = parse_int(v[1], "set.ranges");
      if (lo < 0 || hi <= lo) throw ConfigError("set.ranges: need 0 <= lo < hi");
      rs.push_back({lo, hi});
    }
  return CellSet(stage, std::move(rs));
}

inline json cellset_to_json(const CellSet& c) {
  json rs = json::array();
  for (const auto& r : c.ranges()) rs.push_back({r.lo.get_str(), r.hi.get_str()});
  return {{"stage", c.stage()}, {"ranges", rs}};
}

/// One-line image form: [p(0), p(1), ...].
inline json permutation_to_json(const FinitePermutation& p) { return json(p.images()); }

inline FinitePermutation permutation_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("permutation: expected an integer array");
  std::vector<FinitePermutation::index_type> img;
  for (const auto& v : j) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw ConfigError("permutation: expected non-negative integers");
    img.push_back(v.get<FinitePermutation::index_type>());
  }
  try {
    return FinitePermutation(std::move(img));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("permutation: ") + e.what());
  }
}

}  // namespace rankone::io
