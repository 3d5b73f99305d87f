#include "supply_audit/serialize.hpp"

#include <ostream>

#include "supply_audit/error.hpp"

namespace supply_audit {

namespace {

template <typename T>
Json names_json(const std::vector<T>& names) {
  Json arr = Json::array();
  for (const auto& n : names) {
    if constexpr (std::is_same_v<T, CanonicalName>) {
      arr.push_back(n.str());
    } else {
      arr.push_back(n);
    }
  }
  return arr;
}

Json optional_number(const std::optional<std::uint64_t>& v) { return v ? Json(*v) : Json(nullptr); }

[[noreturn]] void schema_error(const std::string& why) { throw Error(ErrorKind::MalformedRecord, why); }

}  // namespace

Json depth_to_json(Depth depth) { return depth.limit() ? Json(*depth.limit()) : Json(nullptr); }

Depth depth_from_json(const Json& j) {
  if (j.is_null()) return Depth::unlimited();
  if (!j.is_number_unsigned()) schema_error("depth must be a non-negative integer or null");
  return Depth::hops(j.get<std::uint32_t>());
}

Json to_json(const ReachResult& r, std::size_t members_threshold) {
  Json j{{"origin", r.origin}, {"depth", depth_to_json(r.depth)}, {"size", r.size()}};
  if (r.size() <= members_threshold) j["members"] = names_json(r.members);
  return j;
}

ReachResult reach_from_json(const Json& j) {
  ReachResult r;
  r.origin = j.at("origin").get<std::string>();
  r.depth = depth_from_json(j.at("depth"));
  if (j.contains("members")) {
    for (const auto& m : j["members"]) r.members.push_back(canonical_name(m.get<std::string>()));
  }
  if (j.contains("members") && j.at("size").get<std::size_t>() != r.members.size()) {
    schema_error("size does not match members");
  }
  return r;
}

Json to_json(const SquatCandidate& c, const Snapshot& s) {
  auto downloads = [&](const CanonicalName& n) {
    const auto* rec = s.find(n);
    return rec ? optional_number(rec->downloads) : Json(nullptr);
  };
  return Json{{"suspect", c.suspect.str()},
              {"target", c.target.str()},
              {"rule", to_string(c.rule)},
              {"distance", c.distance},
              {"verdict", to_string(c.verdict)},
              {"suspect_downloads", downloads(c.suspect)},
              {"target_downloads", c.rule == SquatRule::BuiltinShadow ? Json(nullptr) : downloads(c.target)}};
}

SquatCandidate squat_candidate_from_json(const Json& j) {
  auto rule = parse_squat_rule(j.at("rule").get<std::string>());
  auto verdict = parse_verdict(j.at("verdict").get<std::string>());
  if (!rule || !verdict) schema_error("unknown rule or verdict");
  return SquatCandidate{canonical_name(j.at("suspect").get<std::string>()),
                        canonical_name(j.at("target").get<std::string>()), *rule, j.at("distance").get<std::size_t>(),
                        *verdict};
}

Json to_json(const SquatReport& r, const Snapshot& s) {
  Json candidates = Json::array();
  for (const auto& c : r.candidates) candidates.push_back(to_json(c, s));
  Json rules = Json::object();
  for (const auto& [rule, n] : r.rule_counts) rules[to_string(rule)] = n;
  Json verdicts = Json::object();
  for (const auto& [v, n] : r.verdict_counts) verdicts[to_string(v)] = n;
  return Json{{"candidates", candidates}, {"rule_counts", rules}, {"verdict_counts", verdicts}};
}

Json to_json(const Violation& v) {
  return Json{{"importer", v.importer.str()},
              {"importer_license", to_string(v.importer_license)},
              {"dependency", v.dependency.str()},
              {"dependency_license", to_string(v.dependency_license)},
              {"kind", to_string(v.kind)},
              {"path", names_json(v.path)}};
}

Violation violation_from_json(const Json& j) {
  Violation v{canonical_name(j.at("importer").get<std::string>()), LicenseId::Unknown,
              canonical_name(j.at("dependency").get<std::string>()), LicenseId::Unknown, ViolationKind::Direct, {}};
  auto il = parse_license_id(j.at("importer_license").get<std::string>());
  auto dl = parse_license_id(j.at("dependency_license").get<std::string>());
  if (!il || !dl) schema_error("unknown license id");
  v.importer_license = *il;
  v.dependency_license = *dl;
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "DIRECT" && kind != "INHERITED") schema_error("unknown violation kind");
  v.kind = kind == "DIRECT" ? ViolationKind::Direct : ViolationKind::Inherited;
  for (const auto& p : j.at("path")) v.path.push_back(canonical_name(p.get<std::string>()));
  return v;
}

Json license_table_rows(const LicenseReport& r) {
  Json rows = Json::array();
  for (const auto& [pair, n] : r.by_pair) {
    rows.push_back(Json{{"type", std::string(display_name(pair.first)) + " importing " + display_name(pair.second)},
                        {"occurrences", n}});
  }
  return rows;
}

Json to_json(const ScanFlag& f) { return Json{{"kind", to_string(f.kind)}, {"line", f.line}, {"detail", f.detail}}; }

Json to_json(const ScriptFindings& f) {
  Json flags = Json::array();
  for (const auto& flag : f.flags) flags.push_back(to_json(flag));
  return Json{{"path", f.path},
              {"flags", flags},
              {"imported_modules", Json(f.imported_modules)},
              {"risk_score", f.risk_score},
              {"warnings", Json(f.warnings)}};
}

ScriptFindings findings_from_json(const Json& j) {
  ScriptFindings f;
  f.path = j.at("path").get<std::string>();
  for (const auto& flag : j.at("flags")) {
    auto kind = parse_flag_kind(flag.at("kind").get<std::string>());
    if (!kind) schema_error("unknown flag kind");
    f.flags.push_back({*kind, flag.at("line").get<std::size_t>(), flag.at("detail").get<std::string>()});
  }
  for (const auto& m : j.at("imported_modules")) f.imported_modules.insert(m.get<std::string>());
  f.risk_score = j.at("risk_score").get<long>();
  for (const auto& w : j.at("warnings")) f.warnings.push_back(w.get<std::string>());
  return f;
}

Json to_json(const CorpusSummary& s) {
  Json per_flag = Json::object();
  for (const auto& [kind, share] : s.per_flag) {
    per_flag[to_string(kind)] = Json{{"scripts", share.scripts}, {"fraction", share.fraction}};
  }
  Json modules = Json::array();
  for (const auto& [name, n] : s.top_modules) modules.push_back(Json{{"module", name}, {"scripts", n}});
  return Json{{"scripts", s.scripts}, {"flagged_scripts", s.flagged_scripts}, {"per_flag", per_flag},
              {"top_modules", modules}};
}

Json to_json(const Advisory& a) {
  return Json{{"id", a.id},
              {"package", a.package.str()},
              {"affected", a.affected.to_string()},
              {"cves", Json(a.cves)},
              {"severity", a.severity ? Json(*a.severity) : Json(nullptr)},
              {"published", a.published.to_string()},
              {"fixed", a.fixed ? Json(a.fixed->to_string()) : Json(nullptr)}};
}

Json to_json(const TimelineRow& row) {
  return Json{{"advisory", row.advisory_id},
              {"published", row.published.to_string()},
              {"fixed", row.fixed ? Json(row.fixed->to_string()) : Json(nullptr)},
              {"severity", row.severity ? Json(*row.severity) : Json(nullptr)},
              {"open_window_days", row.open_window_days}};
}

Json to_json(const ExposureRecord& e, std::size_t members_threshold) {
  Json j{{"advisory", e.advisory_id}, {"depth", depth_to_json(e.depth)}, {"size", e.exposed.size()}};
  if (e.exposed.size() <= members_threshold) j["exposed"] = names_json(e.exposed);
  return j;
}

Json to_json(const PatchLagSummary& p) {
  Json lags = Json::array();
  for (const auto& [name, lag] : p.lags) {
    lags.push_back(Json{{"dependent", name.str()}, {"lag_days", lag ? Json(*lag) : Json(nullptr)}});
  }
  return Json{{"advisory", p.advisory_id},
              {"dependents", lags},
              {"unpatched", p.unpatched},
              {"mean_days", p.mean_days ? Json(*p.mean_days) : Json(nullptr)}};
}

Json to_json(const YearlyStats& stats) {
  Json years = Json::object();
  for (const auto& [year, c] : stats.years) {
    years[std::to_string(year)] = Json{
        {"new_packages", c.new_packages}, {"new_maintainers", c.new_maintainers}, {"new_releases", c.new_releases}};
  }
  return years;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n\r") == std::string::npos) {
      out << f;
      continue;
    }
    out << '"';
    for (char c : f) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  }
  out << '\n';
}

}  // namespace supply_audit
