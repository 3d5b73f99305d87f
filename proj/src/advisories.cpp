#include "supply_audit/advisories.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <set>

#include "supply_audit/error.hpp"

namespace supply_audit {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& why) {
  throw Error(ErrorKind::MalformedRecord, "advisory line " + std::to_string(line) + ": " + why, line);
}

Date required_date(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) malformed(line, std::string("missing date '") + key + "'");
  auto d = Date::parse(it->get<std::string>());
  if (!d) malformed(line, std::string("bad date '") + key + "'");
  return *d;
}

Advisory parse_advisory(const json& obj, std::size_t line) {
  if (!obj.is_object()) malformed(line, "record is not an object");
  auto id = obj.find("id");
  if (id == obj.end() || !id->is_string() || id->get<std::string>().empty()) malformed(line, "missing string 'id'");
  auto pkg = obj.find("package");
  if (pkg == obj.end() || !pkg->is_string()) malformed(line, "missing string 'package'");

  Advisory a{.id = id->get<std::string>(), .package = [&] {
               try {
                 return canonical_name(pkg->get<std::string>());
               } catch (const Error& e) {
                 malformed(line, e.what());
               }
             }()};
  if (auto it = obj.find("affected"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) malformed(line, "'affected' must be a specifier string");
    try {
      a.affected = parse_specifier(it->get<std::string>());
    } catch (const Error& e) {
      malformed(line, e.what());
    }
  }
  if (auto it = obj.find("cves"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) malformed(line, "'cves' must be an array");
    for (const auto& c : *it) {
      if (!c.is_string()) malformed(line, "'cves' must contain strings");
      a.cves.push_back(c.get<std::string>());
    }
  }
  if (auto it = obj.find("severity"); it != obj.end() && !it->is_null()) {
    if (!it->is_number()) malformed(line, "'severity' must be a number");
    double v = it->get<double>();
    if (!(v >= 0.0 && v <= 10.0)) malformed(line, "'severity' outside [0, 10]");
    a.severity = v;
  }
  a.published = required_date(obj, "published", line);
  if (auto it = obj.find("fixed"); it != obj.end() && !it->is_null()) {
    a.fixed = required_date(obj, "fixed", line);
    if (*a.fixed < a.published) malformed(line, "'fixed' precedes 'published'");
  }
  return a;
}

}  // namespace

AdvisoryLoad load_advisories(std::istream& in, const Snapshot* snapshot) {
  AdvisoryLoad out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      malformed(line, std::string("invalid JSON: ") + e.what());
    }
    Advisory a = parse_advisory(obj, line);
    if (snapshot && !snapshot->contains(a.package)) out.missing_package.push_back(a.id);
    out.advisories.push_back(std::move(a));
  }
  return out;
}

AdvisoryLoad load_advisories(const std::filesystem::path& path, const Snapshot* snapshot) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return load_advisories(in, snapshot);
}

std::vector<AffectedRelease> affected_releases(const Snapshot& s, const Advisory& a) {
  std::vector<AffectedRelease> out;
  for (const auto& r : s.at(a.package).releases) {
    if (version_matches(r.version, a.affected)) out.push_back({r.version, r.date});
  }
  return out;
}

ExposureRecord exposure_set(const DepGraph& g, const Advisory& a, Depth depth) {
  return ExposureRecord{a.id, package_reach(g, a.package, depth).members, depth};
}

std::map<std::string, DomainExposure> exposure_by_domain(const DepGraph& g, const ExposureRecord& exposure) {
  std::map<std::string, std::set<std::string>> emails;
  std::map<std::string, std::set<NodeId>> packages;
  for (const auto& name : exposure.exposed) {
    NodeId v = g.require(name);
    for (std::uint32_t m : g.owners_of(v)) {
      const std::string& email = g.maintainers()[m];
      auto at = email.rfind('@');
      std::string domain = at == std::string::npos ? std::string() : email.substr(at + 1);
      if (domain.empty()) continue;
      emails[domain].insert(email);
      packages[domain].insert(v);
    }
  }
  std::map<std::string, DomainExposure> out;
  for (const auto& [domain, set] : emails) out[domain] = {set.size(), packages[domain].size()};
  return out;
}

std::optional<long> patch_lag(const Snapshot& s, const Advisory& a, const CanonicalName& dependent) {
  if (!a.fixed) throw Error(ErrorKind::NoFixDate, a.id);
  const PackageRecord& rec = s.at(dependent);
  const auto& deps = rec.dependencies();
  if (std::none_of(deps.begin(), deps.end(), [&](const Requirement& r) { return r.name == a.package; })) {
    throw Error(ErrorKind::NotADependent, dependent.str() + " does not require " + a.package.str());
  }
  for (const auto& r : rec.releases) {
    if (r.date > *a.fixed) return days_between(*a.fixed, r.date);
  }
  return std::nullopt;
}

PatchLagSummary patch_lag_summary(const DepGraph& g, const Snapshot& s, const Advisory& a) {
  if (!a.fixed) throw Error(ErrorKind::NoFixDate, a.id);
  PatchLagSummary out{a.id, {}, 0, std::nullopt};
  long total = 0;
  std::size_t patched = 0;
  for (const auto& dependent : g.dependents(a.package)) {
    auto lag = patch_lag(s, a, dependent);
    if (lag) {
      total += *lag;
      ++patched;
    } else {
      ++out.unpatched;
    }
    out.lags.emplace_back(dependent, lag);
  }
  if (patched) out.mean_days = static_cast<double>(total) / static_cast<double>(patched);
  return out;
}

std::vector<TimelineRow> vulnerability_timeline(const Snapshot& s, const std::vector<Advisory>& advisories,
                                                const CanonicalName& package) {
  s.at(package);
  std::vector<TimelineRow> rows;
  for (const auto& a : advisories) {
    if (a.package != package) continue;
    Date end = a.fixed.value_or(s.snapshot_date());
    rows.push_back({a.id, a.published, a.fixed, a.severity, days_between(a.published, end)});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const TimelineRow& x, const TimelineRow& y) {
    return x.published < y.published;
  });
  return rows;
}

}  // namespace supply_audit
