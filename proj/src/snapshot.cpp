#include "supply_audit/snapshot.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <unordered_map>

#include "supply_audit/error.hpp"

namespace supply_audit {

using nlohmann::json;

std::optional<Date> PackageRecord::first_release_date() const {
  if (releases.empty()) return std::nullopt;
  return releases.front().date;
}

const ReleaseRecord* PackageRecord::latest_release() const {
  if (releases.empty()) return nullptr;
  return &*std::max_element(releases.begin(), releases.end(),
                            [](const ReleaseRecord& a, const ReleaseRecord& b) { return a.version < b.version; });
}

const std::vector<Requirement>& PackageRecord::dependencies() const {
  static const std::vector<Requirement> none;
  const ReleaseRecord* latest = latest_release();
  return latest ? latest->requirements : none;
}

void Snapshot::insert(PackageRecord record) {
  if (packages_.count(record.name)) {
    throw Error(ErrorKind::DuplicatePackage, record.name.str());
  }
  std::set<std::string> emails;
  for (std::string m : record.maintainers) {
    std::transform(m.begin(), m.end(), m.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!m.empty()) emails.insert(std::move(m));
  }
  record.maintainers = std::move(emails);
  for (auto& release : record.releases) {
    std::vector<Requirement> merged;
    for (auto& req : release.requirements) {
      if (req.name == record.name) continue;
      auto it = std::find_if(merged.begin(), merged.end(),
                             [&](const Requirement& r) { return r.name == req.name; });
      if (it == merged.end()) {
        merged.push_back(std::move(req));
      } else {
        it->specifier.append(req.specifier);
      }
    }
    release.requirements = std::move(merged);
  }
  std::sort(record.releases.begin(), record.releases.end(), [](const ReleaseRecord& a, const ReleaseRecord& b) {
    if (a.date != b.date) return a.date < b.date;
    return a.version < b.version;
  });
  std::vector<Version> versions;
  for (const auto& r : record.releases) versions.push_back(r.version);
  std::sort(versions.begin(), versions.end());
  if (std::adjacent_find(versions.begin(), versions.end()) != versions.end()) {
    throw Error(ErrorKind::MalformedRecord, record.name.str() + ": duplicate release version");
  }
  if (!explicit_date_ && !record.releases.empty()) {
    snapshot_date_ = std::max(snapshot_date_, record.releases.back().date);
  }
  CanonicalName key = record.name;
  packages_.emplace(std::move(key), std::move(record));
}

const PackageRecord* Snapshot::find(const CanonicalName& name) const {
  auto it = packages_.find(name);
  return it == packages_.end() ? nullptr : &it->second;
}

const PackageRecord& Snapshot::at(const CanonicalName& name) const {
  if (const auto* p = find(name)) return *p;
  throw Error(ErrorKind::UnknownPackage, name.str());
}

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& why) {
  throw Error(ErrorKind::MalformedRecord, "line " + std::to_string(line) + ": " + why, line);
}

std::vector<std::string> string_array(const json& obj, const char* key, std::size_t line) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) malformed(line, std::string("'") + key + "' must be an array");
  for (const auto& v : *it) {
    if (!v.is_string()) malformed(line, std::string("'") + key + "' must contain strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

PackageRecord parse_package(const json& obj, std::size_t line) {
  PackageRecord rec{.name = [&] {
    auto it = obj.find("name");
    if (it == obj.end() || !it->is_string()) malformed(line, "missing string 'name'");
    try {
      return canonical_name(it->get<std::string>());
    } catch (const Error& e) {
      malformed(line, e.what());
    }
  }()};

  for (auto& m : string_array(obj, "maintainers", line)) {
    std::string email = lowercase(m);
    if (!email.empty()) rec.maintainers.insert(std::move(email));
  }
  if (auto it = obj.find("license"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) malformed(line, "'license' must be a string");
    rec.license_text = it->get<std::string>();
  }
  if (auto it = obj.find("description"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) malformed(line, "'description' must be a string");
    rec.description = it->get<std::string>();
  }
  if (auto it = obj.find("downloads"); it != obj.end() && !it->is_null()) {
    if (!it->is_number_integer()) malformed(line, "'downloads' must be an integer");
    if (it->is_number_unsigned()) {
      rec.downloads = it->get<std::uint64_t>();
    } else {
      auto v = it->get<std::int64_t>();
      if (v < 0) malformed(line, "'downloads' must be non-negative");
      rec.downloads = static_cast<std::uint64_t>(v);
    }
  }
  rec.classifiers = string_array(obj, "classifiers", line);

  auto rels = obj.find("releases");
  if (rels == obj.end() || !rels->is_array()) malformed(line, "missing array 'releases'");
  for (const auto& r : *rels) {
    if (!r.is_object()) malformed(line, "release must be an object");
    ReleaseRecord release;
    auto ver = r.find("version");
    if (ver == r.end() || !ver->is_string()) malformed(line, "release without string 'version'");
    auto date = r.find("date");
    if (date == r.end() || !date->is_string()) malformed(line, "release without string 'date'");
    try {
      release.version = parse_version(ver->get<std::string>());
      auto d = Date::parse(date->get<std::string>());
      if (!d) malformed(line, "bad date '" + date->get<std::string>() + "'");
      release.date = *d;
      for (const auto& req : string_array(r, "requires", line)) {
        release.requirements.push_back(parse_requirement(req));
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::MalformedRecord) throw;
      malformed(line, e.what());
    }
    rec.releases.push_back(std::move(release));
  }
  return rec;
}

}  // namespace

LoadResult load_snapshot(std::istream& in, const LoadOptions& options) {
  LoadResult result;
  auto& snap = result.snapshot;
  auto& report = result.report;

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    try {
      json obj;
      try {
        obj = json::parse(text);
      } catch (const json::parse_error& e) {
        malformed(line, std::string("invalid JSON: ") + e.what());
      }
      if (!obj.is_object()) malformed(line, "record is not an object");
      if (!obj.contains("name") && obj.contains("snapshot_date")) {
        const auto& d = obj["snapshot_date"];
        auto date = d.is_string() ? Date::parse(d.get<std::string>()) : std::nullopt;
        if (!date) malformed(line, "bad snapshot_date");
        snap.set_snapshot_date(*date);
        continue;
      }
      ++report.records_read;
      PackageRecord rec = parse_package(obj, line);
      try {
        snap.insert(std::move(rec));
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::DuplicatePackage) {
          if (options.strict) throw Error(ErrorKind::DuplicatePackage, e.what(), line);
          report.skipped.push_back({line, e.what()});
          continue;
        }
        malformed(line, e.what());
      }
    } catch (const Error& e) {
      if (options.strict) throw;
      report.skipped.push_back({line, e.what()});
    }
  }

  for (const auto& [name, rec] : snap.packages()) {
    for (const auto& req : rec.dependencies()) {
      if (!snap.contains(req.name)) report.dangling.push_back({name, req.name});
    }
  }
  return result;
}

LoadResult load_snapshot(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return load_snapshot(in, options);
}

YearlyStats ecosystem_stats(const Snapshot& snapshot) {
  YearlyStats stats;
  std::unordered_map<std::string, Date> maintainer_first;
  for (const auto& [_, rec] : snapshot.packages()) {
    auto first = rec.first_release_date();
    if (!first) continue;
    ++stats.years[first->year()].new_packages;
    for (const auto& r : rec.releases) ++stats.years[r.date.year()].new_releases;
    for (const auto& m : rec.maintainers) {
      auto [it, inserted] = maintainer_first.emplace(m, *first);
      if (!inserted && *first < it->second) it->second = *first;
    }
  }
  for (const auto& [_, date] : maintainer_first) ++stats.years[date.year()].new_maintainers;
  return stats;
}

std::vector<std::pair<std::string, std::uint64_t>> classifier_counts(const Snapshot& snapshot) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& [_, rec] : snapshot.packages()) {
    std::set<std::string> seen(rec.classifiers.begin(), rec.classifiers.end());
    for (const auto& c : seen) ++counts[c];
  }
  std::vector<std::pair<std::string, std::uint64_t>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

}  // namespace supply_audit
