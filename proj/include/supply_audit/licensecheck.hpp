#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "supply_audit/depgraph.hpp"
#include "supply_audit/snapshot.hpp"

namespace supply_audit {

enum class LicenseId {
  PublicDomain,
  Mit,
  Bsd,
  Apache2,
  Mpl2,
  Lgpl2,
  Lgpl3,
  Gpl2,
  Gpl3,
  Agpl3,
  Proprietary,
  Unknown,
};

// Identifier as written in reports: "MIT", "APACHE_2", ...
const char* to_string(LicenseId id);
std::optional<LicenseId> parse_license_id(std::string_view text);
// Human label used by the aggregate table: "MIT", "Apache 2.0", "GPLv3", ...
const char* display_name(LicenseId id);

// Restrictiveness on a single scale, 0 (public domain) to 6 (AGPL).
// nullopt for PROPRIETARY and UNKNOWN.
std::optional<int> license_rank(LicenseId id);

// Free-text normaliser. Exact aliases are tried first (user aliases before
// the built-in table), then substring rules; when several substring rules
// match, the most restrictive result wins.
class LicenseTable {
 public:
  static LicenseTable defaults();

  void add_alias(std::string_view text, LicenseId id);
  // JSON object {"aliases": {"free text": "MIT", ...}}.
  void load_aliases(const std::filesystem::path& path);

  LicenseId normalize(std::string_view freetext) const;
  // license field first, "License :: ..." classifiers when that is UNKNOWN.
  LicenseId package_license(const PackageRecord& record) const;

 private:
  std::vector<std::pair<std::string, LicenseId>> user_aliases_;
};

LicenseId normalize_license(std::string_view freetext);

enum class Compatibility { Ok, Violation, Indeterminate };
const char* to_string(Compatibility c);

// VIOLATION when the dependency's license is more restrictive than the
// importer's.
Compatibility compatible(LicenseId importer, LicenseId dependency);

enum class ViolationKind { Direct, Inherited };
const char* to_string(ViolationKind kind);

struct Violation {
  CanonicalName importer;
  LicenseId importer_license = LicenseId::Unknown;
  CanonicalName dependency;
  LicenseId dependency_license = LicenseId::Unknown;
  ViolationKind kind = ViolationKind::Direct;
  // Node sequence importer -> ... -> dependency; edges = path.size() - 1.
  std::vector<CanonicalName> path;
};

struct LicenseReport {
  std::vector<Violation> direct;
  // Edges where either side has no rank.
  std::size_t indeterminate = 0;
  // (importer license, dependency license) -> count, over direct violations.
  std::map<std::pair<LicenseId, LicenseId>, std::size_t> by_pair;
};

LicenseReport find_violations(const DepGraph& g, const Snapshot& s, const LicenseTable& table = LicenseTable::defaults());

// For each direct violation x -> y, every package reaching x whose own
// license is also violated by y gets an INHERITED record with a shortest
// witness path. One record per (package, y).
std::vector<Violation> transitive_violations(const DepGraph& g, const Snapshot& s, const std::vector<Violation>& direct,
                                             Depth depth = {}, const LicenseTable& table = LicenseTable::defaults());

}  // namespace supply_audit
