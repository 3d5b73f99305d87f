#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "supply_audit/date.hpp"

namespace supply_audit {

// Lowercase package identity over [a-z0-9-]; separator runs collapsed to a
// single '-', no leading/trailing '-'. Only canonical_name() builds one.
class CanonicalName {
 public:
  const std::string& str() const noexcept { return value_; }
  std::size_t size() const noexcept { return value_.size(); }

  friend auto operator<=>(const CanonicalName&, const CanonicalName&) = default;
  friend bool operator==(const CanonicalName&, const CanonicalName&) = default;

 private:
  friend CanonicalName canonical_name(std::string_view raw);
  explicit CanonicalName(std::string value) : value_(std::move(value)) {}
  std::string value_;
};

// Throws Error{EmptyName} when nothing survives trimming/collapsing and
// Error{InvalidName} for characters outside [A-Za-z0-9._-].
CanonicalName canonical_name(std::string_view raw);

enum class PrePhase { Alpha, Beta, ReleaseCandidate };

struct PreRelease {
  PrePhase phase = PrePhase::Alpha;
  std::uint64_t number = 0;
  friend bool operator==(const PreRelease&, const PreRelease&) = default;
};

// Reduced version dialect: N(.N)*((a|b|rc)N)?, with an optional leading 'v'.
// Ordering pads the shorter release with zeros, so 1.0 == 1.0.0; a
// pre-release sorts before the plain release.
class Version {
 public:
  Version() = default;
  Version(std::vector<std::uint64_t> release, std::optional<PreRelease> pre = {});

  const std::vector<std::uint64_t>& release() const noexcept { return release_; }
  const std::optional<PreRelease>& pre() const noexcept { return pre_; }

  std::string to_string() const;

  friend std::strong_ordering operator<=>(const Version& a, const Version& b);
  friend bool operator==(const Version& a, const Version& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  std::vector<std::uint64_t> release_{0};
  std::optional<PreRelease> pre_;
};

Version parse_version(std::string_view text);

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* to_string(CompareOp op);

struct SpecifierClause {
  CompareOp op = CompareOp::Eq;
  Version version;
  // Only for == / !=: "==1.4.*" matches releases whose padded release starts
  // with [1, 4].
  bool wildcard = false;
};

class SpecifierSet {
 public:
  SpecifierSet() = default;
  explicit SpecifierSet(std::vector<SpecifierClause> clauses) : clauses_(std::move(clauses)) {}

  const std::vector<SpecifierClause>& clauses() const noexcept { return clauses_; }
  bool empty() const noexcept { return clauses_.empty(); }
  void append(const SpecifierSet& other);

  std::string to_string() const;

 private:
  std::vector<SpecifierClause> clauses_;
};

// Comma-separated clauses. "~=X.Y" is accepted as ">=X.Y, ==X.*".
SpecifierSet parse_specifier(std::string_view text);

bool clause_matches(const Version& v, const SpecifierClause& clause);
bool version_matches(const Version& v, const SpecifierSet& spec);

struct Requirement {
  CanonicalName name;
  SpecifierSet specifier;
};

// "NAME", "NAME<cmp>VER[,<cmp>VER...]", with extras ("[...]") and
// environment markers (after ';') stripped. Parenthesised specifiers
// ("name (>=1.0)") are accepted.
Requirement parse_requirement(std::string_view text);

struct ReleaseRecord {
  Version version;
  Date date;
  std::vector<Requirement> requirements;
};

struct PackageRecord {
  CanonicalName name;
  std::set<std::string> maintainers;
  std::string license_text;
  std::vector<ReleaseRecord> releases;
  std::optional<std::uint64_t> downloads;
  std::vector<std::string> classifiers;
  std::string description;

  std::optional<Date> first_release_date() const;
  // Highest version by the ordering contract, not the most recent date.
  const ReleaseRecord* latest_release() const;
  // Requirements of latest_release(); empty when there are no releases.
  const std::vector<Requirement>& dependencies() const;
};

class Snapshot {
 public:
  using Map = std::map<CanonicalName, PackageRecord>;

  // Sorts releases, deduplicates requires, drops self references and
  // rejects duplicate packages (Error{DuplicatePackage}).
  void insert(PackageRecord record);

  const Map& packages() const noexcept { return packages_; }
  const PackageRecord* find(const CanonicalName& name) const;
  const PackageRecord& at(const CanonicalName& name) const;  // UnknownPackage
  bool contains(const CanonicalName& name) const { return packages_.count(name) != 0; }
  std::size_t size() const noexcept { return packages_.size(); }

  // The explicit date when one was set, else the latest release date seen.
  Date snapshot_date() const noexcept { return snapshot_date_; }
  void set_snapshot_date(Date date) {
    snapshot_date_ = date;
    explicit_date_ = true;
  }
  bool has_explicit_date() const noexcept { return explicit_date_; }

 private:
  Map packages_;
  Date snapshot_date_{};
  bool explicit_date_ = false;
};

struct LoadOptions {
  bool strict = false;
};

struct SkippedRecord {
  std::size_t line = 0;
  std::string reason;
};

struct DanglingEdge {
  CanonicalName from;
  CanonicalName to;
};

struct LoadReport {
  std::size_t records_read = 0;
  std::vector<SkippedRecord> skipped;
  std::vector<DanglingEdge> dangling;
};

struct LoadResult {
  Snapshot snapshot;
  LoadReport report;
};

// Newline-delimited JSON, one package per line. An optional object carrying
// only "snapshot_date" sets the snapshot date; otherwise the latest release
// date in the file is used.
LoadResult load_snapshot(const std::filesystem::path& path, const LoadOptions& options = {});
LoadResult load_snapshot(std::istream& in, const LoadOptions& options = {});

struct YearCounts {
  std::uint64_t new_packages = 0;
  std::uint64_t new_maintainers = 0;
  std::uint64_t new_releases = 0;
  friend bool operator==(const YearCounts&, const YearCounts&) = default;
};

struct YearlyStats {
  std::map<int, YearCounts> years;
};

YearlyStats ecosystem_stats(const Snapshot& snapshot);

// Classifier string -> number of packages declaring it, most common first.
std::vector<std::pair<std::string, std::uint64_t>> classifier_counts(const Snapshot& snapshot);

}  // namespace supply_audit

template <>
struct std::hash<supply_audit::CanonicalName> {
  std::size_t operator()(const supply_audit::CanonicalName& n) const noexcept {
    return std::hash<std::string>{}(n.str());
  }
};
