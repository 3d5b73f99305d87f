#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "supply_audit/depgraph.hpp"
#include "supply_audit/snapshot.hpp"

namespace supply_audit {

struct Advisory {
  std::string id;
  CanonicalName package;
  SpecifierSet affected;
  std::vector<std::string> cves;
  std::optional<double> severity;  // 0..10
  Date published;
  std::optional<Date> fixed;       // >= published
};

struct AdvisoryLoad {
  std::vector<Advisory> advisories;
  // Ids of advisories whose package is not in the snapshot. They stay in
  // `advisories`.
  std::vector<std::string> missing_package;
};

// Newline-delimited JSON. Any invalid record aborts with MalformedRecord.
AdvisoryLoad load_advisories(std::istream& in, const Snapshot* snapshot = nullptr);
AdvisoryLoad load_advisories(const std::filesystem::path& path, const Snapshot* snapshot = nullptr);

struct AffectedRelease {
  Version version;
  Date date;
};

std::vector<AffectedRelease> affected_releases(const Snapshot& s, const Advisory& a);

struct ExposureRecord {
  std::string advisory_id;
  std::vector<CanonicalName> exposed;  // sorted
  Depth depth;
};

ExposureRecord exposure_set(const DepGraph& g, const Advisory& a, Depth depth = {});

struct DomainExposure {
  std::size_t maintainers = 0;  // distinct emails in the domain
  std::size_t packages = 0;     // exposed packages with a maintainer there
  friend bool operator==(const DomainExposure&, const DomainExposure&) = default;
};

// Exposed packages grouped by the domain part of their maintainers' emails.
std::map<std::string, DomainExposure> exposure_by_domain(const DepGraph& g, const ExposureRecord& exposure);

// Days from the fix to the dependent's first release strictly after it;
// nullopt while the dependent has not released since. Throws NoFixDate,
// NotADependent (latest release does not require the package) or
// UnknownPackage.
std::optional<long> patch_lag(const Snapshot& s, const Advisory& a, const CanonicalName& dependent);

struct PatchLagSummary {
  std::string advisory_id;
  std::vector<std::pair<CanonicalName, std::optional<long>>> lags;  // direct dependents, by name
  std::size_t unpatched = 0;
  std::optional<double> mean_days;  // over patched dependents only
};

PatchLagSummary patch_lag_summary(const DepGraph& g, const Snapshot& s, const Advisory& a);

struct TimelineRow {
  std::string advisory_id;
  Date published;
  std::optional<Date> fixed;
  std::optional<double> severity;
  long open_window_days = 0;  // fixed - published, or snapshot date - published
};

std::vector<TimelineRow> vulnerability_timeline(const Snapshot& s, const std::vector<Advisory>& advisories,
                                                const CanonicalName& package);

}  // namespace supply_audit
