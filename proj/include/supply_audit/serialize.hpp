#pragma once

// JSON and CSV encodings of analysis results. JSON objects use sorted keys,
// so equal inputs always produce byte-identical output.

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "supply_audit/advisories.hpp"
#include "supply_audit/depgraph.hpp"
#include "supply_audit/installscan.hpp"
#include "supply_audit/licensecheck.hpp"
#include "supply_audit/snapshot.hpp"
#include "supply_audit/squatdetect.hpp"

namespace supply_audit {

using Json = nlohmann::json;

inline constexpr std::size_t kDefaultMembersThreshold = 10000;

Json depth_to_json(Depth depth);
Depth depth_from_json(const Json& j);

// {origin, depth, size, members?}; members omitted when size > threshold.
Json to_json(const ReachResult& r, std::size_t members_threshold = kDefaultMembersThreshold);
ReachResult reach_from_json(const Json& j);

Json to_json(const SquatCandidate& c, const Snapshot& s);
SquatCandidate squat_candidate_from_json(const Json& j);
Json to_json(const SquatReport& r, const Snapshot& s);

Json to_json(const Violation& v);
Violation violation_from_json(const Json& j);
Json license_table_rows(const LicenseReport& r);

Json to_json(const ScanFlag& f);
Json to_json(const ScriptFindings& f);
ScriptFindings findings_from_json(const Json& j);
Json to_json(const CorpusSummary& s);

Json to_json(const Advisory& a);
Json to_json(const TimelineRow& row);
Json to_json(const ExposureRecord& e, std::size_t members_threshold = kDefaultMembersThreshold);
Json to_json(const PatchLagSummary& p);

Json to_json(const YearlyStats& stats);

// RFC 4180 quoting.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace supply_audit
