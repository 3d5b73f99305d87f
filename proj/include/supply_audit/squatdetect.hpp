#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "supply_audit/fuzzy_index.hpp"
#include "supply_audit/snapshot.hpp"

namespace supply_audit {

enum class SquatRule { EditDistance, WordReorder, SeparatorCollapse, VersionSuffix, BuiltinShadow };
enum class Verdict { OffensiveSuspect, Defensive, WarningStub, Unknown };

const char* to_string(SquatRule rule);
const char* to_string(Verdict verdict);
std::optional<SquatRule> parse_squat_rule(std::string_view text);
std::optional<Verdict> parse_verdict(std::string_view text);

struct SquatCandidate {
  CanonicalName suspect;
  // For BuiltinShadow this is the reserved module name, equal to suspect.
  CanonicalName target;
  SquatRule rule = SquatRule::EditDistance;
  std::size_t distance = 0;
  Verdict verdict = Verdict::Unknown;
};

FuzzyIndex build_name_index(const std::vector<CanonicalName>& names, unsigned max_distance);
FuzzyIndex build_name_index(const Snapshot& snapshot, unsigned max_distance);

// Returns {suspect, target}. The target is the more popular member: higher
// downloads when both are known and differ, then the earlier first release,
// then the lexicographically smaller name.
std::pair<CanonicalName, CanonicalName> orient_pair(const Snapshot& snapshot, const CanonicalName& a,
                                                    const CanonicalName& b);

std::vector<SquatCandidate> find_typosquats(const FuzzyIndex& index, const Snapshot& snapshot,
                                            unsigned max_distance, unsigned threads = 1);

// Word reorder, separator collapse and "3"/"python3" suffix variants.
std::vector<SquatCandidate> detect_rename_variants(const Snapshot& snapshot);

std::vector<SquatCandidate> detect_builtin_shadow(const Snapshot& snapshot, const std::vector<std::string>& reserved);

// Bundled list of standard-library module names.
const std::vector<std::string>& default_reserved_builtins();
// One name per line; blank lines and '#' comments ignored.
std::vector<std::string> load_name_list(const std::filesystem::path& path);

std::vector<std::string> default_warning_phrases();

// Fills the verdict. Throws UnknownPackage when the suspect (or a non-builtin
// target) is not in the snapshot.
SquatCandidate classify_candidate(SquatCandidate candidate, const Snapshot& snapshot,
                                  const std::vector<std::string>& warning_phrases = default_warning_phrases());

struct SquatConfig {
  unsigned max_distance = 3;
  std::vector<std::string> reserved = default_reserved_builtins();
  std::vector<std::string> warning_phrases = default_warning_phrases();
  unsigned threads = 1;
};

struct SquatReport {
  // One entry per (suspect, target, rule), sorted by that key.
  std::vector<SquatCandidate> candidates;
  std::map<SquatRule, std::size_t> rule_counts;
  std::map<Verdict, std::size_t> verdict_counts;
};

SquatReport scan_all(const Snapshot& snapshot, const SquatConfig& config = {});

}  // namespace supply_audit
