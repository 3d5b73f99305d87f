#include "supply_audit/squatdetect.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "supply_audit/error.hpp"

namespace supply_audit {

extern const char* const kBundledBuiltinModules;

const char* to_string(SquatRule rule) {
  switch (rule) {
    case SquatRule::EditDistance: return "EDIT_DISTANCE";
    case SquatRule::WordReorder: return "WORD_REORDER";
    case SquatRule::SeparatorCollapse: return "SEPARATOR_COLLAPSE";
    case SquatRule::VersionSuffix: return "VERSION_SUFFIX";
    case SquatRule::BuiltinShadow: return "BUILTIN_SHADOW";
  }
  return "?";
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::OffensiveSuspect: return "OFFENSIVE_SUSPECT";
    case Verdict::Defensive: return "DEFENSIVE";
    case Verdict::WarningStub: return "WARNING_STUB";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

std::optional<SquatRule> parse_squat_rule(std::string_view text) {
  for (auto r : {SquatRule::EditDistance, SquatRule::WordReorder, SquatRule::SeparatorCollapse,
                 SquatRule::VersionSuffix, SquatRule::BuiltinShadow}) {
    if (text == to_string(r)) return r;
  }
  return std::nullopt;
}

std::optional<Verdict> parse_verdict(std::string_view text) {
  for (auto v : {Verdict::OffensiveSuspect, Verdict::Defensive, Verdict::WarningStub, Verdict::Unknown}) {
    if (text == to_string(v)) return v;
  }
  return std::nullopt;
}

FuzzyIndex build_name_index(const std::vector<CanonicalName>& names, unsigned max_distance) {
  std::vector<std::string> raw;
  raw.reserve(names.size());
  for (const auto& n : names) raw.push_back(n.str());
  return FuzzyIndex::build(raw, max_distance);
}

FuzzyIndex build_name_index(const Snapshot& snapshot, unsigned max_distance) {
  std::vector<std::string> raw;
  raw.reserve(snapshot.size());
  for (const auto& [name, _] : snapshot.packages()) raw.push_back(name.str());
  return FuzzyIndex::build(raw, max_distance);
}

std::pair<CanonicalName, CanonicalName> orient_pair(const Snapshot& snapshot, const CanonicalName& a,
                                                    const CanonicalName& b) {
  const PackageRecord* ra = snapshot.find(a);
  const PackageRecord* rb = snapshot.find(b);
  auto a_is_target = [&] {
    if (ra && rb && ra->downloads && rb->downloads && *ra->downloads != *rb->downloads) {
      return *ra->downloads > *rb->downloads;
    }
    auto da = ra ? ra->first_release_date() : std::nullopt;
    auto db = rb ? rb->first_release_date() : std::nullopt;
    if (da && db && *da != *db) return *da < *db;
    return a < b;
  }();
  return a_is_target ? std::pair{b, a} : std::pair{a, b};
}

std::vector<SquatCandidate> find_typosquats(const FuzzyIndex& index, const Snapshot& snapshot,
                                            unsigned max_distance, unsigned threads) {
  std::vector<SquatCandidate> out;
  for (const auto& pair : index.all_pairs(max_distance, threads)) {
    auto [suspect, target] = orient_pair(snapshot, canonical_name(pair.first), canonical_name(pair.second));
    out.push_back({std::move(suspect), std::move(target), SquatRule::EditDistance, pair.distance, Verdict::Unknown});
  }
  return out;
}

namespace {

std::vector<std::string> tokens(const std::string& name) {
  std::vector<std::string> out;
  std::stringstream ss(name);
  for (std::string t; std::getline(ss, t, '-');) out.push_back(t);
  return out;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

// Emits every unordered pair inside each group of size >= 2.
void pair_groups(const Snapshot& snapshot, const std::map<std::string, std::vector<CanonicalName>>& groups,
                 SquatRule rule, std::vector<SquatCandidate>& out) {
  for (const auto& [_, members] : groups) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        auto [suspect, target] = orient_pair(snapshot, members[i], members[j]);
        out.push_back({std::move(suspect), std::move(target), rule, 0, Verdict::Unknown});
      }
    }
  }
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::vector<SquatCandidate> detect_rename_variants(const Snapshot& snapshot) {
  std::vector<SquatCandidate> out;
  std::map<std::string, std::vector<CanonicalName>> by_tokens;
  std::map<std::string, std::vector<CanonicalName>> by_collapsed;
  for (const auto& [name, _] : snapshot.packages()) {
    auto toks = tokens(name.str());
    if (toks.size() >= 2) {
      std::sort(toks.begin(), toks.end());
      by_tokens[join(toks, ' ')].push_back(name);
    }
    std::string collapsed = name.str();
    std::erase(collapsed, '-');
    by_collapsed[collapsed].push_back(name);
  }
  pair_groups(snapshot, by_tokens, SquatRule::WordReorder, out);
  pair_groups(snapshot, by_collapsed, SquatRule::SeparatorCollapse, out);

  std::set<std::pair<CanonicalName, CanonicalName>> suffix_pairs;
  for (const auto& [name, _] : snapshot.packages()) {
    std::set<std::string> variants;
    auto toks = tokens(name.str());
    for (std::size_t i = 1; i < toks.size(); ++i) {
      if (toks[i] != "3") continue;
      auto rest = toks;
      rest.erase(rest.begin() + static_cast<long>(i));
      variants.insert(join(rest, '-'));
    }
    const std::string& s = name.str();
    if (s.starts_with("python3")) {
      std::string tail = s.substr(7);
      variants.insert("python" + tail);
      variants.insert("py" + tail);
    }
    for (const auto& v : variants) {
      if (v.empty() || v.front() == '-' || v == s) continue;
      CanonicalName other = canonical_name(v);
      if (!snapshot.contains(other) || other == name) continue;
      suffix_pairs.insert(name < other ? std::pair{name, other} : std::pair{other, name});
    }
  }
  for (const auto& [a, b] : suffix_pairs) {
    auto [suspect, target] = orient_pair(snapshot, a, b);
    out.push_back({std::move(suspect), std::move(target), SquatRule::VersionSuffix, 0, Verdict::Unknown});
  }
  return out;
}

std::vector<SquatCandidate> detect_builtin_shadow(const Snapshot& snapshot, const std::vector<std::string>& reserved) {
  std::set<CanonicalName> names;
  for (const auto& raw : reserved) {
    // Private modules ("_thread", "__future__") would canonicalize onto
    // unrelated public names.
    if (raw.empty() || raw.front() == '_') continue;
    try {
      names.insert(canonical_name(raw));
    } catch (const Error&) {
    }
  }
  std::vector<SquatCandidate> out;
  for (const auto& n : names) {
    if (snapshot.contains(n)) out.push_back({n, n, SquatRule::BuiltinShadow, 0, Verdict::Unknown});
  }
  return out;
}

std::vector<std::string> load_name_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

const std::vector<std::string>& default_reserved_builtins() {
  static const std::vector<std::string> list = [] {
    std::vector<std::string> out;
    std::stringstream ss(kBundledBuiltinModules);
    for (std::string line; std::getline(ss, line);) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      out.push_back(line.substr(first, line.find_last_not_of(" \t\r") - first + 1));
    }
    return out;
  }();
  return list;
}

std::vector<std::string> default_warning_phrases() { return {"did you mean to install"}; }

SquatCandidate classify_candidate(SquatCandidate c, const Snapshot& snapshot,
                                  const std::vector<std::string>& warning_phrases) {
  const PackageRecord& suspect = snapshot.at(c.suspect);
  const PackageRecord* target = nullptr;
  if (c.rule != SquatRule::BuiltinShadow) {
    target = &snapshot.at(c.target);
    for (const auto& m : suspect.maintainers) {
      if (target->maintainers.count(m)) {
        c.verdict = Verdict::Defensive;
        return c;
      }
    }
  }
  std::string text = lowercase(suspect.description);
  for (const auto& cl : suspect.classifiers) text += "\n" + lowercase(cl);
  for (const auto& phrase : warning_phrases) {
    if (!phrase.empty() && text.find(lowercase(phrase)) != std::string::npos) {
      c.verdict = Verdict::WarningStub;
      return c;
    }
  }
  if (suspect.maintainers.empty() || (target && target->maintainers.empty())) {
    c.verdict = Verdict::Unknown;
  } else {
    c.verdict = Verdict::OffensiveSuspect;
  }
  return c;
}

SquatReport scan_all(const Snapshot& snapshot, const SquatConfig& config) {
  std::vector<SquatCandidate> all;
  if (snapshot.size() > 1) {
    auto index = build_name_index(snapshot, config.max_distance);
    all = find_typosquats(index, snapshot, config.max_distance, config.threads);
  }
  auto variants = detect_rename_variants(snapshot);
  all.insert(all.end(), variants.begin(), variants.end());
  auto shadows = detect_builtin_shadow(snapshot, config.reserved);
  all.insert(all.end(), shadows.begin(), shadows.end());

  auto key = [](const SquatCandidate& c) { return std::tie(c.suspect, c.target, c.rule); };
  std::sort(all.begin(), all.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  all.erase(std::unique(all.begin(), all.end(), [&](const auto& a, const auto& b) { return key(a) == key(b); }),
            all.end());

  SquatReport report;
  for (auto& c : all) {
    c = classify_candidate(std::move(c), snapshot, config.warning_phrases);
    ++report.rule_counts[c.rule];
    ++report.verdict_counts[c.verdict];
  }
  report.candidates = std::move(all);
  return report;
}

}  // namespace supply_audit
