#include "supply_audit/licensecheck.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <fstream>
#include <json.hpp>

#include "supply_audit/error.hpp"

namespace supply_audit {

namespace {

struct LicenseInfo {
  LicenseId id;
  const char* name;
  const char* display;
  std::optional<int> rank;
};

constexpr std::array<LicenseInfo, 12> kLicenses{{
    {LicenseId::PublicDomain, "PUBLIC_DOMAIN", "Public Domain", 0},
    {LicenseId::Mit, "MIT", "MIT", 1},
    {LicenseId::Bsd, "BSD", "BSD", 1},
    {LicenseId::Apache2, "APACHE_2", "Apache 2.0", 2},
    {LicenseId::Mpl2, "MPL_2", "MPL 2.0", 3},
    {LicenseId::Lgpl2, "LGPL_2", "LGPLv2", 4},
    {LicenseId::Lgpl3, "LGPL_3", "LGPLv3", 4},
    {LicenseId::Gpl2, "GPL_2", "GPLv2", 5},
    {LicenseId::Gpl3, "GPL_3", "GPLv3", 5},
    {LicenseId::Agpl3, "AGPL_3", "AGPLv3", 6},
    {LicenseId::Proprietary, "PROPRIETARY", "Proprietary", std::nullopt},
    {LicenseId::Unknown, "UNKNOWN", "Unknown", std::nullopt},
}};

const LicenseInfo& info(LicenseId id) { return kLicenses[static_cast<std::size_t>(id)]; }

// Lowercase, every non-alphanumeric run becomes one space, trimmed.
std::string fold(std::string_view text) {
  std::string out;
  bool space = false;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      if (space && !out.empty()) out.push_back(' ');
      space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      space = true;
    }
  }
  return out;
}

struct Alias {
  const char* text;  // already folded
  LicenseId id;
};

constexpr Alias kAliases[] = {
    {"public domain", LicenseId::PublicDomain},
    {"unlicense", LicenseId::PublicDomain},
    {"the unlicense", LicenseId::PublicDomain},
    {"cc0", LicenseId::PublicDomain},
    {"cc0 1 0", LicenseId::PublicDomain},
    {"cc0 1 0 universal", LicenseId::PublicDomain},
    {"wtfpl", LicenseId::PublicDomain},
    {"mit", LicenseId::Mit},
    {"mit license", LicenseId::Mit},
    {"mit licence", LicenseId::Mit},
    {"the mit license", LicenseId::Mit},
    {"expat", LicenseId::Mit},
    {"x11", LicenseId::Mit},
    {"isc", LicenseId::Mit},
    {"isc license", LicenseId::Mit},
    {"bsd", LicenseId::Bsd},
    {"bsd license", LicenseId::Bsd},
    {"new bsd", LicenseId::Bsd},
    {"new bsd license", LicenseId::Bsd},
    {"modified bsd", LicenseId::Bsd},
    {"simplified bsd", LicenseId::Bsd},
    {"bsd 2 clause", LicenseId::Bsd},
    {"bsd 3 clause", LicenseId::Bsd},
    {"2 clause bsd", LicenseId::Bsd},
    {"3 clause bsd", LicenseId::Bsd},
    {"apache", LicenseId::Apache2},
    {"apache2", LicenseId::Apache2},
    {"apache 2", LicenseId::Apache2},
    {"apache 2 0", LicenseId::Apache2},
    {"apache license", LicenseId::Apache2},
    {"apache license 2 0", LicenseId::Apache2},
    {"apache license version 2 0", LicenseId::Apache2},
    {"apache software license", LicenseId::Apache2},
    {"asl 2 0", LicenseId::Apache2},
    {"mpl", LicenseId::Mpl2},
    {"mpl 2", LicenseId::Mpl2},
    {"mpl 2 0", LicenseId::Mpl2},
    {"mozilla public license 2 0", LicenseId::Mpl2},
    {"lgpl", LicenseId::Lgpl3},
    {"lgplv2", LicenseId::Lgpl2},
    {"lgpl 2", LicenseId::Lgpl2},
    {"lgpl 2 1", LicenseId::Lgpl2},
    {"lgplv2 1", LicenseId::Lgpl2},
    {"lgplv3", LicenseId::Lgpl3},
    {"lgpl 3", LicenseId::Lgpl3},
    {"lgpl 3 0", LicenseId::Lgpl3},
    {"gpl", LicenseId::Gpl3},
    {"gplv2", LicenseId::Gpl2},
    {"gpl 2", LicenseId::Gpl2},
    {"gpl 2 0", LicenseId::Gpl2},
    {"gplv3", LicenseId::Gpl3},
    {"gpl 3", LicenseId::Gpl3},
    {"gpl 3 0", LicenseId::Gpl3},
    {"gnu gpl", LicenseId::Gpl3},
    {"gnu gpl v3", LicenseId::Gpl3},
    {"gnu gplv3", LicenseId::Gpl3},
    {"gnu general public license v3", LicenseId::Gpl3},
    {"gnu general public license v3 0", LicenseId::Gpl3},
    {"gnu general public license v2", LicenseId::Gpl2},
    {"agpl", LicenseId::Agpl3},
    {"agplv3", LicenseId::Agpl3},
    {"agpl 3", LicenseId::Agpl3},
    {"agpl 3 0", LicenseId::Agpl3},
    {"proprietary", LicenseId::Proprietary},
    {"commercial", LicenseId::Proprietary},
    {"all rights reserved", LicenseId::Proprietary},
    {"closed source", LicenseId::Proprietary},
};

class Words {
 public:
  explicit Words(const std::string& folded) : padded_(" " + folded + " ") {
    std::size_t start = 0;
    while (start < folded.size()) {
      auto end = folded.find(' ', start);
      if (end == std::string::npos) end = folded.size();
      words_.push_back(folded.substr(start, end - start));
      start = end + 1;
    }
  }
  bool has(std::string_view w) const { return std::find(words_.begin(), words_.end(), w) != words_.end(); }
  bool has_prefix(std::string_view p) const {
    return std::any_of(words_.begin(), words_.end(), [&](const std::string& w) { return w.starts_with(p); });
  }
  bool has_phrase(std::string_view phrase) const {
    return padded_.find(" " + std::string(phrase)) != std::string::npos;
  }
  // First version digit (2 or 3) appearing after position of `anchor`.
  std::optional<char> version_after(std::string_view anchor) const {
    auto pos = padded_.find(anchor);
    if (pos == std::string::npos) return std::nullopt;
    for (std::size_t i = pos + anchor.size(); i < padded_.size(); ++i) {
      if (padded_[i] == '2' || padded_[i] == '3') return padded_[i];
    }
    return std::nullopt;
  }
  const std::vector<std::string>& list() const { return words_; }
  const std::string& padded() const { return padded_; }

 private:
  std::string padded_;
  std::vector<std::string> words_;
};

bool unqualified_gpl(const Words& w) {
  if (w.has_prefix("gpl")) return true;
  const auto& words = w.list();
  for (std::size_t i = 0; i + 1 < words.size(); ++i) {
    if (words[i] == "general" && words[i + 1] == "public") {
      if (i == 0) return true;
      const auto& before = words[i - 1];
      if (before != "lesser" && before != "library" && before != "affero") return true;
    }
  }
  return false;
}

std::vector<LicenseId> substring_matches(const Words& w) {
  std::vector<LicenseId> out;
  if (w.has_phrase("affero") || w.has_prefix("agpl")) out.push_back(LicenseId::Agpl3);
  if (w.has_phrase("lesser general public") || w.has_phrase("library general public") || w.has_prefix("lgpl")) {
    auto anchor = w.has_prefix("lgpl") ? "lgpl" : "general public";
    out.push_back(w.version_after(anchor) == '2' ? LicenseId::Lgpl2 : LicenseId::Lgpl3);
  }
  if (unqualified_gpl(w)) {
    auto anchor = w.has_prefix("gpl") ? " gpl" : "general public";
    out.push_back(w.version_after(anchor) == '2' ? LicenseId::Gpl2 : LicenseId::Gpl3);
  }
  if (w.has_phrase("mozilla") || w.has_prefix("mpl")) out.push_back(LicenseId::Mpl2);
  if (w.has_prefix("apache")) out.push_back(LicenseId::Apache2);
  if (w.has_prefix("bsd") || w.has_phrase("berkeley")) out.push_back(LicenseId::Bsd);
  if (w.has("mit") || w.has("expat") || w.has("isc")) out.push_back(LicenseId::Mit);
  if (w.has_phrase("public domain") || w.has("unlicense") || w.has("cc0")) out.push_back(LicenseId::PublicDomain);
  return out;
}

}  // namespace

const char* to_string(LicenseId id) { return info(id).name; }
const char* display_name(LicenseId id) { return info(id).display; }
std::optional<int> license_rank(LicenseId id) { return info(id).rank; }

std::optional<LicenseId> parse_license_id(std::string_view text) {
  for (const auto& l : kLicenses) {
    if (text == l.name) return l.id;
  }
  return std::nullopt;
}

LicenseTable LicenseTable::defaults() { return LicenseTable{}; }

void LicenseTable::add_alias(std::string_view text, LicenseId id) { user_aliases_.emplace_back(fold(text), id); }

void LicenseTable::load_aliases(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedRecord, path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("aliases") || !doc["aliases"].is_object()) {
    throw Error(ErrorKind::MalformedRecord, path.string() + ": expected {\"aliases\": {...}}");
  }
  for (const auto& [text, value] : doc["aliases"].items()) {
    auto id = value.is_string() ? parse_license_id(value.get<std::string>()) : std::nullopt;
    if (!id) throw Error(ErrorKind::MalformedRecord, path.string() + ": unknown license id for '" + text + "'");
    add_alias(text, *id);
  }
}

LicenseId LicenseTable::normalize(std::string_view freetext) const {
  const std::string key = fold(freetext);
  if (key.empty()) return LicenseId::Unknown;
  for (const auto& [text, id] : user_aliases_) {
    if (text == key) return id;
  }
  for (const auto& alias : kAliases) {
    if (key == alias.text) return alias.id;
  }
  Words words(key);
  auto matches = substring_matches(words);
  if (!matches.empty()) {
    return *std::max_element(matches.begin(), matches.end(), [](LicenseId a, LicenseId b) {
      return *license_rank(a) < *license_rank(b);
    });
  }
  if (words.has("proprietary") || words.has("commercial") || words.has_phrase("all rights reserved") ||
      words.has_phrase("closed source")) {
    return LicenseId::Proprietary;
  }
  return LicenseId::Unknown;
}

LicenseId LicenseTable::package_license(const PackageRecord& record) const {
  LicenseId id = normalize(record.license_text);
  if (id != LicenseId::Unknown) return id;
  std::optional<LicenseId> best;
  for (const auto& c : record.classifiers) {
    if (!c.starts_with("License ::")) continue;
    auto last = c.rfind("::");
    LicenseId hint = normalize(std::string_view(c).substr(last + 2));
    if (hint == LicenseId::Unknown) continue;
    if (!best || license_rank(hint).value_or(-1) > license_rank(*best).value_or(-1)) best = hint;
  }
  return best.value_or(LicenseId::Unknown);
}

LicenseId normalize_license(std::string_view freetext) { return LicenseTable::defaults().normalize(freetext); }

const char* to_string(Compatibility c) {
  switch (c) {
    case Compatibility::Ok: return "OK";
    case Compatibility::Violation: return "VIOLATION";
    case Compatibility::Indeterminate: return "INDETERMINATE";
  }
  return "?";
}

Compatibility compatible(LicenseId importer, LicenseId dependency) {
  auto ri = license_rank(importer);
  auto rd = license_rank(dependency);
  if (!ri || !rd) return Compatibility::Indeterminate;
  return *rd > *ri ? Compatibility::Violation : Compatibility::Ok;
}

const char* to_string(ViolationKind kind) { return kind == ViolationKind::Direct ? "DIRECT" : "INHERITED"; }

namespace {

std::vector<LicenseId> node_licenses(const DepGraph& g, const Snapshot& s, const LicenseTable& table) {
  std::vector<LicenseId> out(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) out[v] = table.package_license(s.at(g.name(v)));
  return out;
}

}  // namespace

LicenseReport find_violations(const DepGraph& g, const Snapshot& s, const LicenseTable& table) {
  LicenseReport report;
  auto licenses = node_licenses(g, s, table);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.forward(u)) {
      switch (compatible(licenses[u], licenses[v])) {
        case Compatibility::Ok: break;
        case Compatibility::Indeterminate: ++report.indeterminate; break;
        case Compatibility::Violation:
          report.direct.push_back({g.name(u), licenses[u], g.name(v), licenses[v], ViolationKind::Direct,
                                   {g.name(u), g.name(v)}});
          ++report.by_pair[{licenses[u], licenses[v]}];
          break;
      }
    }
  }
  return report;
}

std::vector<Violation> transitive_violations(const DepGraph& g, const Snapshot& s, const std::vector<Violation>& direct,
                                             Depth depth, const LicenseTable& table) {
  auto licenses = node_licenses(g, s, table);
  std::map<std::pair<NodeId, NodeId>, Violation> best;

  for (const auto& d : direct) {
    const NodeId x = g.require(d.importer);
    const NodeId y = g.require(d.dependency);
    // BFS over dependents of x, remembering the next hop towards x.
    std::vector<std::uint32_t> dist(g.node_count(), UINT32_MAX);
    std::vector<NodeId> toward(g.node_count(), x);
    std::deque<NodeId> queue{x};
    dist[x] = 0;
    while (!queue.empty()) {
      NodeId v = queue.front();
      queue.pop_front();
      if (!depth.allows(dist[v] + 1)) continue;
      for (NodeId z : g.reverse(v)) {
        if (dist[z] != UINT32_MAX) continue;
        dist[z] = dist[v] + 1;
        toward[z] = v;
        queue.push_back(z);
        if (z == y || compatible(licenses[z], licenses[y]) != Compatibility::Violation) continue;

        std::vector<CanonicalName> path;
        for (NodeId w = z; w != x; w = toward[w]) path.push_back(g.name(w));
        path.push_back(g.name(x));
        path.push_back(g.name(y));
        auto key = std::pair{z, y};
        auto it = best.find(key);
        Violation v{g.name(z), licenses[z], g.name(y), licenses[y], ViolationKind::Inherited, std::move(path)};
        if (it == best.end()) {
          best.emplace(key, std::move(v));
        } else if (v.path.size() < it->second.path.size()) {
          it->second = std::move(v);
        }
      }
    }
  }
  std::vector<Violation> out;
  out.reserve(best.size());
  for (auto& [_, v] : best) out.push_back(std::move(v));
  return out;
}

}  // namespace supply_audit
