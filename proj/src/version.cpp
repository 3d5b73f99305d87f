#include <algorithm>
#include <cctype>
#include <charconv>

#include "supply_audit/error.hpp"
#include "supply_audit/snapshot.hpp"

namespace supply_audit {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Reads a run of digits at `pos`; advances pos. False on empty or overflow.
bool read_number(std::string_view s, std::size_t& pos, std::uint64_t& out) {
  std::size_t start = pos;
  while (pos < s.size() && is_digit(s[pos])) ++pos;
  if (pos == start) return false;
  auto [ptr, ec] = std::from_chars(s.data() + start, s.data() + pos, out);
  return ec == std::errc{} && ptr == s.data() + pos;
}

[[noreturn]] void bad_version(std::string_view text) {
  throw Error(ErrorKind::MalformedVersion, "'" + std::string(text) + "'");
}

[[noreturn]] void bad_specifier(std::string_view text, const std::string& why) {
  throw Error(ErrorKind::MalformedSpecifier, "'" + std::string(text) + "': " + why);
}

}  // namespace

CanonicalName canonical_name(std::string_view raw) {
  std::string_view s = trim(raw);
  std::string out;
  out.reserve(s.size());
  bool pending_sep = false;
  for (char c : s) {
    if (c == '-' || c == '_' || c == '.') {
      pending_sep = true;
      continue;
    }
    if (!std::isalnum(static_cast<unsigned char>(c))) {
      throw Error(ErrorKind::InvalidName, "'" + std::string(raw) + "'");
    }
    if (pending_sep && !out.empty()) out.push_back('-');
    pending_sep = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (out.empty()) throw Error(ErrorKind::EmptyName, "'" + std::string(raw) + "'");
  return CanonicalName(std::move(out));
}

Version::Version(std::vector<std::uint64_t> release, std::optional<PreRelease> pre)
    : release_(std::move(release)), pre_(pre) {
  if (release_.empty()) throw Error(ErrorKind::MalformedVersion, "empty release");
}

std::string Version::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < release_.size(); ++i) {
    if (i) out.push_back('.');
    out += std::to_string(release_[i]);
  }
  if (pre_) {
    switch (pre_->phase) {
      case PrePhase::Alpha: out += "a"; break;
      case PrePhase::Beta: out += "b"; break;
      case PrePhase::ReleaseCandidate: out += "rc"; break;
    }
    out += std::to_string(pre_->number);
  }
  return out;
}

std::strong_ordering operator<=>(const Version& a, const Version& b) {
  const auto& ra = a.release_;
  const auto& rb = b.release_;
  const std::size_t n = std::max(ra.size(), rb.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t x = i < ra.size() ? ra[i] : 0;
    std::uint64_t y = i < rb.size() ? rb[i] : 0;
    if (x != y) return x <=> y;
  }
  if (!a.pre_ && !b.pre_) return std::strong_ordering::equal;
  if (!a.pre_) return std::strong_ordering::greater;
  if (!b.pre_) return std::strong_ordering::less;
  if (a.pre_->phase != b.pre_->phase) return a.pre_->phase <=> b.pre_->phase;
  return a.pre_->number <=> b.pre_->number;
}

Version parse_version(std::string_view text) {
  std::string_view s = trim(text);
  if (!s.empty() && (s.front() == 'v' || s.front() == 'V')) s.remove_prefix(1);
  std::size_t pos = 0;
  std::vector<std::uint64_t> release;
  for (;;) {
    std::uint64_t seg = 0;
    if (!read_number(s, pos, seg)) bad_version(text);
    release.push_back(seg);
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      continue;
    }
    break;
  }
  std::optional<PreRelease> pre;
  if (pos < s.size()) {
    PreRelease p;
    std::string_view rest = s.substr(pos);
    if (rest.starts_with("rc")) {
      p.phase = PrePhase::ReleaseCandidate;
      pos += 2;
    } else if (rest.front() == 'a') {
      p.phase = PrePhase::Alpha;
      pos += 1;
    } else if (rest.front() == 'b') {
      p.phase = PrePhase::Beta;
      pos += 1;
    } else {
      bad_version(text);
    }
    if (!read_number(s, pos, p.number)) bad_version(text);
    pre = p;
  }
  if (pos != s.size()) bad_version(text);
  return Version(std::move(release), pre);
}

const char* to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "==";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

void SpecifierSet::append(const SpecifierSet& other) {
  clauses_.insert(clauses_.end(), other.clauses_.begin(), other.clauses_.end());
}

std::string SpecifierSet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (i) out.push_back(',');
    out += supply_audit::to_string(clauses_[i].op);
    out += clauses_[i].version.to_string();
    if (clauses_[i].wildcard) out += ".*";
  }
  return out;
}

SpecifierSet parse_specifier(std::string_view text) {
  std::vector<SpecifierClause> clauses;
  std::string_view all = trim(text);
  if (all.empty()) return SpecifierSet{};

  std::size_t start = 0;
  while (start <= all.size()) {
    std::size_t comma = all.find(',', start);
    std::string_view raw = trim(all.substr(start, comma == std::string_view::npos ? all.npos : comma - start));
    start = comma == std::string_view::npos ? all.size() + 1 : comma + 1;
    if (raw.empty()) bad_specifier(text, "empty clause");

    bool compatible_release = false;
    SpecifierClause clause;
    if (raw.starts_with("===")) {
      bad_specifier(text, "arbitrary equality is not supported");
    } else if (raw.starts_with("~=")) {
      compatible_release = true;
      raw.remove_prefix(2);
    } else if (raw.starts_with("==")) {
      clause.op = CompareOp::Eq;
      raw.remove_prefix(2);
    } else if (raw.starts_with("!=")) {
      clause.op = CompareOp::Ne;
      raw.remove_prefix(2);
    } else if (raw.starts_with("<=")) {
      clause.op = CompareOp::Le;
      raw.remove_prefix(2);
    } else if (raw.starts_with(">=")) {
      clause.op = CompareOp::Ge;
      raw.remove_prefix(2);
    } else if (raw.starts_with("<")) {
      clause.op = CompareOp::Lt;
      raw.remove_prefix(1);
    } else if (raw.starts_with(">")) {
      clause.op = CompareOp::Gt;
      raw.remove_prefix(1);
    } else {
      bad_specifier(text, "missing comparison operator");
    }
    raw = trim(raw);
    if (raw.ends_with(".*")) {
      if (clause.op != CompareOp::Eq && clause.op != CompareOp::Ne) {
        bad_specifier(text, "wildcard only allowed with == and !=");
      }
      if (compatible_release) bad_specifier(text, "wildcard not allowed with ~=");
      raw.remove_suffix(2);
      clause.wildcard = true;
    }
    try {
      clause.version = parse_version(raw);
    } catch (const Error&) {
      bad_specifier(text, "bad version '" + std::string(raw) + "'");
    }
    if (clause.wildcard && clause.version.pre()) bad_specifier(text, "wildcard on a pre-release");

    if (compatible_release) {
      const auto& rel = clause.version.release();
      if (rel.size() < 2) bad_specifier(text, "~= needs at least two release segments");
      clauses.push_back({CompareOp::Ge, clause.version, false});
      std::vector<std::uint64_t> prefix(rel.begin(), rel.end() - 1);
      clauses.push_back({CompareOp::Eq, Version(std::move(prefix)), true});
    } else {
      clauses.push_back(std::move(clause));
    }
  }
  return SpecifierSet(std::move(clauses));
}

bool clause_matches(const Version& v, const SpecifierClause& clause) {
  auto prefix_match = [&] {
    const auto& pattern = clause.version.release();
    const auto& rel = v.release();
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      std::uint64_t x = i < rel.size() ? rel[i] : 0;
      if (x != pattern[i]) return false;
    }
    return true;
  };
  switch (clause.op) {
    case CompareOp::Eq: return clause.wildcard ? prefix_match() : v == clause.version;
    case CompareOp::Ne: return clause.wildcard ? !prefix_match() : v != clause.version;
    case CompareOp::Lt: return v < clause.version;
    case CompareOp::Le: return v <= clause.version;
    case CompareOp::Gt: return v > clause.version;
    case CompareOp::Ge: return v >= clause.version;
  }
  return false;
}

bool version_matches(const Version& v, const SpecifierSet& spec) {
  return std::all_of(spec.clauses().begin(), spec.clauses().end(),
                     [&](const SpecifierClause& c) { return clause_matches(v, c); });
}

Requirement parse_requirement(std::string_view text) {
  std::string_view s = text;
  if (auto semi = s.find(';'); semi != std::string_view::npos) s = s.substr(0, semi);
  s = trim(s);
  std::size_t pos = 0;
  while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '-' ||
                            s[pos] == '_' || s[pos] == '.')) {
    ++pos;
  }
  CanonicalName name = canonical_name(s.substr(0, pos));
  std::string_view rest = trim(s.substr(pos));
  if (rest.starts_with("[")) {
    auto close = rest.find(']');
    if (close == std::string_view::npos) bad_specifier(text, "unterminated extras");
    rest = trim(rest.substr(close + 1));
  }
  if (rest.starts_with("(")) {
    if (!rest.ends_with(")")) bad_specifier(text, "unbalanced parenthesis");
    rest = trim(rest.substr(1, rest.size() - 2));
  }
  return Requirement{std::move(name), parse_specifier(rest)};
}

}  // namespace supply_audit
