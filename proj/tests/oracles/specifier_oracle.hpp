#pragma once

// Direct interpretation of version/specifier text, written separately from
// the library parser: split on ',', strip the operator, compare padded
// release tuples then pre-release tags.

#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

struct V {
  std::vector<std::uint64_t> rel;
  int phase = 3;  // 0 a, 1 b, 2 rc, 3 final
  std::uint64_t pre = 0;
};

inline V parse_v(std::string s) {
  V v;
  if (!s.empty() && s[0] == 'v') s.erase(0, 1);
  std::size_t i = 0;
  while (true) {
    std::uint64_t n = 0;
    while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) n = n * 10 + static_cast<std::uint64_t>(s[i++] - '0');
    v.rel.push_back(n);
    if (i < s.size() && s[i] == '.') {
      ++i;
      continue;
    }
    break;
  }
  std::string tag;
  while (i < s.size() && isalpha(static_cast<unsigned char>(s[i]))) tag += s[i++];
  if (!tag.empty()) {
    v.phase = tag == "a" ? 0 : tag == "b" ? 1 : 2;
    while (i < s.size()) v.pre = v.pre * 10 + static_cast<std::uint64_t>(s[i++] - '0');
  }
  return v;
}

inline int cmp(const V& a, const V& b) {
  std::size_t n = std::max(a.rel.size(), b.rel.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t x = i < a.rel.size() ? a.rel[i] : 0, y = i < b.rel.size() ? b.rel[i] : 0;
    if (x != y) return x < y ? -1 : 1;
  }
  if (a.phase != b.phase) return a.phase < b.phase ? -1 : 1;
  if (a.pre != b.pre) return a.pre < b.pre ? -1 : 1;
  return 0;
}

inline bool prefix_match(const V& v, const std::string& prefix_text) {
  V p = parse_v(prefix_text);
  for (std::size_t i = 0; i < p.rel.size(); ++i) {
    std::uint64_t x = i < v.rel.size() ? v.rel[i] : 0;
    if (x != p.rel[i]) return false;
  }
  return true;
}

inline bool clause(const V& v, std::string c) {
  std::string t;
  for (char ch : c) {
    if (ch != ' ') t += ch;
  }
  auto starts = [&](const char* op) { return t.rfind(op, 0) == 0; };
  if (starts("~=")) {
    std::string rest = t.substr(2);
    std::string prefix = rest.substr(0, rest.rfind('.'));
    return cmp(v, parse_v(rest)) >= 0 && prefix_match(v, prefix);
  }
  if (starts("==") || starts("!=")) {
    bool eq = starts("==");
    std::string rest = t.substr(2);
    bool m;
    if (rest.size() >= 2 && rest.substr(rest.size() - 2) == ".*") {
      m = prefix_match(v, rest.substr(0, rest.size() - 2));
    } else {
      m = cmp(v, parse_v(rest)) == 0;
    }
    return eq ? m : !m;
  }
  if (starts("<=")) return cmp(v, parse_v(t.substr(2))) <= 0;
  if (starts(">=")) return cmp(v, parse_v(t.substr(2))) >= 0;
  if (starts("<")) return cmp(v, parse_v(t.substr(1))) < 0;
  if (starts(">")) return cmp(v, parse_v(t.substr(1))) > 0;
  return false;
}

inline bool matches(const std::string& version, const std::string& spec) {
  V v = parse_v(version);
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t comma = spec.find(',', start);
    std::string c = spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    bool blank = c.find_first_not_of(' ') == std::string::npos;
    if (!blank && !clause(v, c)) return false;
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return true;
}

}  // namespace oracle
