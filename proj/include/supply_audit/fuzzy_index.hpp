#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace supply_audit {

// Unit-cost Levenshtein distance over bytes.
std::size_t edit_distance(std::string_view a, std::string_view b);

// Same metric, but gives up early: returns any value > limit as limit + 1.
std::size_t bounded_edit_distance(std::string_view a, std::string_view b, std::size_t limit);

struct NamePair {
  std::string first;   // lexicographically smaller
  std::string second;
  std::size_t distance = 0;
  friend auto operator<=>(const NamePair&, const NamePair&) = default;
};

struct Neighbour {
  std::string name;
  std::size_t distance = 0;
  friend auto operator<=>(const Neighbour&, const Neighbour&) = default;
};

// Name set answering "which names lie within edit distance d" for d up to
// the build-time maximum (at most 3).
//
// Every name longer than max_d is cut into max_d + 1 segments and each
// segment is indexed by (name length, segment number, text). Two strings
// within d <= max_d edits must share one untouched segment, and that
// segment reappears in the other string shifted by at most d positions, so
// probing every shifted substring of the query finds every true neighbour.
// Names of length <= max_d have empty segments and are compared directly.
// Candidates are confirmed with a banded distance check.
class FuzzyIndex {
 public:
  FuzzyIndex() = default;
  static FuzzyIndex build(std::span<const std::string> names, unsigned max_distance);

  std::size_t size() const noexcept { return names_.size(); }
  unsigned max_distance() const noexcept { return max_d_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  // Indexed names within `d` (<= max_distance) of `query`, excluding the
  // query itself; sorted by name.
  std::vector<Neighbour> neighbors(std::string_view query, unsigned d) const;
  std::vector<Neighbour> neighbors(std::string_view query) const { return neighbors(query, max_d_); }

  // Every unordered pair of indexed names with 1 <= distance <= d, sorted.
  std::vector<NamePair> all_pairs(unsigned d, unsigned threads = 1) const;

 private:
  // Ids >= min_id whose length and segments make them possible matches.
  std::vector<std::uint32_t> candidates(std::string_view query, unsigned d, std::uint32_t min_id = 0) const;

  std::vector<std::string> names_;
  unsigned max_d_ = 0;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> segments_;
  std::vector<std::uint32_t> short_names_;
};

}  // namespace supply_audit
