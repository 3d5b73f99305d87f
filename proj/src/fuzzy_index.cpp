#include "supply_audit/fuzzy_index.hpp"

#include <algorithm>
#include <stdexcept>

#include "supply_audit/parallel.hpp"

namespace supply_audit {

std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t bounded_edit_distance(std::string_view a, std::string_view b, std::size_t limit) {
  const std::size_t over = limit + 1;
  if (a.size() < b.size()) std::swap(a, b);
  if (a.size() - b.size() > limit) return over;
  if (b.empty()) return a.size();

  // Cells outside the diagonal band |i - j| <= limit can never be <= limit,
  // so they are treated as `over`.
  constexpr std::size_t kStack = 64;
  std::size_t stack_rows[2][kStack];
  std::vector<std::size_t> heap_rows;
  std::size_t* prev = stack_rows[0];
  std::size_t* cur = stack_rows[1];
  if (b.size() + 1 > kStack) {
    heap_rows.resize(2 * (b.size() + 1));
    prev = heap_rows.data();
    cur = heap_rows.data() + b.size() + 1;
  }
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j <= limit ? j : over;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    const std::size_t lo = i > limit ? i - limit : 1;
    const std::size_t hi = std::min(b.size(), i + limit);
    cur[lo - 1] = lo == 1 && i <= limit ? i : over;
    std::size_t row_min = cur[lo - 1];
    for (std::size_t j = lo; j <= hi; ++j) {
      std::size_t best = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      best = std::min({best, prev[j] + 1, cur[j - 1] + 1});
      cur[j] = std::min(best, over);
      row_min = std::min(row_min, cur[j]);
    }
    if (hi < b.size()) cur[hi + 1] = over;
    if (row_min > limit) return over;
    std::swap(prev, cur);
  }
  return std::min(prev[b.size()], over);
}

namespace {

// Segment boundaries for a string of length len split into parts pieces;
// the later pieces take the extra characters.
struct Segment {
  std::size_t start;
  std::size_t length;
};

std::vector<Segment> partition(std::size_t len, std::size_t parts) {
  std::vector<Segment> out;
  const std::size_t base = len / parts;
  const std::size_t longer = len % parts;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    std::size_t l = base + (i >= parts - longer ? 1 : 0);
    out.push_back({pos, l});
    pos += l;
  }
  return out;
}

std::uint64_t segment_key(std::size_t len, std::size_t index, std::string_view text) {
  // FNV-1a over (len, index, text). Collisions only add candidates.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  mix(static_cast<unsigned char>(len & 0xff));
  mix(static_cast<unsigned char>((len >> 8) & 0xff));
  mix(static_cast<unsigned char>(index));
  for (char c : text) mix(static_cast<unsigned char>(c));
  return h;
}

}  // namespace

FuzzyIndex FuzzyIndex::build(std::span<const std::string> names, unsigned max_distance) {
  if (max_distance < 1 || max_distance > 3) throw std::invalid_argument("max edit distance must be 1, 2 or 3");
  FuzzyIndex idx;
  idx.max_d_ = max_distance;
  idx.names_.assign(names.begin(), names.end());
  std::sort(idx.names_.begin(), idx.names_.end());
  idx.names_.erase(std::unique(idx.names_.begin(), idx.names_.end()), idx.names_.end());

  const std::size_t parts = max_distance + 1;
  for (std::uint32_t id = 0; id < idx.names_.size(); ++id) {
    const std::string& s = idx.names_[id];
    if (s.size() <= max_distance) {
      idx.short_names_.push_back(id);
      continue;
    }
    auto segs = partition(s.size(), parts);
    for (std::size_t i = 0; i < parts; ++i) {
      idx.segments_[segment_key(s.size(), i, std::string_view(s).substr(segs[i].start, segs[i].length))].push_back(id);
    }
  }
  return idx;
}

std::vector<std::uint32_t> FuzzyIndex::candidates(std::string_view query, unsigned d, std::uint32_t min_id) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t id : short_names_) {
    if (id < min_id) continue;
    const std::size_t len = names_[id].size();
    const std::size_t gap = len > query.size() ? len - query.size() : query.size() - len;
    if (gap <= d) out.push_back(id);
  }
  const long qlen = static_cast<long>(query.size());
  const std::size_t parts = max_d_ + 1;
  const long lo_len = std::max<long>(qlen - d, max_d_ + 1);
  for (long len = lo_len; len <= qlen + static_cast<long>(d); ++len) {
    const long delta = qlen - len;
    auto segs = partition(static_cast<std::size_t>(len), parts);
    for (std::size_t i = 0; i < parts; ++i) {
      const long seg_len = static_cast<long>(segs[i].length);
      // |shift| is bounded by edits before the segment, |delta - shift| by
      // edits after it. With exactly d + 1 segments and d edits some
      // untouched segment i has at most i edits before it and d - i after.
      long lo = std::max<long>(-static_cast<long>(d), delta - d);
      long hi = std::min<long>(d, delta + d);
      if (d == max_d_) {
        const long before = static_cast<long>(i), after = static_cast<long>(d) - before;
        lo = std::max<long>(-before, delta - after);
        hi = std::min<long>(before, delta + after);
      }
      for (long shift = lo; shift <= hi; ++shift) {
        const long pos = static_cast<long>(segs[i].start) + shift;
        if (pos < 0 || pos + seg_len > qlen) continue;
        auto it = segments_.find(segment_key(static_cast<std::size_t>(len), i,
                                             query.substr(static_cast<std::size_t>(pos), static_cast<std::size_t>(seg_len))));
        if (it == segments_.end()) continue;
        // Buckets hold ascending ids.
        auto first = std::lower_bound(it->second.begin(), it->second.end(), min_id);
        out.insert(out.end(), first, it->second.end());
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Neighbour> FuzzyIndex::neighbors(std::string_view query, unsigned d) const {
  if (d > max_d_) throw std::invalid_argument("query distance exceeds the index maximum");
  std::vector<Neighbour> out;
  for (std::uint32_t id : candidates(query, d)) {
    const std::string& s = names_[id];
    if (s == query) continue;
    std::size_t dist = bounded_edit_distance(query, s, d);
    if (dist <= d) out.push_back({s, dist});
  }
  // Ids are in name order already.
  return out;
}

std::vector<NamePair> FuzzyIndex::all_pairs(unsigned d, unsigned threads) const {
  if (d > max_d_) throw std::invalid_argument("query distance exceeds the index maximum");
  std::vector<std::vector<NamePair>> per_name(names_.size());
  parallel_for(names_.size(), threads, [&](std::size_t i) {
    const std::string& q = names_[i];
    for (std::uint32_t id : candidates(q, d, static_cast<std::uint32_t>(i + 1))) {
      std::size_t dist = bounded_edit_distance(q, names_[id], d);
      if (dist <= d) per_name[i].push_back({q, names_[id], dist});
    }
  });
  std::vector<NamePair> out;
  for (auto& v : per_name) out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  // names_ is sorted and ids ascend within each bucket, so `out` is sorted.
  return out;
}

}  // namespace supply_audit
