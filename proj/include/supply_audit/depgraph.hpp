#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "supply_audit/snapshot.hpp"

namespace supply_audit {

// Traversal depth in hops. Defaults to 5; `unlimited()` walks the whole
// connected component.
class Depth {
 public:
  constexpr Depth() = default;
  static constexpr Depth hops(std::uint32_t n) { return Depth(n); }
  static constexpr Depth unlimited() {
    Depth d;
    d.limit_.reset();
    return d;
  }

  constexpr bool is_unlimited() const { return !limit_.has_value(); }
  constexpr std::optional<std::uint32_t> limit() const { return limit_; }
  constexpr bool allows(std::uint32_t distance) const { return !limit_ || distance <= *limit_; }
  std::string to_string() const { return limit_ ? std::to_string(*limit_) : "unlimited"; }

  friend constexpr bool operator==(const Depth&, const Depth&) = default;

 private:
  constexpr explicit Depth(std::uint32_t n) : limit_(n) {}
  std::optional<std::uint32_t> limit_ = 5;
};

using NodeId = std::uint32_t;

// Package dependency graph (latest release, name level) plus the
// maintainer ownership relation. Immutable once built.
class DepGraph {
 public:
  static DepGraph build(const Snapshot& snapshot);

  std::size_t node_count() const noexcept { return names_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::optional<NodeId> id(const CanonicalName& name) const;
  NodeId require(const CanonicalName& name) const;  // UnknownPackage
  const CanonicalName& name(NodeId id) const { return names_[id]; }
  const std::vector<CanonicalName>& names() const noexcept { return names_; }

  // Sorted neighbour ids.
  std::span<const NodeId> forward(NodeId id) const { return forward_[id]; }
  std::span<const NodeId> reverse(NodeId id) const { return reverse_[id]; }
  // Parallel to forward(id): the date each edge first appeared.
  std::span<const Date> forward_dates(NodeId id) const { return forward_dates_[id]; }

  std::vector<CanonicalName> dependencies(const CanonicalName& name) const;
  std::vector<CanonicalName> dependents(const CanonicalName& name) const;
  std::optional<Date> edge_date(const CanonicalName& from, const CanonicalName& to) const;

  // Ownership. Maintainer ids index the sorted email list.
  const std::vector<std::string>& maintainers() const noexcept { return maintainers_; }
  std::optional<std::uint32_t> maintainer_id(const std::string& email) const;
  std::span<const NodeId> owned_packages(std::uint32_t maintainer) const { return owners_[maintainer]; }
  std::span<const std::uint32_t> owners_of(NodeId id) const { return owned_by_[id]; }

  std::optional<Date> first_release(NodeId id) const { return first_release_[id]; }
  Date snapshot_date() const noexcept { return snapshot_date_; }

  // Requirements naming packages absent from the snapshot; not part of the
  // adjacency.
  const std::vector<DanglingEdge>& dangling() const noexcept { return dangling_; }

 private:
  std::vector<CanonicalName> names_;
  std::unordered_map<CanonicalName, NodeId> index_;
  std::vector<std::vector<NodeId>> forward_;
  std::vector<std::vector<Date>> forward_dates_;
  std::vector<std::vector<NodeId>> reverse_;
  std::vector<std::string> maintainers_;
  std::unordered_map<std::string, std::uint32_t> maintainer_index_;
  std::vector<std::vector<NodeId>> owners_;
  std::vector<std::vector<std::uint32_t>> owned_by_;
  std::vector<std::optional<Date>> first_release_;
  std::vector<DanglingEdge> dangling_;
  std::size_t edge_count_ = 0;
  Date snapshot_date_{};
};

inline DepGraph build_graph(const Snapshot& snapshot) { return DepGraph::build(snapshot); }

struct ReachResult {
  std::string origin;
  std::vector<CanonicalName> members;  // sorted
  Depth depth;

  std::size_t size() const noexcept { return members.size(); }
};

// Packages that depend on `package` within `depth` hops, excluding itself.
ReachResult package_reach(const DepGraph& g, const CanonicalName& package, Depth depth = {});

// Union of reach over the maintainer's packages, minus those packages.
ReachResult maintainer_reach(const DepGraph& g, const std::string& email, Depth depth = {});

// Packages `package` pulls in within `depth` hops (ITP), excluding itself.
std::vector<CanonicalName> implicit_trust_packages(const DepGraph& g, const CanonicalName& package,
                                                   Depth depth = {});

// Maintainers of ITP(package) and the package itself, minus the package's
// own maintainers (ITM).
std::vector<std::string> implicit_trust_maintainers(const DepGraph& g, const CanonicalName& package,
                                                    Depth depth = {});

// Year -> reach size using only edges and packages that existed by Dec 31
// of that year. Empty when the package has no releases.
std::map<int, std::size_t> reach_series(const DepGraph& g, const CanonicalName& package, Depth depth = {});

enum class Metric { PackageReach, MaintainerReach, ImplicitTrustPackages, ImplicitTrustMaintainers };

const char* to_string(Metric metric);
std::optional<Metric> parse_metric(std::string_view text);

struct RankedEntry {
  std::string key;
  std::size_t size = 0;
  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

// Descending by size, ties by key. Keys are package names, or maintainer
// emails for MaintainerReach.
std::vector<RankedEntry> top_k(const DepGraph& g, Metric metric, std::size_t k, Depth depth = {},
                               unsigned threads = 1);

// Multi-source breadth-first walk over reverse edges (dependents) or
// forward edges (dependencies). Returns ids within `depth` hops of any
// source, sources excluded, in ascending id order.
std::vector<NodeId> reachable_from(const DepGraph& g, std::span<const NodeId> sources, Depth depth,
                                   bool follow_reverse);

}  // namespace supply_audit
