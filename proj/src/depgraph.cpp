#include "supply_audit/depgraph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

#include "supply_audit/error.hpp"
#include "supply_audit/parallel.hpp"

namespace supply_audit {

DepGraph DepGraph::build(const Snapshot& snapshot) {
  DepGraph g;
  g.snapshot_date_ = snapshot.snapshot_date();
  const std::size_t n = snapshot.size();
  g.names_.reserve(n);
  for (const auto& [name, _] : snapshot.packages()) {
    g.index_.emplace(name, static_cast<NodeId>(g.names_.size()));
    g.names_.push_back(name);
  }
  g.forward_.resize(n);
  g.forward_dates_.resize(n);
  g.reverse_.resize(n);
  g.owned_by_.resize(n);
  g.first_release_.resize(n);

  std::set<std::string> emails;
  for (const auto& [_, rec] : snapshot.packages()) emails.insert(rec.maintainers.begin(), rec.maintainers.end());
  g.maintainers_.assign(emails.begin(), emails.end());
  for (std::uint32_t i = 0; i < g.maintainers_.size(); ++i) g.maintainer_index_.emplace(g.maintainers_[i], i);
  g.owners_.resize(g.maintainers_.size());

  NodeId u = 0;
  for (const auto& [name, rec] : snapshot.packages()) {
    g.first_release_[u] = rec.first_release_date();
    for (const auto& m : rec.maintainers) {
      std::uint32_t mid = g.maintainer_index_.at(m);
      g.owned_by_[u].push_back(mid);
      g.owners_[mid].push_back(u);
    }

    std::vector<std::pair<NodeId, Date>> edges;
    for (const auto& req : rec.dependencies()) {
      auto target = g.index_.find(req.name);
      if (target == g.index_.end()) {
        g.dangling_.push_back({name, req.name});
        continue;
      }
      if (target->second == u) continue;
      // Releases are date-ordered, so the first hit is the earliest.
      Date since = rec.releases.back().date;
      for (const auto& r : rec.releases) {
        bool names_it = std::any_of(r.requirements.begin(), r.requirements.end(),
                                    [&](const Requirement& x) { return x.name == req.name; });
        if (names_it) {
          since = r.date;
          break;
        }
      }
      edges.emplace_back(target->second, since);
    }
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    edges.erase(std::unique(edges.begin(), edges.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
                edges.end());
    for (const auto& [v, date] : edges) {
      g.forward_[u].push_back(v);
      g.forward_dates_[u].push_back(date);
      g.reverse_[v].push_back(u);
      ++g.edge_count_;
    }
    ++u;
  }
  // reverse_ lists were filled in ascending u order, so they are sorted.
  return g;
}

std::optional<NodeId> DepGraph::id(const CanonicalName& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId DepGraph::require(const CanonicalName& name) const {
  if (auto i = id(name)) return *i;
  throw Error(ErrorKind::UnknownPackage, name.str());
}

std::vector<CanonicalName> DepGraph::dependencies(const CanonicalName& name) const {
  std::vector<CanonicalName> out;
  for (NodeId v : forward(require(name))) out.push_back(names_[v]);
  return out;
}

std::vector<CanonicalName> DepGraph::dependents(const CanonicalName& name) const {
  std::vector<CanonicalName> out;
  for (NodeId v : reverse(require(name))) out.push_back(names_[v]);
  return out;
}

std::optional<Date> DepGraph::edge_date(const CanonicalName& from, const CanonicalName& to) const {
  auto u = id(from);
  auto v = id(to);
  if (!u || !v) return std::nullopt;
  const auto& adj = forward_[*u];
  auto it = std::lower_bound(adj.begin(), adj.end(), *v);
  if (it == adj.end() || *it != *v) return std::nullopt;
  return forward_dates_[*u][static_cast<std::size_t>(it - adj.begin())];
}

std::optional<std::uint32_t> DepGraph::maintainer_id(const std::string& email) const {
  std::string key = email;
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  auto it = maintainer_index_.find(key);
  if (it == maintainer_index_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Breadth-first walk with an edge filter; `keep(from, to)` is asked for every
// traversed edge in walking direction.
template <typename Neighbours, typename Keep>
std::vector<NodeId> walk(std::size_t node_count, std::span<const NodeId> sources, Depth depth,
                         Neighbours&& neighbours, Keep&& keep) {
  std::vector<std::uint32_t> dist(node_count, UINT32_MAX);
  std::deque<NodeId> queue;
  for (NodeId s : sources) {
    if (dist[s] == UINT32_MAX) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  std::vector<NodeId> out;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    if (!depth.allows(dist[v] + 1)) continue;
    for (NodeId w : neighbours(v)) {
      if (dist[w] != UINT32_MAX || !keep(v, w)) continue;
      dist[w] = dist[v] + 1;
      out.push_back(w);
      queue.push_back(w);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CanonicalName> to_names(const DepGraph& g, const std::vector<NodeId>& ids) {
  std::vector<CanonicalName> out;
  out.reserve(ids.size());
  for (NodeId i : ids) out.push_back(g.name(i));
  return out;
}

std::vector<NodeId> maintainer_reach_ids(const DepGraph& g, std::uint32_t mid, Depth depth) {
  auto owned = g.owned_packages(mid);
  auto reached = reachable_from(g, owned, depth, true);
  std::vector<NodeId> out;
  // `owned` is sorted because owners_ lists are filled in id order.
  std::set_difference(reached.begin(), reached.end(), owned.begin(), owned.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint32_t> itm_ids(const DepGraph& g, NodeId p, Depth depth) {
  NodeId src[] = {p};
  auto itp = reachable_from(g, src, depth, false);
  itp.push_back(p);
  std::set<std::uint32_t> acc;
  for (NodeId v : itp) acc.insert(g.owners_of(v).begin(), g.owners_of(v).end());
  for (std::uint32_t own : g.owners_of(p)) acc.erase(own);
  return {acc.begin(), acc.end()};
}

}  // namespace

std::vector<NodeId> reachable_from(const DepGraph& g, std::span<const NodeId> sources, Depth depth,
                                   bool follow_reverse) {
  auto keep_all = [](NodeId, NodeId) { return true; };
  if (follow_reverse) {
    return walk(g.node_count(), sources, depth, [&](NodeId v) { return g.reverse(v); }, keep_all);
  }
  return walk(g.node_count(), sources, depth, [&](NodeId v) { return g.forward(v); }, keep_all);
}

ReachResult package_reach(const DepGraph& g, const CanonicalName& package, Depth depth) {
  NodeId src[] = {g.require(package)};
  return ReachResult{package.str(), to_names(g, reachable_from(g, src, depth, true)), depth};
}

ReachResult maintainer_reach(const DepGraph& g, const std::string& email, Depth depth) {
  auto mid = g.maintainer_id(email);
  if (!mid) throw Error(ErrorKind::UnknownMaintainer, email);
  return ReachResult{email, to_names(g, maintainer_reach_ids(g, *mid, depth)), depth};
}

std::vector<CanonicalName> implicit_trust_packages(const DepGraph& g, const CanonicalName& package, Depth depth) {
  NodeId src[] = {g.require(package)};
  return to_names(g, reachable_from(g, src, depth, false));
}

std::vector<std::string> implicit_trust_maintainers(const DepGraph& g, const CanonicalName& package, Depth depth) {
  std::vector<std::string> out;
  for (std::uint32_t m : itm_ids(g, g.require(package), depth)) out.push_back(g.maintainers()[m]);
  return out;
}

std::map<int, std::size_t> reach_series(const DepGraph& g, const CanonicalName& package, Depth depth) {
  const NodeId p = g.require(package);
  std::map<int, std::size_t> series;
  auto first = g.first_release(p);
  if (!first) return series;

  auto edge_since = [&](NodeId from, NodeId to) {
    auto adj = g.forward(from);
    auto it = std::lower_bound(adj.begin(), adj.end(), to);
    return g.forward_dates(from)[static_cast<std::size_t>(it - adj.begin())];
  };

  const int last_year = std::max(first->year(), g.snapshot_date().year());
  NodeId src[] = {p};
  for (int year = first->year(); year <= last_year; ++year) {
    const Date cutoff = Date::end_of_year(year);
    // Walking reverse edges: v is a dependency, w its dependent (edge w->v).
    auto keep = [&](NodeId v, NodeId w) {
      auto born = g.first_release(w);
      return born && *born <= cutoff && edge_since(w, v) <= cutoff;
    };
    series[year] = walk(g.node_count(), src, depth, [&](NodeId v) { return g.reverse(v); }, keep).size();
  }
  return series;
}

const char* to_string(Metric metric) {
  switch (metric) {
    case Metric::PackageReach: return "package_reach";
    case Metric::MaintainerReach: return "maintainer_reach";
    case Metric::ImplicitTrustPackages: return "itp";
    case Metric::ImplicitTrustMaintainers: return "itm";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view text) {
  for (Metric m : {Metric::PackageReach, Metric::MaintainerReach, Metric::ImplicitTrustPackages,
                   Metric::ImplicitTrustMaintainers}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

std::vector<RankedEntry> top_k(const DepGraph& g, Metric metric, std::size_t k, Depth depth, unsigned threads) {
  std::vector<RankedEntry> all;
  if (metric == Metric::MaintainerReach) {
    all.resize(g.maintainers().size());
    parallel_for(all.size(), threads, [&](std::size_t i) {
      all[i] = {g.maintainers()[i], maintainer_reach_ids(g, static_cast<std::uint32_t>(i), depth).size()};
    });
  } else {
    all.resize(g.node_count());
    parallel_for(all.size(), threads, [&](std::size_t i) {
      NodeId src[] = {static_cast<NodeId>(i)};
      std::size_t size = 0;
      switch (metric) {
        case Metric::PackageReach: size = reachable_from(g, src, depth, true).size(); break;
        case Metric::ImplicitTrustPackages: size = reachable_from(g, src, depth, false).size(); break;
        case Metric::ImplicitTrustMaintainers: size = itm_ids(g, src[0], depth).size(); break;
        case Metric::MaintainerReach: break;
      }
      all[i] = {g.name(src[0]).str(), size};
    });
  }
  std::sort(all.begin(), all.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.key < b.key;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

}  // namespace supply_audit
