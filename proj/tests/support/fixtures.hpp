#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "supply_audit/snapshot.hpp"

namespace testsupport {

inline std::string source_path(const std::string& rel) { return std::string(SUPPLY_AUDIT_SOURCE_DIR) + "/" + rel; }

struct Rel {
  std::string version;
  std::string date;
  std::vector<std::string> requires_;
};

struct Pkg {
  std::string name;
  std::vector<std::string> maintainers;
  std::string license = "MIT";
  std::vector<Rel> releases{{"1.0", "2017-01-01", {}}};
  std::optional<std::uint64_t> downloads;
  std::string description;
};

inline supply_audit::PackageRecord make_record(const Pkg& p) {
  using namespace supply_audit;
  PackageRecord r{canonical_name(p.name), {}, p.license, {}, p.downloads, {}, p.description};
  for (const auto& m : p.maintainers) r.maintainers.insert(m);
  for (const auto& rel : p.releases) {
    ReleaseRecord rr{parse_version(rel.version), Date::parse(rel.date).value(), {}};
    for (const auto& q : rel.requires_) rr.requirements.push_back(parse_requirement(q));
    r.releases.push_back(std::move(rr));
  }
  return r;
}

inline supply_audit::Snapshot make_snapshot(const std::vector<Pkg>& pkgs) {
  supply_audit::Snapshot s;
  for (const auto& p : pkgs) s.insert(make_record(p));
  return s;
}

// Single-release packages; `deps` lists requirement names per package.
inline supply_audit::Snapshot graph_snapshot(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& deps,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& owners = {}) {
  std::vector<Pkg> pkgs;
  for (const auto& [name, reqs] : deps) {
    Pkg p{name, {}, "MIT", {{"1.0", "2017-01-01", reqs}}, std::nullopt, ""};
    for (const auto& [email, owned] : owners) {
      for (const auto& o : owned) {
        if (o == name) p.maintainers.push_back(email);
      }
    }
    pkgs.push_back(std::move(p));
  }
  return make_snapshot(pkgs);
}

// Random dependency graph with ownership, kept alongside plain matrices for
// the oracles. adj[i][j]: node i requires node j.
struct RandomGraph {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> adj;
  std::vector<std::string> emails;
  std::vector<std::vector<std::size_t>> owned;  // per maintainer
  supply_audit::Snapshot snapshot;
};

inline std::string node_name(std::size_t i) {
  std::string s = std::to_string(i);
  return "pkg-" + std::string(4 - std::min<std::size_t>(4, s.size()), '0') + s;
}

inline RandomGraph random_graph(std::uint32_t seed, std::size_t n, double density) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  RandomGraph g;
  g.adj.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) g.names.push_back(node_name(i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && coin(rng) < density) g.adj[i][j] = true;
    }
  }
  std::size_t m = std::max<std::size_t>(1, n / 4);
  for (std::size_t k = 0; k < m; ++k) g.emails.push_back("m" + std::to_string(k) + "@d" + std::to_string(k % 3) + ".example");
  g.owned.assign(m, {});
  std::vector<std::vector<std::string>> pkg_owners(n);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = coin(rng) < 0.1 ? 0 : coin(rng) < 0.7 ? 1 : 2;
    for (std::size_t c = 0; c < count; ++c) {
      std::size_t k = pick(rng);
      if (std::find(g.owned[k].begin(), g.owned[k].end(), i) == g.owned[k].end()) {
        g.owned[k].push_back(i);
        pkg_owners[i].push_back(g.emails[k]);
      }
    }
  }
  std::uniform_int_distribution<int> day(0, 1500);
  for (std::size_t i = 0; i < n; ++i) {
    Pkg p{g.names[i], pkg_owners[i], "MIT", {}, std::nullopt, ""};
    Rel rel{"1.0", supply_audit::Date(supply_audit::Date::from_ymd(2014, 1, 1).days() + std::chrono::days(day(rng))).to_string(), {}};
    for (std::size_t j = 0; j < n; ++j) {
      if (g.adj[i][j]) rel.requires_.push_back(g.names[j]);
    }
    p.releases.push_back(std::move(rel));
    g.snapshot.insert(make_record(p));
  }
  return g;
}

}  // namespace testsupport
