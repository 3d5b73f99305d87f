#include "supply_audit/cli.hpp"

#include <CLI11.hpp>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "supply_audit/advisories.hpp"
#include "supply_audit/depgraph.hpp"
#include "supply_audit/error.hpp"
#include "supply_audit/installscan.hpp"
#include "supply_audit/licensecheck.hpp"
#include "supply_audit/parallel.hpp"
#include "supply_audit/serialize.hpp"
#include "supply_audit/snapshot.hpp"
#include "supply_audit/squatdetect.hpp"

namespace supply_audit::cli {

namespace {

enum class Format { Json, Csv, Table };

struct RunConfig {
  std::string snapshot_path;
  std::string advisory_path;
  Format format = Format::Table;
  std::string depth_text = "5";
  unsigned max_distance = 3;
  std::string builtins_path;
  std::string license_alias_path;
  std::string scanner_config_path;
  bool strict = false;
  unsigned threads = default_thread_count();
  std::size_t members_threshold = kDefaultMembersThreshold;

  Depth depth() const {
    if (depth_text == "unlimited" || depth_text == "inf") return Depth::unlimited();
    return Depth::hops(static_cast<std::uint32_t>(std::stoul(depth_text)));
  }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  const RunConfig& config;
  std::ostream& out;
  std::ostream& err;

  LoadResult load() const {
    if (config.snapshot_path.empty()) throw UsageError("--snapshot is required for this command");
    LoadOptions options;
    options.strict = config.strict;
    auto result = load_snapshot(config.snapshot_path, options);
    for (const auto& skip : result.report.skipped) err << "warning: skipped record: " << skip.reason << '\n';
    return result;
  }

  void emit_json(const Json& j) const { out << j.dump(2) << '\n'; }
};

std::string fixed2(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

std::string opt_to_string(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : ""; }

std::string join_names(const std::vector<CanonicalName>& names, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += sep;
    out += names[i].str();
  }
  return out;
}

int cmd_stats(const Context& ctx) {
  auto loaded = ctx.load();
  const Snapshot& s = loaded.snapshot;
  auto stats = ecosystem_stats(s);
  auto classifiers = classifier_counts(s);
  switch (ctx.config.format) {
    case Format::Json: {
      Json cls = Json::array();
      for (const auto& [c, n] : classifiers) cls.push_back(Json{{"classifier", c}, {"packages", n}});
      ctx.emit_json(Json{{"packages", s.size()},
                         {"skipped_records", loaded.report.skipped.size()},
                         {"dangling_edges", loaded.report.dangling.size()},
                         {"snapshot_date", s.snapshot_date().to_string()},
                         {"years", to_json(stats)},
                         {"classifiers", cls}});
      break;
    }
    case Format::Csv:
      write_csv_row(ctx.out, {"year", "new_packages", "new_maintainers", "new_releases"});
      for (const auto& [year, c] : stats.years) {
        write_csv_row(ctx.out, {std::to_string(year), std::to_string(c.new_packages), std::to_string(c.new_maintainers),
                                std::to_string(c.new_releases)});
      }
      break;
    case Format::Table:
      ctx.out << "packages: " << s.size() << "  skipped: " << loaded.report.skipped.size()
              << "  dangling edges: " << loaded.report.dangling.size() << "  snapshot date: "
              << s.snapshot_date().to_string() << "\n\n";
      ctx.out << std::left << std::setw(6) << "year" << std::right << std::setw(14) << "new packages" << std::setw(17)
              << "new maintainers" << std::setw(14) << "new releases" << '\n';
      for (const auto& [year, c] : stats.years) {
        ctx.out << std::left << std::setw(6) << year << std::right << std::setw(14) << c.new_packages << std::setw(17)
                << c.new_maintainers << std::setw(14) << c.new_releases << '\n';
      }
      if (!classifiers.empty()) {
        ctx.out << "\ntop classifiers:\n";
        for (std::size_t i = 0; i < classifiers.size() && i < 15; ++i) {
          ctx.out << "  " << std::setw(6) << classifiers[i].second << "  " << classifiers[i].first << '\n';
        }
      }
      break;
  }
  return kClean;
}

int cmd_reach(const Context& ctx, const std::string& package, const std::string& maintainer, bool series) {
  if (package.empty() == maintainer.empty()) throw UsageError("reach needs exactly one of <package> or --maintainer");
  auto loaded = ctx.load();
  auto g = build_graph(loaded.snapshot);
  const Depth depth = ctx.config.depth();
  ReachResult r = maintainer.empty() ? package_reach(g, canonical_name(package), depth)
                                     : maintainer_reach(g, maintainer, depth);
  std::map<int, std::size_t> history;
  if (series) {
    if (!maintainer.empty()) throw UsageError("--series applies to package reach only");
    history = reach_series(g, canonical_name(package), depth);
  }
  switch (ctx.config.format) {
    case Format::Json: {
      Json j = to_json(r, ctx.config.members_threshold);
      if (series) {
        Json h = Json::object();
        for (const auto& [year, n] : history) h[std::to_string(year)] = n;
        j["series"] = h;
      }
      ctx.emit_json(j);
      break;
    }
    case Format::Csv:
      if (series) {
        write_csv_row(ctx.out, {"origin", "year", "reach"});
        for (const auto& [year, n] : history) write_csv_row(ctx.out, {r.origin, std::to_string(year), std::to_string(n)});
      } else {
        write_csv_row(ctx.out, {"origin", "depth", "member"});
        for (const auto& m : r.members) write_csv_row(ctx.out, {r.origin, r.depth.to_string(), m.str()});
      }
      break;
    case Format::Table:
      ctx.out << (maintainer.empty() ? "package reach of " : "maintainer reach of ") << r.origin << " (depth "
              << r.depth.to_string() << "): " << r.size() << '\n';
      for (const auto& m : r.members) ctx.out << "  " << m.str() << '\n';
      if (series) {
        ctx.out << "history:\n";
        for (const auto& [year, n] : history) ctx.out << "  " << year << "  " << n << '\n';
      }
      break;
  }
  return kClean;
}

int cmd_trust(const Context& ctx, const std::string& package) {
  auto loaded = ctx.load();
  auto g = build_graph(loaded.snapshot);
  const Depth depth = ctx.config.depth();
  const CanonicalName name = canonical_name(package);
  auto itp = implicit_trust_packages(g, name, depth);
  auto itm = implicit_trust_maintainers(g, name, depth);
  switch (ctx.config.format) {
    case Format::Json: {
      Json itp_members = Json::array();
      for (const auto& n : itp) itp_members.push_back(n.str());
      ctx.emit_json(Json{{"package", name.str()},
                         {"depth", depth_to_json(depth)},
                         {"itp", Json{{"size", itp.size()}, {"members", itp_members}}},
                         {"itm", Json{{"size", itm.size()}, {"members", Json(itm)}}}});
      break;
    }
    case Format::Csv:
      write_csv_row(ctx.out, {"package", "set", "member"});
      for (const auto& n : itp) write_csv_row(ctx.out, {name.str(), "itp", n.str()});
      for (const auto& m : itm) write_csv_row(ctx.out, {name.str(), "itm", m});
      break;
    case Format::Table:
      ctx.out << "implicitly trusted packages of " << name.str() << " (depth " << depth.to_string()
              << "): " << itp.size() << '\n';
      for (const auto& n : itp) ctx.out << "  " << n.str() << '\n';
      ctx.out << "implicitly trusted maintainers: " << itm.size() << '\n';
      for (const auto& m : itm) ctx.out << "  " << m << '\n';
      break;
  }
  return kClean;
}

int cmd_top(const Context& ctx, const std::string& metric_text, std::size_t k) {
  auto metric = parse_metric(metric_text);
  if (!metric) throw UsageError("unknown metric '" + metric_text + "'");
  if (k < 1) throw UsageError("--k must be at least 1");
  auto loaded = ctx.load();
  auto g = build_graph(loaded.snapshot);
  const Depth depth = ctx.config.depth();
  auto ranked = top_k(g, *metric, k, depth, ctx.config.threads);
  switch (ctx.config.format) {
    case Format::Json: {
      Json entries = Json::array();
      for (const auto& e : ranked) entries.push_back(Json{{"key", e.key}, {"size", e.size}});
      ctx.emit_json(Json{{"metric", to_string(*metric)}, {"depth", depth_to_json(depth)}, {"k", k}, {"entries", entries}});
      break;
    }
    case Format::Csv:
      write_csv_row(ctx.out, {"rank", "key", "size"});
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        write_csv_row(ctx.out, {std::to_string(i + 1), ranked[i].key, std::to_string(ranked[i].size)});
      }
      break;
    case Format::Table:
      ctx.out << "top " << k << " by " << to_string(*metric) << " (depth " << depth.to_string() << ")\n";
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        ctx.out << std::setw(4) << i + 1 << "  " << std::setw(8) << ranked[i].size << "  " << ranked[i].key << '\n';
      }
      break;
  }
  return kClean;
}

int cmd_squat(const Context& ctx) {
  auto loaded = ctx.load();
  const Snapshot& s = loaded.snapshot;
  SquatConfig config;
  config.max_distance = ctx.config.max_distance;
  config.threads = ctx.config.threads;
  if (!ctx.config.builtins_path.empty()) config.reserved = load_name_list(ctx.config.builtins_path);
  auto report = scan_all(s, config);
  switch (ctx.config.format) {
    case Format::Json: ctx.emit_json(to_json(report, s)); break;
    case Format::Csv:
      write_csv_row(ctx.out, {"suspect", "target", "rule", "distance", "verdict", "suspect_downloads", "target_downloads"});
      for (const auto& c : report.candidates) {
        const auto* target = c.rule == SquatRule::BuiltinShadow ? nullptr : s.find(c.target);
        write_csv_row(ctx.out, {c.suspect.str(), c.target.str(), to_string(c.rule), std::to_string(c.distance),
                                to_string(c.verdict), opt_to_string(s.at(c.suspect).downloads),
                                target ? opt_to_string(target->downloads) : ""});
      }
      break;
    case Format::Table:
      for (const auto& c : report.candidates) {
        ctx.out << std::left << std::setw(28) << c.suspect.str() << " -> " << std::setw(28) << c.target.str()
                << std::setw(20) << to_string(c.rule) << std::setw(3) << c.distance << to_string(c.verdict)
                << std::right << '\n';
      }
      ctx.out << "\ncandidates: " << report.candidates.size() << '\n';
      for (const auto& [rule, n] : report.rule_counts) ctx.out << "  " << to_string(rule) << ": " << n << '\n';
      for (const auto& [v, n] : report.verdict_counts) ctx.out << "  " << to_string(v) << ": " << n << '\n';
      break;
  }
  auto offensive = report.verdict_counts.find(Verdict::OffensiveSuspect);
  return offensive != report.verdict_counts.end() && offensive->second > 0 ? kFindings : kClean;
}

int cmd_license(const Context& ctx, bool transitive) {
  auto loaded = ctx.load();
  const Snapshot& s = loaded.snapshot;
  auto g = build_graph(s);
  LicenseTable table = LicenseTable::defaults();
  if (!ctx.config.license_alias_path.empty()) table.load_aliases(ctx.config.license_alias_path);
  auto report = find_violations(g, s, table);
  std::vector<Violation> inherited;
  if (transitive) inherited = transitive_violations(g, s, report.direct, ctx.config.depth(), table);

  switch (ctx.config.format) {
    case Format::Json: {
      Json direct = Json::array();
      for (const auto& v : report.direct) direct.push_back(to_json(v));
      Json j{{"direct", direct}, {"indeterminate", report.indeterminate}, {"table", license_table_rows(report)}};
      if (transitive) {
        Json inh = Json::array();
        for (const auto& v : inherited) inh.push_back(to_json(v));
        j["inherited"] = inh;
      }
      ctx.emit_json(j);
      break;
    }
    case Format::Csv:
      write_csv_row(ctx.out, {"importer", "importer_license", "dependency", "dependency_license", "kind", "path"});
      for (const auto* list : {&report.direct, &inherited}) {
        for (const auto& v : *list) {
          write_csv_row(ctx.out, {v.importer.str(), to_string(v.importer_license), v.dependency.str(),
                                  to_string(v.dependency_license), to_string(v.kind), join_names(v.path, ">")});
        }
      }
      break;
    case Format::Table:
      ctx.out << std::left << std::setw(32) << "Violation type" << "Occurrences\n";
      for (const auto& row : license_table_rows(report)) {
        ctx.out << std::setw(32) << row["type"].get<std::string>() << row["occurrences"].get<std::size_t>() << '\n';
      }
      ctx.out << std::right << "\ndirect violations: " << report.direct.size()
              << "  indeterminate edges: " << report.indeterminate << '\n';
      for (const auto& v : report.direct) {
        ctx.out << "  " << v.importer.str() << " (" << to_string(v.importer_license) << ") -> " << v.dependency.str()
                << " (" << to_string(v.dependency_license) << ")\n";
      }
      if (transitive) {
        ctx.out << "inherited violations: " << inherited.size() << '\n';
        for (const auto& v : inherited) ctx.out << "  " << join_names(v.path, " -> ") << '\n';
      }
      break;
  }
  return report.direct.empty() && inherited.empty() ? kClean : kFindings;
}

int cmd_advisories(const Context& ctx, const std::string& package_filter, bool exposure, bool lag) {
  if (ctx.config.advisory_path.empty()) throw UsageError("--advisories is required for this command");
  auto loaded = ctx.load();
  const Snapshot& s = loaded.snapshot;
  auto g = build_graph(s);
  auto advisories = load_advisories(ctx.config.advisory_path, &s);
  for (const auto& id : advisories.missing_package) ctx.err << "warning: advisory " << id << " names an unknown package\n";
  const Depth depth = ctx.config.depth();

  std::set<CanonicalName> packages;
  if (!package_filter.empty()) {
    packages.insert(canonical_name(package_filter));
    s.at(*packages.begin());
  } else {
    for (const auto& a : advisories.advisories) {
      if (s.contains(a.package)) packages.insert(a.package);
    }
  }
  std::map<std::string, const Advisory*> by_id;
  for (const auto& a : advisories.advisories) by_id.emplace(a.id, &a);

  struct Row {
    const Advisory* advisory;
    TimelineRow timeline;
    std::vector<AffectedRelease> affected;
    ExposureRecord exposure;
    std::optional<PatchLagSummary> lag;
  };
  std::vector<Row> rows;
  bool any_exposure = false;
  long lag_total = 0;
  std::size_t lag_patched = 0, lag_unpatched = 0;
  for (const auto& p : packages) {
    for (auto& t : vulnerability_timeline(s, advisories.advisories, p)) {
      const Advisory& a = *by_id.at(t.advisory_id);
      Row row{&a, t, affected_releases(s, a), exposure_set(g, a, depth), std::nullopt};
      any_exposure = any_exposure || !row.exposure.exposed.empty();
      if (lag && a.fixed) {
        row.lag = patch_lag_summary(g, s, a);
        for (const auto& [_, days] : row.lag->lags) {
          if (days) {
            lag_total += *days;
            ++lag_patched;
          }
        }
        lag_unpatched += row.lag->unpatched;
      }
      rows.push_back(std::move(row));
    }
  }
  std::optional<double> mean_lag;
  if (lag_patched) mean_lag = static_cast<double>(lag_total) / static_cast<double>(lag_patched);

  switch (ctx.config.format) {
    case Format::Json: {
      Json list = Json::array();
      for (const auto& r : rows) {
        Json j = to_json(*r.advisory);
        j["open_window_days"] = r.timeline.open_window_days;
        Json affected = Json::array();
        for (const auto& a : r.affected) affected.push_back(Json{{"version", a.version.to_string()}, {"date", a.date.to_string()}});
        j["affected_releases"] = affected;
        j["exposed_count"] = r.exposure.exposed.size();
        if (exposure) {
          j["exposure"] = to_json(r.exposure, ctx.config.members_threshold);
          Json domains = Json::object();
          for (const auto& [domain, d] : exposure_by_domain(g, r.exposure)) {
            domains[domain] = Json{{"maintainers", d.maintainers}, {"packages", d.packages}};
          }
          j["exposure_by_domain"] = domains;
        }
        if (r.lag) j["patch_lag"] = to_json(*r.lag);
        list.push_back(j);
      }
      Json out{{"advisories", list}, {"missing_package", Json(advisories.missing_package)}};
      if (lag) {
        out["patch_lag_aggregate"] = Json{{"patched", lag_patched},
                                          {"unpatched", lag_unpatched},
                                          {"mean_days", mean_lag ? Json(*mean_lag) : Json(nullptr)}};
      }
      ctx.emit_json(out);
      break;
    }
    case Format::Csv:
      write_csv_row(ctx.out, {"id", "package", "published", "fixed", "severity", "open_window_days", "affected_releases",
                              "exposed", "mean_patch_lag_days"});
      for (const auto& r : rows) {
        std::string affected;
        for (const auto& a : r.affected) affected += (affected.empty() ? "" : " ") + a.version.to_string();
        std::string exposed = exposure ? join_names(r.exposure.exposed, " ") : std::to_string(r.exposure.exposed.size());
        write_csv_row(ctx.out, {r.advisory->id, r.advisory->package.str(), r.timeline.published.to_string(),
                                r.timeline.fixed ? r.timeline.fixed->to_string() : "",
                                r.timeline.severity ? fixed2(*r.timeline.severity) : "",
                                std::to_string(r.timeline.open_window_days), affected, exposed,
                                r.lag && r.lag->mean_days ? fixed2(*r.lag->mean_days) : ""});
      }
      break;
    case Format::Table:
      for (const auto& r : rows) {
        ctx.out << r.advisory->id << "  " << r.advisory->package.str() << "  affected " << r.advisory->affected.to_string()
                << "  published " << r.timeline.published.to_string() << "  fixed "
                << (r.timeline.fixed ? r.timeline.fixed->to_string() : "-") << "  window "
                << r.timeline.open_window_days << " days  exposed " << r.exposure.exposed.size() << '\n';
        if (exposure) {
          for (const auto& n : r.exposure.exposed) ctx.out << "    exposed: " << n.str() << '\n';
          for (const auto& [domain, d] : exposure_by_domain(g, r.exposure)) {
            ctx.out << "    domain " << domain << ": " << d.maintainers << " maintainers, " << d.packages << " packages\n";
          }
        }
        if (r.lag) {
          for (const auto& [name, days] : r.lag->lags) {
            ctx.out << "    lag " << name.str() << ": " << (days ? std::to_string(*days) + " days" : "unpatched") << '\n';
          }
        }
      }
      if (lag) {
        ctx.out << "mean patch lag: " << (mean_lag ? fixed2(*mean_lag) + " days" : "n/a") << " over " << lag_patched
                << " dependents, " << lag_unpatched << " unpatched\n";
      }
      break;
  }
  return any_exposure ? kFindings : kClean;
}

int cmd_scan_setup(const Context& ctx, const std::string& path) {
  ScanConfig config;
  if (!ctx.config.scanner_config_path.empty()) config.load(ctx.config.scanner_config_path);
  auto tree = scan_tree(path, config, ctx.config.threads);
  for (const auto& e : tree.errors) ctx.err << "error: " << e.path << ": " << e.message << '\n';
  auto summary = corpus_summary(tree.findings);
  switch (ctx.config.format) {
    case Format::Json: {
      Json findings = Json::array();
      for (const auto& f : tree.findings) findings.push_back(to_json(f));
      Json errors = Json::array();
      for (const auto& e : tree.errors) errors.push_back(Json{{"path", e.path}, {"message", e.message}});
      ctx.emit_json(Json{{"findings", findings}, {"errors", errors}, {"summary", to_json(summary)}});
      break;
    }
    case Format::Csv:
      write_csv_row(ctx.out, {"path", "kind", "line", "detail"});
      for (const auto& f : tree.findings) {
        for (const auto& flag : f.flags) {
          write_csv_row(ctx.out, {f.path, to_string(flag.kind), std::to_string(flag.line), flag.detail});
        }
      }
      break;
    case Format::Table:
      for (const auto& f : tree.findings) {
        ctx.out << f.path << "  risk " << f.risk_score << '\n';
        for (const auto& flag : f.flags) {
          ctx.out << "  line " << std::setw(4) << flag.line << "  " << std::left << std::setw(20) << to_string(flag.kind)
                  << std::right << flag.detail << '\n';
        }
        for (const auto& w : f.warnings) ctx.out << "  warning: " << w << '\n';
      }
      ctx.out << "\nscripts: " << summary.scripts << "  flagged: " << summary.flagged_scripts << '\n';
      for (const auto& [kind, share] : summary.per_flag) {
        ctx.out << "  " << std::left << std::setw(20) << to_string(kind) << std::right << share.scripts << " ("
                << fixed2(100.0 * share.fraction) << "%)\n";
      }
      break;
  }
  if (!tree.errors.empty() && tree.findings.empty()) return kUsageOrIo;
  return summary.flagged_scripts > 0 ? kFindings : kClean;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Supply-chain risk audit over a package-registry snapshot", "supply-audit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "table";
  app.add_option("--snapshot", config.snapshot_path, "Snapshot file (newline-delimited JSON)");
  app.add_option("--advisories", config.advisory_path, "Advisory file (newline-delimited JSON)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_option("--depth", config.depth_text, "Traversal depth in hops, or 'unlimited'")
      ->check([](const std::string& v) -> std::string {
        if (v == "unlimited" || v == "inf") return {};
        if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos || v.size() > 9) {
          return "depth must be a non-negative integer or 'unlimited'";
        }
        return {};
      });
  app.add_option("--max-distance", config.max_distance, "Maximum edit distance for typosquat search")
      ->check(CLI::Range(1u, 3u));
  app.add_option("--builtins", config.builtins_path, "Reserved standard-library names, one per line");
  app.add_option("--license-aliases", config.license_alias_path, "Extra license aliases (JSON)");
  app.add_option("--scanner-config", config.scanner_config_path, "Scanner weights and module sets (JSON)");
  app.add_flag("--strict", config.strict, "Abort on the first invalid snapshot record");
  app.add_option("--threads", config.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--members-threshold", config.members_threshold, "Omit member lists larger than this in JSON");

  app.add_subcommand("stats", "Yearly growth and classifier counts");

  auto* reach = app.add_subcommand("reach", "Package or maintainer reach");
  std::string reach_package, reach_maintainer;
  bool reach_series_flag = false;
  reach->add_option("package", reach_package, "Package name");
  reach->add_option("--maintainer", reach_maintainer, "Maintainer email");
  reach->add_flag("--series", reach_series_flag, "Also report reach per year");

  auto* trust = app.add_subcommand("trust", "Implicitly trusted packages and maintainers");
  std::string trust_package;
  trust->add_option("package", trust_package, "Package name")->required();

  auto* top = app.add_subcommand("top", "Rank packages or maintainers by a metric");
  std::string metric = "package_reach";
  std::size_t k = 10;
  top->add_option("--metric", metric, "package_reach | maintainer_reach | itp | itm");
  top->add_option("--k", k, "Number of entries");

  app.add_subcommand("squat", "Impersonation candidates");

  auto* license = app.add_subcommand("license-check", "License violations over dependency edges");
  bool transitive = false;
  license->add_flag("--transitive", transitive, "Also report inherited violations");

  auto* adv = app.add_subcommand("advisories", "Vulnerability exposure, windows and patch lag");
  std::string adv_package;
  bool exposure = false, lag = false;
  adv->add_option("--package", adv_package, "Restrict to one package");
  adv->add_flag("--exposure", exposure, "List exposed dependents");
  adv->add_flag("--lag", lag, "Report patch lag of direct dependents");

  auto* scan = app.add_subcommand("scan-setup", "Static risk scan of setup scripts");
  std::string scan_path;
  scan->add_option("path", scan_path, "File or directory")->required();

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kClean;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kUsageOrIo;
  }
  config.format = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Table;

  Context ctx{config, out, err};
  try {
    if (app.got_subcommand("stats")) return cmd_stats(ctx);
    if (app.got_subcommand(reach)) return cmd_reach(ctx, reach_package, reach_maintainer, reach_series_flag);
    if (app.got_subcommand(trust)) return cmd_trust(ctx, trust_package);
    if (app.got_subcommand(top)) return cmd_top(ctx, metric, k);
    if (app.got_subcommand("squat")) return cmd_squat(ctx);
    if (app.got_subcommand(license)) return cmd_license(ctx, transitive);
    if (app.got_subcommand(adv)) return cmd_advisories(ctx, adv_package, exposure, lag);
    if (app.got_subcommand(scan)) return cmd_scan_setup(ctx, scan_path);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrIo;
  }
  return kUsageOrIo;
}

}  // namespace supply_audit::cli
