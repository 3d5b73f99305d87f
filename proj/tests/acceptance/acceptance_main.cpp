// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "oracles/closure_oracle.hpp"
#include "oracles/levenshtein_oracle.hpp"
#include "support/fixtures.hpp"
#include "supply_audit/advisories.hpp"
#include "supply_audit/cli.hpp"
#include "supply_audit/depgraph.hpp"
#include "supply_audit/fuzzy_index.hpp"
#include "supply_audit/installscan.hpp"
#include "supply_audit/licensecheck.hpp"
#include "supply_audit/parallel.hpp"
#include "supply_audit/squatdetect.hpp"

using namespace supply_audit;
using Clock = std::chrono::steady_clock;
using testsupport::Pkg;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void fail(const std::string& why) {
    if (ok) note = why;
    ok = false;
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

CanonicalName cn(const std::string& s) { return canonical_name(s); }

std::set<std::string> name_set(const std::vector<CanonicalName>& v) {
  std::set<std::string> out;
  for (const auto& n : v) out.insert(n.str());
  return out;
}

std::set<std::string> index_names(const std::set<std::size_t>& ids, const std::vector<std::string>& names) {
  std::set<std::string> out;
  for (auto i : ids) out.insert(names[i]);
  return out;
}

// Same 50 graphs for every graph criterion: sizes 20..200, density swept
// over five settings, one fixed seed each.
const std::vector<testsupport::RandomGraph>& graph_suite() {
  static const std::vector<testsupport::RandomGraph> suite = [] {
    std::vector<testsupport::RandomGraph> gs;
    const double densities[] = {0.002, 0.005, 0.01, 0.025, 0.06};
    for (std::uint32_t i = 0; i < 50; ++i) {
      std::size_t n = 20 + (i * 37) % 181;
      gs.push_back(testsupport::random_graph(1000 + i, n, densities[i % 5]));
    }
    return gs;
  }();
  return suite;
}

const std::optional<std::size_t> kDepths[] = {1, 3, 5, std::nullopt};

Depth to_depth(std::optional<std::size_t> hops) {
  return hops ? Depth::hops(static_cast<std::uint32_t>(*hops)) : Depth::unlimited();
}

Outcome graph_oracle() {
  Outcome o;
  auto start = Clock::now();
  std::size_t comparisons = 0, cyclic = 0;
  for (const auto& rg : graph_suite()) {
    auto g = build_graph(rg.snapshot);
    auto adj = oracle::from_adjacency(rg.adj);
    bool has_cycle = false;
    auto closure = oracle::closure(adj);
    for (std::size_t i = 0; i < rg.names.size(); ++i) has_cycle = has_cycle || closure[i][i];
    cyclic += has_cycle;
    for (auto hops : kDepths) {
      Depth depth = to_depth(hops);
      auto r = oracle::reach_matrix(adj, hops);
      for (std::size_t p = 0; p < rg.names.size(); ++p) {
        auto name = cn(rg.names[p]);
        if (name_set(package_reach(g, name, depth).members) != index_names(oracle::package_reach(r, p), rg.names)) {
          o.fail("package_reach mismatch at " + rg.names[p]);
        }
        if (name_set(implicit_trust_packages(g, name, depth)) != index_names(oracle::itp(r, p), rg.names)) {
          o.fail("ITP mismatch at " + rg.names[p]);
        }
        auto itm = implicit_trust_maintainers(g, name, depth);
        if (std::set<std::string>(itm.begin(), itm.end()) != index_names(oracle::itm(r, p, rg.owned), rg.emails)) {
          o.fail("ITM mismatch at " + rg.names[p]);
        }
        comparisons += 3;
      }
      for (std::size_t m = 0; m < rg.emails.size(); ++m) {
        if (rg.owned[m].empty()) continue;
        if (name_set(maintainer_reach(g, rg.emails[m], depth).members) !=
            index_names(oracle::maintainer_reach(r, rg.owned[m]), rg.names)) {
          o.fail("maintainer_reach mismatch at " + rg.emails[m]);
        }
        ++comparisons;
      }
    }
  }
  double t = seconds_since(start);
  if (cyclic == 0) o.fail("no graph in the suite contains a cycle");
  if (t >= 10.0) o.fail("took " + std::to_string(t) + " s");
  if (o.ok) {
    std::ostringstream s;
    s << graph_suite().size() << " graphs (" << cyclic << " cyclic), " << comparisons << " set comparisons, " << t << " s";
    o.note = s.str();
  }
  return o;
}

Outcome duality() {
  Outcome o;
  std::size_t pairs = 0;
  for (const auto& rg : graph_suite()) {
    auto g = build_graph(rg.snapshot);
    std::vector<std::set<std::string>> reach, itp;
    for (const auto& n : rg.names) {
      reach.push_back(name_set(package_reach(g, cn(n), Depth::unlimited()).members));
      itp.push_back(name_set(implicit_trust_packages(g, cn(n), Depth::unlimited())));
    }
    for (std::size_t p = 0; p < rg.names.size(); ++p) {
      for (std::size_t q = 0; q < rg.names.size(); ++q) {
        if (p == q) continue;
        ++pairs;
        if (reach[p].count(rg.names[q]) != itp[q].count(rg.names[p])) {
          o.fail(rg.names[q] + " / " + rg.names[p]);
        }
      }
    }
  }
  if (o.ok) o.note = std::to_string(pairs) + " ordered pairs, 0 exceptions";
  return o;
}

std::vector<std::string> mutated_names(std::uint32_t seed, std::size_t n, const std::string& alphabet) {
  std::mt19937 rng(seed);
  std::vector<std::string> base;
  for (std::size_t i = 0; i < n / 2; ++i) {
    std::size_t len = 3 + rng() % 28;
    std::string s;
    for (std::size_t k = 0; k < len; ++k) s += alphabet[rng() % alphabet.size()];
    base.push_back(s);
  }
  std::vector<std::string> out = base;
  while (out.size() < n) {
    std::string s = base[rng() % base.size()];
    int edits = 1 + static_cast<int>(rng() % 3);
    for (int e = 0; e < edits; ++e) {
      std::size_t pos = rng() % s.size();
      switch (rng() % 3) {
        case 0: s[pos] = alphabet[rng() % alphabet.size()]; break;
        case 1: s.insert(s.begin() + static_cast<long>(pos), alphabet[rng() % alphabet.size()]); break;
        default: if (s.size() > 3) s.erase(pos, 1);
      }
    }
    if (s.size() >= 3 && s.size() <= 30) out.push_back(s);
  }
  return out;
}

// Name-like strings: syllables joined by separators, with typo variants of
// a fraction of them.
std::vector<std::string> synthetic_registry(std::uint32_t seed, std::size_t n) {
  static const char* syllables[] = {"py", "lib", "net", "data", "web", "json", "http", "io", "core", "util",
                                    "flask", "django", "test", "log", "db", "sql", "cli", "auth", "aws", "num",
                                    "sci", "plot", "ml", "api", "tool", "kit", "ext", "async", "fast", "tiny"};
  std::mt19937 rng(seed);
  std::set<std::string> seen;
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string s;
    if (out.size() > 100 && rng() % 5 == 0) {
      s = out[rng() % out.size()];
      std::size_t pos = rng() % s.size();
      s[pos] = static_cast<char>('a' + rng() % 26);
    } else {
      int parts = 1 + static_cast<int>(rng() % 4);
      for (int p = 0; p < parts; ++p) {
        if (p) s += rng() % 2 ? "-" : "";
        s += syllables[rng() % 30];
      }
      if (rng() % 3 == 0) s += std::to_string(rng() % 100);
    }
    if (s.size() < 3 || s.size() > 30) continue;
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

Outcome fuzzy_index() {
  Outcome o;
  auto names = mutated_names(2024, 500, "abcdefgh-");
  std::size_t pair_total = 0;
  for (unsigned d = 1; d <= 3; ++d) {
    auto idx = FuzzyIndex::build(names, d);
    auto got = idx.all_pairs(d);
    auto want = oracle::all_pairs(names, d);
    pair_total += want.size();
    if (got.size() != want.size()) {
      o.fail("d=" + std::to_string(d) + ": " + std::to_string(got.size()) + " pairs vs oracle " + std::to_string(want.size()));
      continue;
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (std::tie(got[i].first, got[i].second, got[i].distance) != want[i]) o.fail("pair mismatch at d=" + std::to_string(d));
    }
  }
  if (pair_total == 0) o.fail("oracle produced no pairs; fixture too sparse");

  auto big = synthetic_registry(77, 50000);
  auto start = Clock::now();
  auto idx = FuzzyIndex::build(big, 3);
  auto pairs = idx.all_pairs(3, default_thread_count());
  double t = seconds_since(start);
  if (t >= 60.0) o.fail("50,000 names took " + std::to_string(t) + " s");
  // Spot-check a sample of the large run against direct distances.
  std::mt19937 rng(5);
  for (int i = 0; i < 200 && !pairs.empty(); ++i) {
    const auto& p = pairs[rng() % pairs.size()];
    if (oracle::levenshtein(p.first, p.second) != p.distance) o.fail("large-run pair has wrong distance");
  }
  if (o.ok) {
    std::ostringstream s;
    s << "500 names: " << pair_total << " pairs over d=1..3 match the naive scan; 50,000 names at d=3: "
      << pairs.size() << " pairs in " << t << " s";
    o.note = s.str();
  }
  return o;
}

Pkg plain(const char* name, std::optional<std::uint64_t> downloads = {}, std::vector<std::string> maint = {},
          const char* description = "") {
  return Pkg{name, std::move(maint), "MIT", {{"1.0", "2017-01-01", {}}}, downloads, description};
}

bool has_candidate(const SquatReport& r, const char* suspect, const char* target, SquatRule rule, std::size_t distance) {
  for (const auto& c : r.candidates) {
    if (c.suspect.str() == suspect && c.target.str() == target && c.rule == rule && c.distance == distance) return true;
  }
  return false;
}

Outcome paper_pairs() {
  Outcome o;
  if (edit_distance("numpy", "numpi") != 1) o.fail("numpy/numpi distance");
  if (edit_distance("jellyfish", "jeliyfish") != 1) o.fail("jellyfish/jeliyfish distance");
  auto s = testsupport::make_snapshot({
      plain("numpy", 1000000), plain("numpi", 10), plain("jellyfish", 5000), plain("jeliyfish", 5),
      plain("client-vision-test", 100), plain("test-vision-client", 1), plain("awscli", 100000), plain("aws-cli", 10),
      plain("python-dateutil", 100000), plain("python3-dateutil", 10), plain("subprocess", 1),
  });
  auto r = scan_all(s);
  struct Expect {
    const char* suspect;
    const char* target;
    SquatRule rule;
    std::size_t distance;
  };
  for (const auto& e : {Expect{"numpi", "numpy", SquatRule::EditDistance, 1},
                        Expect{"jeliyfish", "jellyfish", SquatRule::EditDistance, 1},
                        Expect{"test-vision-client", "client-vision-test", SquatRule::WordReorder, 0},
                        Expect{"aws-cli", "awscli", SquatRule::SeparatorCollapse, 0},
                        Expect{"python3-dateutil", "python-dateutil", SquatRule::VersionSuffix, 0},
                        Expect{"subprocess", "subprocess", SquatRule::BuiltinShadow, 0}}) {
    if (!has_candidate(r, e.suspect, e.target, e.rule, e.distance)) {
      o.fail(std::string("missing ") + e.suspect + " -> " + e.target + " " + to_string(e.rule));
    }
  }
  if (o.ok) o.note = "6 of 6 pairs detected with the expected rule";
  return o;
}

Outcome defensive() {
  Outcome o;
  auto s = testsupport::make_snapshot({
      plain("requests", 1000, {"owner@psf.example"}), plain("requestes", 1, {"owner@psf.example"}),
      plain("python-vagrant", 1000, {"a@x.example"}),
      plain("vagrant", 1, {"b@y.example"}, "Did you mean to install python-vagrant instead?"),
  });
  auto verdict = [&](const char* suspect, const char* target, SquatRule rule) {
    return classify_candidate(SquatCandidate{cn(suspect), cn(target), rule, 1, Verdict::Unknown}, s).verdict;
  };
  if (verdict("requestes", "requests", SquatRule::EditDistance) != Verdict::Defensive) o.fail("shared maintainer pair");
  if (verdict("vagrant", "python-vagrant", SquatRule::EditDistance) != Verdict::WarningStub) o.fail("warning stub");
  auto r = scan_all(s);
  bool found = false;
  for (const auto& c : r.candidates) {
    if (c.suspect.str() == "requestes" && c.verdict != Verdict::Defensive) o.fail("scan_all verdict for requestes");
    found = found || c.suspect.str() == "requestes";
  }
  if (!found) o.fail("scan_all missed requestes");
  if (o.ok) o.note = "DEFENSIVE and WARNING_STUB assigned";
  return o;
}

Outcome license_matrix() {
  Outcome o;
  int rows = 0;
  for (LicenseId importer : {LicenseId::Mit, LicenseId::Bsd, LicenseId::Apache2}) {
    for (LicenseId dep : {LicenseId::Gpl3, LicenseId::Lgpl3}) {
      if (compatible(importer, dep) != Compatibility::Violation) o.fail(std::string(to_string(importer)) + " importing " + to_string(dep));
      if (compatible(dep, importer) != Compatibility::Ok) o.fail(std::string(to_string(dep)) + " importing " + to_string(importer));
      ++rows;
    }
  }
  // genie (Apache) requires restview (GPLv3); three Apache packages reach
  // genie: two directly, one through genie-web.
  auto lic = [](const char* name, const char* license, std::vector<std::string> deps) {
    return Pkg{name, {}, license, {{"1.0", "2016-01-01", std::move(deps)}}, std::nullopt, ""};
  };
  auto s = testsupport::make_snapshot({
      lic("restview", "GNU General Public License v3 (GPLv3)", {}),
      lic("genie", "Apache License 2.0", {"restview"}),
      lic("genie-web", "Apache 2.0", {"genie"}),
      lic("genie-cli", "Apache 2.0", {"genie"}),
      lic("genie-site", "Apache 2.0", {"genie-web"}),
      lic("bystander", "Apache 2.0", {}),
  });
  auto g = build_graph(s);
  auto report = find_violations(g, s);
  auto inherited = transitive_violations(g, s, report.direct);
  std::size_t n = package_reach(g, cn("genie")).size();
  if (report.direct.size() != 1) o.fail(std::to_string(report.direct.size()) + " direct violations, expected 1");
  if (n != 3) o.fail("fixture reach of genie is " + std::to_string(n));
  if (inherited.size() != n) o.fail(std::to_string(inherited.size()) + " inherited violations, expected " + std::to_string(n));
  std::set<std::vector<std::string>> paths;
  for (const auto& v : inherited) {
    std::vector<std::string> p;
    for (const auto& x : v.path) p.push_back(x.str());
    paths.insert(p);
  }
  std::set<std::vector<std::string>> want{{"genie-cli", "genie", "restview"},
                                          {"genie-site", "genie-web", "genie", "restview"},
                                          {"genie-web", "genie", "restview"}};
  if (paths != want) o.fail("inherited witness paths differ from the hand enumeration");
  if (o.ok) o.note = std::to_string(rows) + " table rows and reverses; Genie fixture: 1 DIRECT + 3 INHERITED";
  return o;
}

Outcome advisory_math() {
  Outcome o;
  auto d = [](const char* s) { return Date::parse(s).value(); };
  auto s = testsupport::make_snapshot({
      Pkg{"lib", {}, "MIT", {{"1.0", "2014-06-01", {}}, {"1.1", "2018-02-01", {}}}, std::nullopt, ""},
      Pkg{"app", {}, "MIT", {{"1.0", "2016-01-01", {"lib"}}, {"1.1", "2018-03-04", {"lib>=1.1"}}}, std::nullopt, ""},
  });
  Advisory a{"ADV-1", cn("lib"), parse_specifier("<1.1"), {}, std::nullopt, d("2015-01-01"), d("2018-02-01")};
  auto rows = vulnerability_timeline(s, {a}, cn("lib"));
  if (rows.size() != 1 || rows[0].open_window_days != 1127) o.fail("window is not 1127 days");
  if (rows.size() == 1 && rows[0].open_window_days <= 3 * 365) o.fail("window not above three years");
  auto lag = patch_lag(s, a, cn("app"));
  if (lag != 31) o.fail("patch lag " + (lag ? std::to_string(*lag) : std::string("none")) + ", expected 31");

  std::size_t checks = 0;
  for (const auto& rg : graph_suite()) {
    auto g = build_graph(rg.snapshot);
    for (std::size_t p = 0; p < rg.names.size(); p += 5) {
      Advisory adv{"R", cn(rg.names[p]), {}, {}, std::nullopt, d("2016-01-01"), std::nullopt};
      std::vector<CanonicalName> prev;
      for (auto hops : kDepths) {
        auto cur = exposure_set(g, adv, to_depth(hops)).exposed;
        if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end())) o.fail("exposure shrank with depth");
        prev = std::move(cur);
        ++checks;
      }
    }
  }
  if (o.ok) o.note = "window 1127 days, lag 31 days, " + std::to_string(checks) + " monotone exposure steps";
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome scanner_corpus() {
  Outcome o;
  auto kinds = [](const ScriptFindings& f) {
    std::set<FlagKind> out;
    for (const auto& flag : f.flags) out.insert(flag.kind);
    return out;
  };
  auto root = std::filesystem::path(testsupport::source_path("tests/fixtures/scripts"));
  auto expected = nlohmann::json::parse(slurp(root / "expected.json"));
  std::size_t matched = 0;
  for (const auto& [name, flags] : expected.items()) {
    std::set<FlagKind> want;
    for (const auto& k : flags) want.insert(*parse_flag_kind(k.get<std::string>()));
    auto got = kinds(scan_script(slurp(root / name / "setup.py")));
    if (got == want) {
      ++matched;
    } else {
      o.fail("flag mismatch in " + name);
    }
  }
  if (expected.size() < 10) o.fail("corpus has fewer than 10 fixtures");

  auto post = kinds(scan_script(slurp(root / "postinstall_command/setup.py")));
  for (FlagKind k : {FlagKind::CmdclassOverride, FlagKind::NetworkAtInstall, FlagKind::DangerousImport}) {
    if (!post.count(k)) o.fail(std::string("PostInstallCommand lacks ") + to_string(k));
  }
  auto exec = kinds(scan_script("exec(zlib.decompress(base64.b64decode(d)))\n"));
  if (exec != std::set<FlagKind>{FlagKind::ObfuscatedExec, FlagKind::NonSetupCall}) o.fail("exec-decompress flags");
  if (!scan_script("from setuptools import setup\nsetup(name='x')\n").flags.empty()) o.fail("minimal script flagged");
  if (o.ok) o.note = std::to_string(matched) + "/" + std::to_string(expected.size()) + " fixtures match their expected flags";
  return o;
}

Outcome cli_determinism() {
  Outcome o;
  std::string snap = testsupport::source_path("data/sample/snapshot.jsonl");
  std::string adv = testsupport::source_path("data/sample/advisories.jsonl");
  std::string scripts = testsupport::source_path("data/sample/setup_scripts");
  std::vector<std::vector<std::string>> commands{
      {"stats"},
      {"reach", "urllib3"},
      {"reach", "six", "--series"},
      {"reach", "--maintainer", "armin@pallets.example"},
      {"trust", "pandas"},
      {"top", "--metric", "package_reach", "--k", "10"},
      {"top", "--metric", "maintainer_reach", "--k", "10"},
      {"top", "--metric", "itp", "--k", "10"},
      {"top", "--metric", "itm", "--k", "10"},
      {"squat"},
      {"license-check", "--transitive"},
      {"advisories", "--exposure", "--lag"},
      {"scan-setup", scripts},
  };
  auto run = [&](const std::vector<std::string>& cmd) {
    std::vector<std::string> args{"supply-audit", "--snapshot", snap, "--advisories", adv, "--format", "json"};
    args.insert(args.end(), cmd.begin(), cmd.end());
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return std::pair(code, out.str());
  };
  auto start = Clock::now();
  for (const auto& cmd : commands) {
    auto first = run(cmd), second = run(cmd);
    if (first.first == 2) o.fail(cmd[0] + " exited with a usage/IO error");
    if (first != second) o.fail(cmd[0] + " output differs between runs");
    if (!nlohmann::json::accept(first.second)) o.fail(cmd[0] + " did not print JSON");
  }
  double t = seconds_since(start);
  std::ifstream in(snap);
  std::size_t packages = 0;
  for (std::string line; std::getline(in, line);) packages += line.find("\"name\"") != std::string::npos;
  if (packages != 30) o.fail("sample snapshot has " + std::to_string(packages) + " packages");
  if (t >= 5.0) o.fail("took " + std::to_string(t) + " s");
  if (o.ok) {
    std::ostringstream s;
    s << commands.size() << " commands run twice, byte-identical, " << t << " s";
    o.note = s.str();
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {"graph-metric oracle equivalence", graph_oracle},
      {"reach/ITP duality", duality},
      {"fuzzy index correctness and scale", fuzzy_index},
      {"known squat pair regressions", paper_pairs},
      {"defensive and warning-stub classification", defensive},
      {"license matrix and inherited violations", license_matrix},
      {"advisory window, patch lag, exposure monotonicity", advisory_math},
      {"install-script exploit corpus", scanner_corpus},
      {"end-to-end CLI determinism", cli_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << (o.ok ? "PASS " : "FAIL ") << c.name << " -- " << o.note << std::endl;
    failures += !o.ok;
  }
  return failures == 0 ? 0 : 1;
}
