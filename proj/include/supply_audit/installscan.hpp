#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace supply_audit {

enum class FlagKind {
  ImportAtInstall,
  DangerousImport,
  NonSetupCall,
  CmdclassOverride,
  NetworkAtInstall,
  ObfuscatedExec,
};

const char* to_string(FlagKind kind);
std::optional<FlagKind> parse_flag_kind(std::string_view text);
inline constexpr FlagKind kAllFlagKinds[] = {FlagKind::ImportAtInstall,  FlagKind::DangerousImport,
                                             FlagKind::NonSetupCall,     FlagKind::CmdclassOverride,
                                             FlagKind::NetworkAtInstall, FlagKind::ObfuscatedExec};

struct ScanFlag {
  FlagKind kind = FlagKind::ImportAtInstall;
  std::size_t line = 0;  // 1-based
  std::string detail;
  friend auto operator<=>(const ScanFlag&, const ScanFlag&) = default;
};

struct ScriptFindings {
  std::string path;
  std::vector<ScanFlag> flags;  // sorted by (line, kind, detail)
  // Root modules imported at install time, allowlisted ones excluded.
  std::set<std::string> imported_modules;
  long risk_score = 0;
  std::vector<std::string> warnings;

  bool has(FlagKind kind) const;
};

struct ScanConfig {
  std::set<std::string> allowlist{"setuptools", "distutils"};
  std::set<std::string> dangerous{"os",   "sys",     "subprocess", "shutil",  "socket",
                                  "glob", "urllib", "requests",   "ctypes"};
  std::map<FlagKind, long> weights{
      {FlagKind::ObfuscatedExec, 10}, {FlagKind::NetworkAtInstall, 8}, {FlagKind::CmdclassOverride, 5},
      {FlagKind::DangerousImport, 3}, {FlagKind::NonSetupCall, 2},     {FlagKind::ImportAtInstall, 1},
  };
  std::string file_pattern = "setup.py";

  // JSON: {"weights": {"OBFUSCATED_EXEC": 10, ...}, "dangerous": [...],
  // "allowlist": [...], "file_pattern": "setup.py"}; every key optional.
  void load(const std::filesystem::path& path);
  long weight(FlagKind kind) const;
};

// Total: never throws on any byte sequence.
ScriptFindings scan_script(std::string_view source, const ScanConfig& config = {});

long risk_score(const std::vector<ScanFlag>& flags, const ScanConfig& config = {});

struct ScanError {
  std::string path;
  std::string message;
};

struct TreeScan {
  std::vector<ScriptFindings> findings;  // path order
  std::vector<ScanError> errors;
};

// Scans every regular file under `root` (or `root` itself when it is a
// file) whose name matches config.file_pattern.
TreeScan scan_tree(const std::filesystem::path& root, const ScanConfig& config = {}, unsigned threads = 1);

struct FlagShare {
  std::size_t scripts = 0;
  double fraction = 0.0;
};

struct CorpusSummary {
  std::size_t scripts = 0;
  std::size_t flagged_scripts = 0;
  std::map<FlagKind, FlagShare> per_flag;
  // (module, scripts importing it), most common first, ties by name.
  std::vector<std::pair<std::string, std::size_t>> top_modules;
};

CorpusSummary corpus_summary(const std::vector<ScriptFindings>& findings);

}  // namespace supply_audit
