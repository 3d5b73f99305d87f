#include "supply_audit/installscan.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <json.hpp>
#include <regex>
#include <sstream>
#include <tuple>

#include "supply_audit/error.hpp"
#include "supply_audit/parallel.hpp"

namespace supply_audit {

const char* to_string(FlagKind kind) {
  switch (kind) {
    case FlagKind::ImportAtInstall: return "IMPORT_AT_INSTALL";
    case FlagKind::DangerousImport: return "DANGEROUS_IMPORT";
    case FlagKind::NonSetupCall: return "NON_SETUP_CALL";
    case FlagKind::CmdclassOverride: return "CMDCLASS_OVERRIDE";
    case FlagKind::NetworkAtInstall: return "NETWORK_AT_INSTALL";
    case FlagKind::ObfuscatedExec: return "OBFUSCATED_EXEC";
  }
  return "?";
}

std::optional<FlagKind> parse_flag_kind(std::string_view text) {
  for (FlagKind k : kAllFlagKinds) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

bool ScriptFindings::has(FlagKind kind) const {
  return std::any_of(flags.begin(), flags.end(), [&](const ScanFlag& f) { return f.kind == kind; });
}

void ScanConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedRecord, path.string() + ": " + e.what());
  }
  auto bad = [&](const std::string& why) { throw Error(ErrorKind::MalformedRecord, path.string() + ": " + why); };
  if (!doc.is_object()) bad("expected an object");
  if (auto it = doc.find("weights"); it != doc.end()) {
    if (!it->is_object()) bad("'weights' must be an object");
    for (const auto& [key, value] : it->items()) {
      auto kind = parse_flag_kind(key);
      if (!kind) bad("unknown flag kind '" + key + "'");
      if (!value.is_number_integer() || value.get<long>() < 0) bad("weight for " + key + " must be a non-negative integer");
      weights[*kind] = value.get<long>();
    }
  }
  auto read_set = [&](const char* key, std::set<std::string>& target) {
    auto it = doc.find(key);
    if (it == doc.end()) return;
    if (!it->is_array()) bad(std::string("'") + key + "' must be an array");
    target.clear();
    for (const auto& v : *it) {
      if (!v.is_string()) bad(std::string("'") + key + "' must contain strings");
      target.insert(v.get<std::string>());
    }
  };
  read_set("dangerous", dangerous);
  read_set("allowlist", allowlist);
  if (auto it = doc.find("file_pattern"); it != doc.end()) {
    if (!it->is_string()) bad("'file_pattern' must be a string");
    file_pattern = it->get<std::string>();
  }
}

long ScanConfig::weight(FlagKind kind) const {
  auto it = weights.find(kind);
  return it == weights.end() ? 0 : it->second;
}

long risk_score(const std::vector<ScanFlag>& flags, const ScanConfig& config) {
  long total = 0;
  for (const auto& f : flags) total += config.weight(f.kind);
  return total;
}

namespace {

// One logical line: physical lines joined across brackets and backslash
// continuations. `code` has string contents blanked and comments removed;
// `raw` keeps string contents. Both have the same length and `line[i]` is
// the physical line of character i.
struct LogicalLine {
  std::string code;
  std::string raw;
  // raw with the contents of triple-quoted strings blanked.
  std::string shortlit;
  std::vector<std::size_t> line;
  std::size_t indent = 0;

  void push(char c, char r, std::size_t ln, bool long_text = false) {
    code.push_back(c);
    raw.push_back(r);
    shortlit.push_back(long_text ? ' ' : r);
    line.push_back(ln);
  }
  bool blank() const {
    return std::all_of(code.begin(), code.end(), [](unsigned char c) { return std::isspace(c); });
  }
};

std::string collapse_space(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::vector<LogicalLine> split_logical(std::string_view s) {
  std::vector<LogicalLine> out;
  LogicalLine cur;
  std::size_t ln = 1;
  int depth = 0;
  bool at_line_start = true;
  char quote = 0;
  bool triple = false;

  auto finish = [&] {
    if (!cur.blank()) out.push_back(std::move(cur));
    cur = LogicalLine{};
    depth = 0;
    at_line_start = true;
  };

  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quote) {
      if (c == '\\' && i + 1 < s.size()) {
        cur.push(' ', c, ln, triple);
        char next = s[++i];
        cur.push(' ', next, ln, triple);
        if (next == '\n') ++ln;
        continue;
      }
      if (c == quote && (!triple || (i + 2 < s.size() && s[i + 1] == quote && s[i + 2] == quote))) {
        int n = triple ? 3 : 1;
        for (int k = 0; k < n; ++k) cur.push(quote, quote, ln);
        i += static_cast<std::size_t>(n - 1);
        quote = 0;
        continue;
      }
      if (c == '\n') {
        if (!triple) {
          // Unterminated literal: close it and handle the newline as code.
          quote = 0;
          --i;
          continue;
        }
        cur.push(' ', '\n', ln, true);
        ++ln;
        continue;
      }
      cur.push(' ', c, ln, triple);
      continue;
    }

    if (at_line_start && depth == 0 && cur.code.empty()) {
      std::size_t indent = 0;
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\f')) {
        ++indent;
        ++i;
      }
      cur.indent = indent;
      at_line_start = false;
      if (i >= s.size()) break;
      c = s[i];
    }

    if (c == '#') {
      while (i + 1 < s.size() && s[i + 1] != '\n') ++i;
      continue;
    }
    if (c == '\\' && i + 1 < s.size() && (s[i + 1] == '\n' || (s[i + 1] == '\r' && i + 2 < s.size() && s[i + 2] == '\n'))) {
      cur.push(' ', ' ', ln);
      i += s[i + 1] == '\r' ? 2 : 1;
      ++ln;
      continue;
    }
    if (c == '\n') {
      ++ln;
      if (depth > 0) {
        cur.push(' ', ' ', ln - 1);
      } else {
        finish();
      }
      continue;
    }
    if (c == '\r') continue;
    if (c == '"' || c == '\'') {
      quote = c;
      triple = i + 2 < s.size() && s[i + 1] == c && s[i + 2] == c;
      int n = triple ? 3 : 1;
      for (int k = 0; k < n; ++k) cur.push(c, c, ln);
      i += static_cast<std::size_t>(n - 1);
      continue;
    }
    if (c == '(' || c == '[' || c == '{') ++depth;
    if ((c == ')' || c == ']' || c == '}') && depth > 0) --depth;
    cur.push(c, c, ln);
  }
  finish();
  return out;
}

struct Statement {
  std::size_t begin = 0;  // offsets into the logical line
  std::size_t end = 0;
  bool top_level = false;
};

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::size_t skip_space(const std::string& s, std::size_t pos, std::size_t end) {
  while (pos < end && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  return pos;
}

std::string leading_word(const std::string& code, std::size_t pos, std::size_t end) {
  std::size_t stop = pos;
  while (stop < end && is_ident_char(code[stop])) ++stop;
  return code.substr(pos, stop - pos);
}

const std::set<std::string> kCompoundHeads{"if", "elif", "else", "try", "except", "finally", "with",
                                           "for", "while", "def", "class", "async"};

const std::set<std::string> kKeywords{"if",     "elif",  "else",   "while",    "for",   "with",  "assert",
                                      "return", "del",   "not",    "and",      "or",    "yield", "raise",
                                      "lambda", "await", "in",     "is",       "except", "import", "from",
                                      "class",  "def",   "global", "nonlocal", "pass",  "break", "continue",
                                      "try",    "finally", "async"};

// Splits on ';' at bracket depth 0 and descends into one-line compound
// bodies ("if x: y()").
void split_statements(const LogicalLine& ll, std::size_t begin, std::size_t end, bool top_level,
                      std::vector<Statement>& out) {
  const std::string& code = ll.code;
  int depth = 0;
  std::size_t start = begin;
  auto emit = [&](std::size_t b, std::size_t e) {
    b = skip_space(code, b, e);
    if (b >= e) return;
    Statement st{b, e, top_level};
    std::string head = leading_word(code, b, e);
    if (kCompoundHeads.count(head)) {
      int d = 0;
      for (std::size_t i = b; i < e; ++i) {
        char c = code[i];
        if (c == '(' || c == '[' || c == '{') ++d;
        if ((c == ')' || c == ']' || c == '}') && d > 0) --d;
        if (c == ':' && d == 0 && head != "lambda") {
          out.push_back({b, i, top_level});
          split_statements(ll, i + 1, e, false, out);
          return;
        }
      }
    }
    out.push_back(st);
  };
  for (std::size_t i = begin; i < end; ++i) {
    char c = code[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if ((c == ')' || c == ']' || c == '}') && depth > 0) --depth;
    if (c == ';' && depth == 0) {
      emit(start, i);
      start = i + 1;
    }
  }
  emit(start, end);
}

// Offset of the bracket closing the one opened at `open`, or `end`.
std::size_t matching_close(const std::string& code, std::size_t open, std::size_t end) {
  int depth = 0;
  for (std::size_t i = open; i < end; ++i) {
    if (code[i] == '(' || code[i] == '[' || code[i] == '{') ++depth;
    if (code[i] == ')' || code[i] == ']' || code[i] == '}') {
      if (--depth == 0) return i;
    }
  }
  return end;
}

std::string root_module(const std::string& dotted) { return dotted.substr(0, dotted.find('.')); }

const std::vector<std::string> kObfuscationMarkers{"decode",   "decompress", "b64decode", "base64", "zlib",
                                                   "rot13",    "rot_13",     "codecs",    "marshal", "fromhex",
                                                   "unhexlify", "bz2",       "lzma"};

bool has_marker(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return std::any_of(kObfuscationMarkers.begin(), kObfuscationMarkers.end(),
                     [&](const std::string& m) { return lower.find(m) != std::string::npos; });
}

const std::set<std::string> kInstallCommands{"install",      "develop",         "egg_info",
                                             "install_lib",  "install_scripts", "install_data"};

class Scanner {
 public:
  Scanner(const ScanConfig& config) : config_(config) {}

  ScriptFindings run(std::string_view source) {
    std::string text = sanitize(source);
    auto lines = split_logical(text);
    physical_lines_ = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) + 1;

    // Imports and aliases first so later checks can consult them.
    std::vector<std::pair<const LogicalLine*, Statement>> statements;
    for (const auto& ll : lines) {
      std::vector<Statement> sts;
      split_statements(ll, 0, ll.code.size(), ll.indent == 0, sts);
      for (const auto& st : sts) statements.emplace_back(&ll, st);
    }
    for (const auto& [ll, st] : statements) scan_imports(*ll, st);
    for (const auto& [ll, st] : statements) scan_assignments(*ll, st);
    for (const auto& [ll, st] : statements) {
      scan_call(*ll, st);
      scan_cmdclass(*ll, st);
      scan_network(*ll, st);
      scan_exec(*ll, st);
    }

    std::sort(result_.flags.begin(), result_.flags.end(), [](const ScanFlag& a, const ScanFlag& b) {
      return std::tie(a.line, a.kind, a.detail) < std::tie(b.line, b.kind, b.detail);
    });
    result_.flags.erase(std::unique(result_.flags.begin(), result_.flags.end()), result_.flags.end());
    result_.risk_score = risk_score(result_.flags, config_);
    return std::move(result_);
  }

 private:
  std::string sanitize(std::string_view source) {
    std::string out;
    out.reserve(source.size());
    bool replaced = false;
    std::size_t i = 0;
    auto cont = [&](std::size_t k) {
      return k < source.size() && (static_cast<unsigned char>(source[k]) & 0xC0) == 0x80;
    };
    while (i < source.size()) {
      unsigned char c = static_cast<unsigned char>(source[i]);
      std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
      bool ok = len != 0;
      for (std::size_t k = 1; ok && k < len; ++k) ok = cont(i + k);
      if (ok && len > 1) {
        // Reject overlong forms and surrogates.
        unsigned char c1 = static_cast<unsigned char>(source[i + 1]);
        if ((len == 2 && c < 0xC2) || (len == 3 && c == 0xE0 && c1 < 0xA0) || (len == 3 && c == 0xED && c1 >= 0xA0) ||
            (len == 4 && c == 0xF0 && c1 < 0x90) || (len == 4 && (c > 0xF4 || (c == 0xF4 && c1 >= 0x90)))) {
          ok = false;
        }
      }
      if (!ok) {
        out.push_back('?');
        replaced = true;
        ++i;
        continue;
      }
      if (c == 0) {
        out.push_back(' ');
      } else {
        out.append(source.substr(i, len));
      }
      i += len;
    }
    if (replaced) result_.warnings.push_back("input is not valid UTF-8; invalid bytes replaced");
    return out;
  }

  void flag(FlagKind kind, const LogicalLine& ll, std::size_t offset, std::string detail) {
    std::size_t line = ll.line.empty() ? 1 : ll.line[std::min(offset, ll.line.size() - 1)];
    line = std::clamp<std::size_t>(line, 1, physical_lines_);
    result_.flags.push_back({kind, line, std::move(detail)});
  }

  void record_import(const LogicalLine& ll, std::size_t offset, const std::string& module) {
    if (module.empty() || module.front() == '.') return;
    std::string root = root_module(module);
    if (config_.allowlist.count(root)) return;
    result_.imported_modules.insert(root);
    if (root == "socket") socket_imported_ = true;
    flag(FlagKind::ImportAtInstall, ll, offset, module);
    if (config_.dangerous.count(root)) flag(FlagKind::DangerousImport, ll, offset, module);
  }

  void scan_imports(const LogicalLine& ll, const Statement& st) {
    const std::string& code = ll.code;
    std::string stmt = code.substr(st.begin, st.end - st.begin);
    static const std::regex import_re(R"(^import\s+(.+)$)");
    static const std::regex from_re(R"(^from\s+([\w\.]+)\s+import\s+(.+)$)");
    std::smatch m;
    if (std::regex_match(stmt, m, import_re)) {
      std::stringstream parts(m[1].str());
      for (std::string part; std::getline(parts, part, ',');) {
        std::stringstream words(part);
        std::string module;
        words >> module;
        record_import(ll, st.begin, module);
      }
    } else if (std::regex_match(stmt, m, from_re)) {
      std::string module = m[1].str();
      record_import(ll, st.begin, module);
      // "from setuptools.command.install import install as _install"
      std::string names = m[2].str();
      std::erase(names, '(');
      std::erase(names, ')');
      std::stringstream parts(names);
      for (std::string part; std::getline(parts, part, ',');) {
        std::stringstream words(part);
        std::string name, as, alias;
        words >> name >> as >> alias;
        if (kInstallCommands.count(name)) command_aliases_.insert(as == "as" && !alias.empty() ? alias : name);
      }
    }
    // Dynamic imports with literal module names.
    std::string raw = ll.raw.substr(st.begin, st.end - st.begin);
    static const std::regex dynamic_re(R"((?:__import__|import_module)\s*\(\s*['"]([\w\.]+)['"])");
    for (auto it = std::sregex_iterator(raw.begin(), raw.end(), dynamic_re); it != std::sregex_iterator(); ++it) {
      record_import(ll, st.begin + static_cast<std::size_t>(it->position(0)), (*it)[1].str());
    }
  }

  // name = <expression carrying an obfuscation marker>
  void scan_assignments(const LogicalLine& ll, const Statement& st) {
    std::string code = ll.code.substr(st.begin, st.end - st.begin);
    static const std::regex assign_re(R"(^([A-Za-z_]\w*)\s*=[^=])");
    std::smatch m;
    if (std::regex_search(code, m, assign_re)) {
      std::string rhs = ll.raw.substr(st.begin + static_cast<std::size_t>(m.position(0) + m.length(1)),
                                      st.end - st.begin - static_cast<std::size_t>(m.position(0) + m.length(1)));
      if (has_marker(rhs)) obfuscated_names_.insert(m[1].str());
    }
  }

  void scan_call(const LogicalLine& ll, const Statement& st) {
    if (!st.top_level) return;
    const std::string& code = ll.code;
    std::size_t pos = st.begin;
    std::size_t callee_end = pos;
    while (callee_end < st.end && (is_ident_char(code[callee_end]) || code[callee_end] == '.')) ++callee_end;
    if (callee_end == pos || std::isdigit(static_cast<unsigned char>(code[pos]))) return;
    std::string callee = code.substr(pos, callee_end - pos);
    std::size_t paren = skip_space(code, callee_end, st.end);
    if (paren >= st.end || code[paren] != '(') return;
    if (kKeywords.count(root_module(callee))) return;
    // Expression statement: after the call only attribute/call/subscript
    // chains may follow, never an assignment.
    std::size_t close = matching_close(code, paren, st.end);
    std::string tail = code.substr(std::min(close + 1, st.end), st.end - std::min(close + 1, st.end));
    static const std::regex assignment_tail(R"(^[^=]*[^=!<>]=[^=])");
    if (std::regex_search(tail, assignment_tail)) return;
    const std::string last = callee.substr(callee.rfind('.') == std::string::npos ? 0 : callee.rfind('.') + 1);
    if (last == "setup") return;
    flag(FlagKind::NonSetupCall, ll, pos, callee);
  }

  void scan_cmdclass(const LogicalLine& ll, const Statement& st) {
    std::string code = ll.code.substr(st.begin, st.end - st.begin);
    std::string raw = ll.raw.substr(st.begin, st.end - st.begin);
    static const std::regex kwarg_re(R"(\bcmdclass\s*=[^=])");
    static const std::regex key_re(R"(['"]cmdclass['"]\s*:)");
    std::smatch m;
    if (std::regex_search(code, m, kwarg_re) || std::regex_search(raw, m, key_re)) {
      flag(FlagKind::CmdclassOverride, ll, st.begin + static_cast<std::size_t>(m.position(0)), "cmdclass");
    }
    static const std::regex class_re(R"(^class\s+(\w+)\s*\(([^)]*)\))");
    if (std::regex_search(code, m, class_re)) {
      std::stringstream bases(m[2].str());
      for (std::string base; std::getline(bases, base, ',');) {
        base.erase(std::remove_if(base.begin(), base.end(), [](unsigned char c) { return std::isspace(c); }),
                   base.end());
        std::string last = base.substr(base.rfind('.') == std::string::npos ? 0 : base.rfind('.') + 1);
        if (kInstallCommands.count(last) || command_aliases_.count(base)) {
          flag(FlagKind::CmdclassOverride, ll, st.begin, m[1].str() + "(" + base + ")");
        }
      }
    }
  }

  void scan_network(const LogicalLine& ll, const Statement& st) {
    std::string code = ll.code.substr(st.begin, st.end - st.begin);
    std::string raw = ll.shortlit.substr(st.begin, st.end - st.begin);
    static const std::regex calls_re(
        R"(\b(socket\s*\.\s*(?:socket|create_connection)|create_connection|urlopen|urlretrieve|)"
        R"(requests\s*\.\s*(?:get|post|put|head|patch|delete|request)|HTTPS?Connection)\s*\()");
    static const std::regex connect_re(R"(\.\s*connect(?:_ex)?\s*\()");
    static const std::regex ip_port_re(R"(\b\d{1,3}(?:\.\d{1,3}){3}:\d{1,5}\b)");
    static const std::regex ip_tuple_re(R"(\(\s*['"]\d{1,3}(?:\.\d{1,3}){3}['"]\s*,\s*\d{1,5}\s*\))");
    for (auto it = std::sregex_iterator(code.begin(), code.end(), calls_re); it != std::sregex_iterator(); ++it) {
      std::string what = (*it)[1].str();
      std::erase_if(what, [](unsigned char c) { return std::isspace(c); });
      flag(FlagKind::NetworkAtInstall, ll, st.begin + static_cast<std::size_t>(it->position(0)), what);
    }
    if (socket_imported_) {
      std::smatch m;
      if (std::regex_search(code, m, connect_re)) {
        flag(FlagKind::NetworkAtInstall, ll, st.begin + static_cast<std::size_t>(m.position(0)), "connect");
      }
    }
    for (const auto* re : {&ip_port_re, &ip_tuple_re}) {
      for (auto it = std::sregex_iterator(raw.begin(), raw.end(), *re); it != std::sregex_iterator(); ++it) {
        flag(FlagKind::NetworkAtInstall, ll, st.begin + static_cast<std::size_t>(it->position(0)),
             "address literal " + collapse_space(it->str()));
      }
    }
  }

  void scan_exec(const LogicalLine& ll, const Statement& st) {
    const std::string& code = ll.code;
    static const std::regex exec_re(R"((^|[^\w\.])(exec|eval)\s*\()");
    std::string stmt = code.substr(st.begin, st.end - st.begin);
    for (auto it = std::sregex_iterator(stmt.begin(), stmt.end(), exec_re); it != std::sregex_iterator(); ++it) {
      std::size_t open = st.begin + static_cast<std::size_t>(it->position(0) + it->length(0)) - 1;
      std::size_t close = matching_close(code, open, st.end);
      std::string args_raw = ll.raw.substr(open + 1, close > open ? close - open - 1 : 0);
      std::string args_code = code.substr(open + 1, close > open ? close - open - 1 : 0);
      bool obfuscated = has_marker(args_raw);
      if (!obfuscated) {
        static const std::regex ident_re(R"([A-Za-z_]\w*)");
        for (auto id = std::sregex_iterator(args_code.begin(), args_code.end(), ident_re); id != std::sregex_iterator();
             ++id) {
          if (obfuscated_names_.count(id->str())) obfuscated = true;
        }
      }
      if (obfuscated) {
        flag(FlagKind::ObfuscatedExec, ll, st.begin + static_cast<std::size_t>(it->position(2)), (*it)[2].str());
      }
    }
  }

  const ScanConfig& config_;
  ScriptFindings result_;
  std::size_t physical_lines_ = 1;
  bool socket_imported_ = false;
  std::set<std::string> command_aliases_;
  std::set<std::string> obfuscated_names_;
};

}  // namespace

ScriptFindings scan_script(std::string_view source, const ScanConfig& config) {
  return Scanner(config).run(source);
}

TreeScan scan_tree(const std::filesystem::path& root, const ScanConfig& config, unsigned threads) {
  namespace fs = std::filesystem;
  TreeScan out;
  std::error_code ec;
  if (!fs::exists(root, ec)) throw Error(ErrorKind::Io, "no such path " + root.string());

  std::vector<fs::path> files;
  if (fs::is_regular_file(root, ec)) {
    files.push_back(root);
  } else {
    for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
         !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
      if (!it->is_regular_file(ec)) continue;
      if (fnmatch(config.file_pattern.c_str(), it->path().filename().c_str(), 0) == 0) files.push_back(it->path());
    }
    if (ec) out.errors.push_back({root.string(), ec.message()});
  }
  std::sort(files.begin(), files.end());

  std::vector<std::optional<ScriptFindings>> results(files.size());
  std::vector<std::string> failures(files.size());
  parallel_for(files.size(), threads, [&](std::size_t i) {
    std::ifstream in(files[i], std::ios::binary);
    std::string data;
    char chunk[1 << 16];
    while (in && (in.read(chunk, sizeof chunk), in.gcount() > 0)) data.append(chunk, static_cast<std::size_t>(in.gcount()));
    if (!in.is_open() || in.bad()) {
      failures[i] = "cannot read file";
      return;
    }
    ScriptFindings f = scan_script(data, config);
    f.path = files[i].string();
    results[i] = std::move(f);
  });
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (results[i]) {
      out.findings.push_back(std::move(*results[i]));
    } else {
      out.errors.push_back({files[i].string(), failures[i]});
    }
  }
  return out;
}

CorpusSummary corpus_summary(const std::vector<ScriptFindings>& findings) {
  CorpusSummary s;
  s.scripts = findings.size();
  for (FlagKind k : kAllFlagKinds) s.per_flag[k] = {};
  std::map<std::string, std::size_t> modules;
  for (const auto& f : findings) {
    if (!f.flags.empty()) ++s.flagged_scripts;
    for (FlagKind k : kAllFlagKinds) {
      if (f.has(k)) ++s.per_flag[k].scripts;
    }
    for (const auto& m : f.imported_modules) ++modules[m];
  }
  if (s.scripts) {
    for (auto& [_, share] : s.per_flag) share.fraction = static_cast<double>(share.scripts) / static_cast<double>(s.scripts);
  }
  s.top_modules.assign(modules.begin(), modules.end());
  std::stable_sort(s.top_modules.begin(), s.top_modules.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return s;
}

}  // namespace supply_audit
