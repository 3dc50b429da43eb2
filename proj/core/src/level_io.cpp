#include "salem/level_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "salem/errors.hpp"

namespace salem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string format_level(const LevelHeader& h, const LevelSet& level) {
  std::string out;
  out.reserve((level.atoms.size() + level.structured.size()) * 12 + 64);
  out += std::to_string(h.N0) + ' ' + std::to_string(h.t0) + ' ' + std::to_string(h.n0) + ' ' +
         std::to_string(h.seed) + ' ' + std::to_string(h.j) + '\n';
  for (Int a : level.atoms) out += std::to_string(a) + '\n';
  out += kLevelSeparator;
  out += '\n';
  for (Int s : level.structured) out += std::to_string(s) + '\n';
  return out;
}

std::pair<LevelHeader, LevelSet> parse_level(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(name, 1, "missing header");
  ++lineno;
  LevelHeader h;
  {
    std::istringstream hs(line);
    std::string fields[5];
    for (auto& f : fields) {
      if (!(hs >> f)) throw ParseError(name, lineno, "header must be `N0 t0 n0 seed j`");
    }
    std::string extra;
    if (hs >> extra) throw ParseError(name, lineno, "trailing data in header");
    if (!parse_number(fields[0], h.N0) || !parse_number(fields[1], h.t0) || !parse_number(fields[2], h.n0) ||
        !parse_number(fields[3], h.seed) || !parse_number(fields[4], h.j)) {
      throw ParseError(name, lineno, "non-integer header field");
    }
  }
  LevelSet level;
  level.j = h.j;
  bool in_structured = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string v = trim(line);
    if (v == kLevelSeparator) {
      if (in_structured) throw ParseError(name, lineno, "duplicate separator");
      in_structured = true;
      continue;
    }
    Int value = 0;
    if (!parse_number(v, value)) throw ParseError(name, lineno, "expected an integer atom, got `" + v + "`");
    (in_structured ? level.structured : level.atoms).push_back(value);
  }
  if (!in_structured) throw ParseError(name, lineno, "missing separator line `--`");
  return {h, level};
}

ConstructionParams parse_config(const std::string& text, const std::string& name) {
  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(name, lineno, "expected `key = value`");
    const std::string key = trim(s.substr(0, eq));
    if (kv.count(key)) throw ParseError(name, lineno, "duplicate key `" + key + "`");
    kv[key] = {trim(s.substr(eq + 1)), lineno};
  }

  auto take_int = [&](const char* key, auto& out) -> bool {
    auto it = kv.find(key);
    if (it == kv.end()) return false;
    if (!parse_number(it->second.first, out)) {
      throw ParseError(name, it->second.second, std::string("`") + key + "` must be an integer");
    }
    kv.erase(it);
    return true;
  };
  auto take_double = [&](const char* key, double& out) -> bool {
    auto it = kv.find(key);
    if (it == kv.end()) return false;
    if (!parse_double(it->second.first, out)) {
      throw ParseError(name, it->second.second, std::string("`") + key + "` must be a number");
    }
    kv.erase(it);
    return true;
  };

  Int N0 = 0, t0 = 0;
  int n0 = 0;
  if (!take_int("N0", N0) || !take_int("t0", t0) || !take_int("n0", n0)) {
    throw ParseError(name, 0, "N0, t0 and n0 are required");
  }
  ParamOverrides o;
  int iv = 0;
  Int lv = 0;
  std::uint64_t uv = 0;
  double dv = 0.0;
  if (take_int("j_max", iv)) o.j_max = iv;
  if (take_int("seed", uv)) o.seed = uv;
  if (take_double("c_eta", dv)) o.c_eta = dv;
  if (take_double("c_rot", dv)) o.c_rot = dv;
  if (take_int("ap_offset", lv)) o.ap_offset = lv;
  if (take_int("ap_gap", lv)) o.ap_gap = lv;
  if (take_int("k_budget", lv)) o.k_budget = lv;
  if (take_int("max_retries", iv)) o.max_retries = iv;
  if (take_int("fft_budget", lv)) o.fft_budget = lv;
  if (!kv.empty()) {
    throw ParseError(name, kv.begin()->second.second, "unknown key `" + kv.begin()->first + "`");
  }
  return derive_params(N0, t0, n0, o);
}

std::string format_config(const ConstructionParams& p) {
  std::ostringstream os;
  os << "N0 = " << p.N0 << '\n'
     << "t0 = " << p.t0 << '\n'
     << "n0 = " << p.n0 << '\n'
     << "j_max = " << p.j_max << '\n'
     << "seed = " << p.seed << '\n'
     << "c_eta = " << format_double(p.c_eta) << '\n'
     << "c_rot = " << format_double(p.c_rot) << '\n'
     << "ap_offset = " << p.ap_offset << '\n'
     << "ap_gap = " << p.ap_gap << '\n'
     << "k_budget = " << p.k_budget << '\n'
     << "max_retries = " << p.max_retries << '\n'
     << "fft_budget = " << p.fft_budget << '\n';
  return os.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ExitCode::kInvalidInput, "cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error(ExitCode::kInvalidInput, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::filesystem::path level_path(const std::filesystem::path& dir, int j) {
  return dir / ("level_" + std::to_string(j) + ".txt");
}

void save_construction(const std::filesystem::path& dir, const Construction& c) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / kConfigFile, format_config(c.params));
  const LevelHeader base{c.params.N0, c.params.t0, c.params.n0, c.params.seed, 0};
  for (const auto& level : c.levels) {
    LevelHeader h = base;
    h.j = level.j;
    write_file_atomic(level_path(dir, level.j), format_level(h, level));
  }
}

Construction load_construction(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw InvalidArgument("not a construction directory: " + dir.string());
  }
  const auto cfg = dir / kConfigFile;
  if (!std::filesystem::exists(cfg)) {
    throw InvalidArgument("missing " + cfg.string() + " (not a construction directory)");
  }
  Construction c;
  c.params = parse_config(read_file(cfg), cfg.string());
  c.progression = make_progression(c.params);
  for (int j = 0; j <= c.params.j_max; ++j) {
    const auto path = level_path(dir, j);
    if (!std::filesystem::exists(path)) throw ParseError(path.string(), 0, "missing level file");
    auto [h, level] = parse_level(read_file(path), path.string());
    const LevelHeader want{c.params.N0, c.params.t0, c.params.n0, c.params.seed, j};
    if (!(h == want)) throw ParseError(path.string(), 1, "header disagrees with construction.cfg");
    c.levels.push_back(std::move(level));
  }
  return c;
}

}  // namespace salem
