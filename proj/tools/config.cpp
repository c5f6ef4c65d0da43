#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "dscrypt/errors.hpp"

namespace dscrypt::cli {

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"ring",   "k",    "t",           "degree",  "density", "terminal",
                                             "policy", "size-exponent", "seed", "cap-constant", "password"};
  return keys;
}

namespace {

template <class T>
T number(const std::string& key, const std::string& v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw InvalidSpec("config value for '" + key + "' is not a number: '" + v + "'");
  }
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void set_config_value(Config& c, const std::string& key, const std::string& v) {
  if (key == "ring") c.ring = v;
  else if (key == "k") c.k = number<std::size_t>(key, v);
  else if (key == "t") c.t = number<std::size_t>(key, v);
  else if (key == "degree") c.degree = number<int>(key, v);
  else if (key == "density") c.density = number<double>(key, v);
  else if (key == "terminal") c.terminal = v;
  else if (key == "policy") c.policy = v;
  else if (key == "size-exponent") c.size_exponent = number<double>(key, v);
  else if (key == "seed") c.seed = number<std::uint64_t>(key, v);
  else if (key == "cap-constant") c.cap_constant = number<std::uint64_t>(key, v);
  else if (key == "password") c.password = v;
  else throw InvalidSpec("unknown config key '" + key + "'");
}

void apply_config_file(Config& c, const std::string& path, const std::set<std::string>& skip) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidSpec(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    if (skip.count(key)) continue;
    set_config_value(c, key, trim(line.substr(eq + 1)));
  }
}

Resolved resolve(const Config& c) {
  Resolved r;
  r.ring = Ring::parse(c.ring);
  if (c.k < 2) throw InvalidSpec("k must be at least 2 (k = 1 gives n = 2, too small for a walk)");
  r.k = c.k;
  r.family.ring = r.ring;
  r.family.k = c.k;
  r.family.degree = c.degree;
  r.family.density_exponent = c.density;
  r.family.half_length = c.t;
  if (c.terminal.empty()) {
    r.family.terminal = r.ring->is_field() ? TerminalKind::kSinger : TerminalKind::kCyclePermutation;
  } else {
    r.family.terminal = parse_terminal_kind(c.terminal);
  }
  if (r.family.terminal == TerminalKind::kGeneralAffine) {
    // the map itself is drawn at generation time
    auto check = r.family;
    check.terminal = TerminalKind::kCyclePermutation;
    check.validate();
  } else {
    r.family.validate();
  }
  r.exponents.policy = parse_exponent_policy(c.policy);
  r.exponents.size_exponent = c.size_exponent;
  if (!(c.size_exponent > 0)) throw InvalidSpec("size-exponent must be positive");
  r.seed = c.seed;
  if (c.cap_constant == 0) throw InvalidSpec("cap-constant must be positive");
  r.cap_constant = c.cap_constant;
  r.password = parse_password(c.password);
  return r;
}

}  // namespace dscrypt::cli
