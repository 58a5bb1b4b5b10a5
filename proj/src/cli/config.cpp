#include "zmc/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "zmc/errors.hpp"

namespace zmc::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::parse(std::istream& in) {
  RunConfig cfg;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + text + "'", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line);
    if (cfg.has(key)) throw ConfigError("duplicate key '" + key + "'", line);
    cfg.set(key, value, line);
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in);
}

void RunConfig::set(const std::string& key, const std::string& value, int line) { entries_[key] = {value, line}; }

std::optional<std::string> RunConfig::find_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.value;
}

std::string RunConfig::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
  return it->second.value;
}

double RunConfig::get_double(const std::string& key, std::optional<double> fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    if (fallback) return *fallback;
    throw ConfigError("missing required key '" + key + "'");
  }
  const std::string& v = it->second.value;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError("key '" + key + "': '" + v + "' is not a finite number", it->second.line);
  }
  return out;
}

int RunConfig::get_int(const std::string& key, std::optional<int> fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    if (fallback) return *fallback;
    throw ConfigError("missing required key '" + key + "'");
  }
  const std::string& v = it->second.value;
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': '" + v + "' is not an integer", it->second.line);
  }
  return out;
}

void RunConfig::reject_unknown(const std::vector<std::string>& known) const {
  for (const auto& [key, entry] : entries_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown key '" + key + "'", entry.line);
    }
  }
}

}  // namespace zmc::cli
