#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace zmc::cli {

// Flat key=value run configuration. Blank lines and lines starting with '#'
// are ignored; whitespace around keys and values is trimmed. Values set from
// the command line replace file values and carry line 0.
class RunConfig {
public:
  static RunConfig parse(std::istream& in);
  static RunConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value, int line = 0);
  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string get_string(const std::string& key) const;
  std::optional<std::string> find_string(const std::string& key) const;
  double get_double(const std::string& key, std::optional<double> fallback = std::nullopt) const;
  int get_int(const std::string& key, std::optional<int> fallback = std::nullopt) const;

  // Throws ConfigError for the first key not in `known`.
  void reject_unknown(const std::vector<std::string>& known) const;

private:
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> entries_;
};

}  // namespace zmc::cli
