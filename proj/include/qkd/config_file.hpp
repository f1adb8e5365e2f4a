#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qkd::cfg {

// Flat INI-style configuration: "[section]" headers, "key = value" lines,
// '#' or ';' comments. Keys are addressed as "section.key". Values are
// whitespace-separated token lists; numeric lists also accept the range
// form "start:stop:step" (inclusive of stop up to rounding).

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Whitespace-separated tokens; empty value gives an empty list.
  std::vector<std::string> get_words(const std::string& key) const;
  // Numeric list, expanding any "start:stop:step" token.
  std::vector<double> get_numbers(const std::string& key) const;
  std::vector<double> get_numbers(const std::string& key,
                                  const std::vector<double>& fallback) const;

  // Keys present in the file but never read; used to reject typos.
  std::vector<std::string> unread_keys() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> read_;
};

}  // namespace qkd::cfg
