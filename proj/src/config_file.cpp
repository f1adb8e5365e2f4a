#include "qkd/config_file.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qkd::cfg {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  for (char& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double parse_number(const std::string& token, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || !std::isfinite(v))
    throw ParseError("config: key '" + key + "' has non-numeric value '" +
                     token + "'");
  return v;
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

Config Config::from_string(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("config: malformed section header at line " +
                         std::to_string(line_no));
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (section.empty())
        throw ParseError("config: empty section name at line " +
                         std::to_string(line_no));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config: expected 'key = value' at line " +
                       std::to_string(line_no));
    const std::string key = lower(trim(line.substr(0, eq)));
    if (key.empty() || section.empty())
      throw ParseError("config: key outside a section at line " +
                       std::to_string(line_no));
    const std::string full = section + "." + key;
    if (c.values_.count(full))
      throw ParseError("config: duplicate key '" + full + "'");
    c.values_[full] = trim(line.substr(eq + 1));
  }
  return c;
}

bool Config::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string Config::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    throw ParseError("config: missing required key '" + key + "'");
  read_.insert(key);
  return it->second;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  if (!has(key)) return fallback;
  return get_string(key);
}

double Config::get_double(const std::string& key) const {
  return parse_number(get_string(key), key);
}

double Config::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  return get_double(key);
}

int Config::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = get_double(key);
  const int i = static_cast<int>(std::llround(v));
  if (std::abs(v - i) > 1e-9)
    throw ParseError("config: key '" + key + "' must be an integer");
  return i;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = lower(get_string(key));
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ParseError("config: key '" + key + "' must be a boolean, got '" + v +
                   "'");
}

std::vector<std::string> Config::get_words(const std::string& key) const {
  std::istringstream in(get_string(key));
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

std::vector<double> Config::get_numbers(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& token : get_words(key)) {
    const auto c1 = token.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_number(token, key));
      continue;
    }
    const auto c2 = token.find(':', c1 + 1);
    if (c2 == std::string::npos)
      throw ParseError("config: key '" + key +
                       "' range must be start:stop:step");
    const double start = parse_number(token.substr(0, c1), key);
    const double stop = parse_number(token.substr(c1 + 1, c2 - c1 - 1), key);
    const double step = parse_number(token.substr(c2 + 1), key);
    if (!(step > 0.0) || stop < start)
      throw ParseError("config: key '" + key + "' has an empty range '" +
                       token + "'");
    const long long count =
        static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long long i = 0; i < count; ++i) out.push_back(start + i * step);
  }
  return out;
}

std::vector<double> Config::get_numbers(
    const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  return get_numbers(key);
}

std::vector<std::string> Config::unread_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_)
    if (!read_.count(key)) out.push_back(key);
  return out;
}

}  // namespace qkd::cfg
