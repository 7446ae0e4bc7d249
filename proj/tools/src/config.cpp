#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace bosepath::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format(const std::string& file, int line, const std::string& field, const std::string& message) {
  std::ostringstream os;
  os << file;
  if (line > 0) os << ":" << line;
  if (!field.empty()) os << ": field '" << field << "'";
  os << ": " << message;
  return os.str();
}

std::optional<double> to_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || end != t.data() + t.size()) return std::nullopt;
  return value;
}

}  // namespace

ConfigError::ConfigError(const std::string& file, int line, const std::string& field,
                         const std::string& message)
    : std::runtime_error(format(file, line, field, message)), line_(line), field_(field) {}

Config Config::parse(const std::string& text, const std::string& name) {
  Config config;
  config.name_ = name;
  config.source_ = text;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto comment = s.find_first_of("#;");
    if (comment != std::string::npos) s = s.substr(0, comment);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(name, line, "", "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigError(name, line, "", "empty section name");
      if (config.section_lines_.count(section)) {
        throw ConfigError(name, line, "", "duplicate section [" + section + "]");
      }
      config.section_lines_[section] = line;
      config.sections_[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(name, line, "", "expected 'key = value'");
    if (section.empty()) throw ConfigError(name, line, "", "key outside of any section");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError(name, line, "", "missing key before '='");
    auto& entries = config.sections_[section];
    if (entries.count(key)) throw ConfigError(name, line, section + "." + key, "duplicate key");
    entries[key] = Entry{trim(s.substr(eq + 1)), line};
  }
  return config;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, 0, "", "cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path);
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

bool Config::has_section(const std::string& section) const { return sections_.count(section) > 0; }

const Config::Entry& Config::entry(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end() || !s->second.count(key)) {
    const auto line = section_lines_.count(section) ? section_lines_.at(section) : 0;
    throw ConfigError(name_, line, section + "." + key, "required field is missing");
  }
  const Entry& e = s->second.at(key);
  e.used = true;
  return e;
}

ConfigError Config::error(const std::string& section, const std::string& key,
                          const std::string& message) const {
  int line = 0;
  if (has(section, key)) {
    line = sections_.at(section).at(key).line;
  } else if (section_lines_.count(section)) {
    line = section_lines_.at(section);
  }
  return ConfigError(name_, line, section + "." + key, message);
}

std::string Config::text(const std::string& section, const std::string& key) const {
  return entry(section, key).value;
}

std::string Config::text(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
  return has(section, key) ? text(section, key) : fallback;
}

double Config::number(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  const auto value = to_number(e.value);
  if (!value) throw ConfigError(name_, e.line, section + "." + key, "expected a number, got '" + e.value + "'");
  return *value;
}

double Config::number(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

long Config::integer(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  long value = 0;
  const std::string t = trim(e.value);
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || end != t.data() + t.size()) {
    throw ConfigError(name_, e.line, section + "." + key, "expected an integer, got '" + e.value + "'");
  }
  return value;
}

long Config::integer(const std::string& section, const std::string& key, long fallback) const {
  return has(section, key) ? integer(section, key) : fallback;
}

bool Config::flag(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const Entry& e = entry(section, key);
  std::string v = e.value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ConfigError(name_, e.line, section + "." + key, "expected true or false, got '" + e.value + "'");
}

bool Config::is_list(const std::string& section, const std::string& key) const {
  if (!has(section, key)) return false;
  const auto& v = sections_.at(section).at(key).value;
  return v.empty() || v.find(',') != std::string::npos;
}

std::vector<double> Config::numbers(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  std::vector<double> out;
  if (trim(e.value).empty()) throw ConfigError(name_, e.line, section + "." + key, "empty list");
  std::istringstream in(e.value);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto value = to_number(item);
    if (!value) {
      throw ConfigError(name_, e.line, section + "." + key, "expected a number, got '" + trim(item) + "'");
    }
    out.push_back(*value);
  }
  if (out.empty()) throw ConfigError(name_, e.line, section + "." + key, "empty list");
  return out;
}

void Config::reject_unused() const {
  for (const auto& [section, entries] : sections_) {
    for (const auto& [key, e] : entries) {
      if (!e.used) throw ConfigError(name_, e.line, section + "." + key, "unknown field");
    }
  }
}

void Config::validate(const std::map<std::string, std::set<std::string>>& schema) const {
  for (const auto& [section, entries] : sections_) {
    const auto allowed = schema.find(section);
    if (allowed == schema.end()) {
      throw ConfigError(name_, section_lines_.at(section), section, "unknown section");
    }
    for (const auto& [key, e] : entries) {
      if (!allowed->second.contains(key)) throw ConfigError(name_, e.line, section + "." + key, "unknown field");
    }
  }
}

}  // namespace bosepath::cli
