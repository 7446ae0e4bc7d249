#pragma once

#include <map>
#include <set>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bosepath::cli {

/// Configuration problem with its location in the file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& file, int line, const std::string& field, const std::string& message);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// INI-style file: `[section]` headers, `key = value` pairs, `#` or `;`
/// comments. Every key must be read by the command; leftovers are reported.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& name = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  std::string text(const std::string& section, const std::string& key) const;
  std::string text(const std::string& section, const std::string& key, const std::string& fallback) const;
  double number(const std::string& section, const std::string& key) const;
  double number(const std::string& section, const std::string& key, double fallback) const;
  long integer(const std::string& section, const std::string& key) const;
  long integer(const std::string& section, const std::string& key, long fallback) const;
  bool flag(const std::string& section, const std::string& key, bool fallback) const;
  /// Comma-separated numbers; a present but empty list is an error.
  std::vector<double> numbers(const std::string& section, const std::string& key) const;
  bool is_list(const std::string& section, const std::string& key) const;

  /// Throws for keys that no command consumed.
  void reject_unused() const;

  /// Throws for sections or keys outside `schema` (section -> allowed keys).
  void validate(const std::map<std::string, std::set<std::string>>& schema) const;

  ConfigError error(const std::string& section, const std::string& key, const std::string& message) const;
  const std::string& name() const { return name_; }
  const std::string& source() const { return source_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };
  const Entry& entry(const std::string& section, const std::string& key) const;

  std::string name_;
  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::map<std::string, int> section_lines_;
};

}  // namespace bosepath::cli
