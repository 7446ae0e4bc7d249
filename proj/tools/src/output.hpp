#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace bosepath::cli {

std::uint64_t fnv1a(const std::string& bytes);
std::string hex(std::uint64_t value);
/// Shortest round-trip decimal representation.
std::string num(double value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string render() const;
};

/// Writes files below one directory and records their checksums.
class OutputDirectory {
 public:
  explicit OutputDirectory(std::filesystem::path root);
  void write(const std::string& name, const std::string& contents);
  const std::map<std::string, std::string>& checksums() const { return checksums_; }
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  std::map<std::string, std::string> checksums_;
};

}  // namespace bosepath::cli
