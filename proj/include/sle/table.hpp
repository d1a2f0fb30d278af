#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace sle {

// Comma-separated table with a '#'-prefixed metadata header block. Number
// formatting is locale-independent and round-trip exact, so identical data
// produces byte-identical files.
class Table {
 public:
  Table(std::vector<std::string> columns,
        std::vector<std::pair<std::string, std::string>> metadata = {});

  void add_row(std::vector<std::string> cells);

  static std::string num(double v);
  static std::string num(int v);
  static std::string num(std::int64_t v);

  std::size_t rows() const { return rows_.size(); }
  std::string render() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> metadata_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace sle
