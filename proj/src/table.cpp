#include "sle/table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sle/version.hpp"

namespace sle {

Table::Table(std::vector<std::string> columns,
             std::vector<std::pair<std::string, std::string>> metadata)
    : columns_(std::move(columns)), metadata_(std::move(metadata)) {
  if (columns_.empty()) throw std::invalid_argument("Table: no columns");
}

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) {
    throw std::invalid_argument("Table: row width mismatch");
  }
  rows_.push_back(std::move(cells));
}

std::string Table::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Table::num(int v) { return std::to_string(v); }
std::string Table::num(std::int64_t v) { return std::to_string(v); }

std::string Table::render() const {
  std::ostringstream out;
  out << "# samplogit " << kLibraryVersion << "\n";
  for (const auto& kv : metadata_) {
    out << "# " << kv.first << ": " << kv.second << "\n";
  }
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (c) out << ",";
    out << columns_[c];
  }
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      out << row[c];
    }
    out << "\n";
  }
  return out.str();
}

void Table::write(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("Table: cannot open " + path.string());
  f << render();
  if (!f) throw std::runtime_error("Table: write failed for " + path.string());
}

}  // namespace sle
