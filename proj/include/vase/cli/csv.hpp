#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace vase::cli {

// RFC-4180 quoting: fields containing commas, quotes or newlines are quoted
// and embedded quotes doubled.
std::string csv_field(const std::string& raw);

void write_csv_row(std::ostream& os, std::span<const std::string> cells);

// Minimal reader for our own dumps: header + rows, handles quoted fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

}  // namespace vase::cli
