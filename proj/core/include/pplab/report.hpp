#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace pplab {

using json = nlohmann::ordered_json;

/// Deterministic float formatting shared by every report writer.
std::string format_number(double v);

/// CSV with a schema_version banner line, fixed column order, and
/// deterministic number formatting (byte-identical across repeated runs).
class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> columns, int schema_version = 1);
  void add_row(const std::vector<std::string>& cells);
  void add_row_numbers(const std::vector<double>& cells);
  std::string str() const;

private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  int version_;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace pplab
