#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "semireg/types.hpp"

namespace semireg {

using Json = nlohmann::json;

/// How a reported number was obtained.
enum class Provenance { exact, lower_bound, monte_carlo, measured, fitted, input };

std::string to_string(Provenance p);

/// {"value": v, "provenance": "..."}; non-finite values become "inf", "-inf"
/// or "nan" strings so the document stays valid JSON.
Json tagged(double value, Provenance p);
Json tagged(Complex value, Provenance p);
Json number(double value);
Json complex_json(Complex z);  // [re, im]

/// Fixed-column table; numeric cells are rendered with %.17g.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::string>& cells);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::string str() const;

  static CsvTable parse(const std::string& text);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_double(double v);

struct Report {
  std::string command;
  Json config = Json::object();
  Json results = Json::object();
  std::vector<std::string> verdicts;
  CsvTable table{{}};
  double wall_time = 0.0;

  /// Full document. `with_timing = false` omits the wall-time field.
  Json to_json(bool with_timing = true) const;
};

/// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace semireg
