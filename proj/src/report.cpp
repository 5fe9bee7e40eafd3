#include "semireg/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "semireg/errors.hpp"

namespace semireg {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::lower_bound: return "lower_bound";
    case Provenance::monte_carlo: return "monte_carlo";
    case Provenance::measured: return "measured";
    case Provenance::fitted: return "fitted";
    case Provenance::input: return "input";
  }
  return "measured";
}

Json number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

Json complex_json(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

Json tagged(double value, Provenance p) {
  return Json{{"value", number(value)}, {"provenance", to_string(p)}};
}

Json tagged(Complex value, Provenance p) {
  return Json{{"value", complex_json(value)}, {"provenance", to_string(p)}};
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) {
    throw ValidationError("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(columns_.size()));
  }
  rows_.push_back(cells);
}

namespace {

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        in_quotes = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

std::string CsvTable::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << quote(columns_[i]);
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << quote(row[i]);
    os << '\n';
  }
  return os.str();
}

CsvTable CsvTable::parse(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("csv: missing header");
  CsvTable table(split_line(line));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    table.add_row(split_line(line));
  }
  return table;
}

Json Report::to_json(bool with_timing) const {
  Json doc;
  doc["command"] = command;
  doc["config"] = config;
  doc["results"] = results;
  doc["verdicts"] = verdicts;
  Json table_json;
  table_json["columns"] = table.columns();
  table_json["rows"] = Json::array();
  for (const auto& row : table.rows()) {
    Json r = Json::array();
    for (const auto& cell : row) {
      // Numbers printed with %.17g parse back exactly.
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (!cell.empty() && end == cell.c_str() + cell.size()) {
        r.push_back(number(v));
      } else {
        r.push_back(cell);
      }
    }
    table_json["rows"].push_back(std::move(r));
  }
  doc["table"] = std::move(table_json);
  if (with_timing) doc["wall_time"] = wall_time;
  return doc;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ValidationError("cannot open " + tmp.string() + " for writing");
    os << content;
    os.flush();
    if (!os) throw ValidationError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ValidationError("cannot move report into " + path + ": " + ec.message());
  }
}

}  // namespace semireg
