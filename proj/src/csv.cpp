#include "hopf/csv.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hopf/config.hpp"

namespace hopf {

std::string format_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvFile::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size())
    throw std::invalid_argument("csv row has " + std::to_string(cells.size()) +
                                " cells, header has " +
                                std::to_string(columns.size()));
  rows.push_back(std::move(cells));
}

std::vector<std::string> standard_meta(const std::string& config_raw) {
  std::vector<std::string> meta;
  meta.emplace_back(kVersionString);

  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[64];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof stamp, "generated %Y-%m-%dT%H:%M:%SZ", &tm_utc);
  meta.emplace_back(stamp);

  meta.emplace_back("config:");
  std::istringstream lines(config_raw);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    meta.push_back("  " + line);
  }
  return meta;
}

void write_csv(const std::string& path, const CsvFile& table,
               const std::vector<std::string>& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
  for (const std::string& m : meta) out << "# " << m << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << row[c];
    out << "\n";
  }
  if (!out) throw std::runtime_error("short write to \"" + path + "\"");
}

std::string csv_body(const std::string& file_text) {
  std::string body;
  std::istringstream lines(file_text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.front() == '#') continue;
    body += line;
    body += '\n';
  }
  return body;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace hopf
