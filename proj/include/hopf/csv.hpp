#pragma once

// CSV and JSON output plumbing shared by the runner commands. The CSV layout
// is fixed: '#'-prefixed metadata lines, then one header row, then data rows
// with '.' decimals at 17 significant digits. The metadata block carries the
// code version, a timestamp, and the config echoed line by line; only the
// timestamp line may differ between reruns, and csv_body strips the whole
// block so determinism checks compare the rows alone.

#include <string>
#include <vector>

namespace hopf {

// %.17g rendering used for every numeric cell.
std::string format_cell(double v);

struct CsvFile {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  // Throws std::invalid_argument when the cell count disagrees with the
  // header.
  void add_row(std::vector<std::string> cells);
};

// Metadata block for an output file: version, "generated <timestamp>", and
// the config text. Callers may append their own lines before writing.
std::vector<std::string> standard_meta(const std::string& config_raw);

// Writes '# '-prefixed meta lines, the header row, then the data rows.
// Throws std::runtime_error when the file cannot be written.
void write_csv(const std::string& path, const CsvFile& table,
               const std::vector<std::string>& meta);

// Everything below the metadata block: header row plus data rows. Used by
// the determinism checks, which must ignore the timestamp line.
std::string csv_body(const std::string& file_text);

std::string read_text_file(const std::string& path);

}  // namespace hopf
