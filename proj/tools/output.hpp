#pragma once

// Tabular output shared by every subcommand: one Table, emitted as CSV
// (comma separated, header row, LF endings, locale independent) or JSON.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace qsd::cli {

enum class Format { Csv, Json };

struct OutputSpec {
  Format format = Format::Csv;
  std::string path;  // empty: standard output
  int precision = 12;
};

/// A missing cell (e.g. a route that did not converge) is monostate; it is an
/// empty CSV field and JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// A one-row table emitted as a JSON object instead of an array of objects.
  bool single_record = false;

  void add_row(std::vector<Cell> row);
};

/// Shortest-form decimal with `precision` significant digits via
/// std::to_chars, so the text never depends on the C locale.
std::string format_number(double v, int precision);

void write_csv(std::ostream& os, const Table& t, int precision);
void write_json(std::ostream& os, const Table& t, int precision);
void emit(std::ostream& os, const Table& t, const OutputSpec& spec);

/// Writes to spec.path when set, otherwise to `fallback`.
void emit_to(const Table& t, const OutputSpec& spec, std::ostream& fallback);

/// Parses CSV produced by write_csv back into a table whose numeric fields are
/// doubles; used to check that emitted files round-trip.
Table parse_csv(std::istream& is);

}  // namespace qsd::cli
