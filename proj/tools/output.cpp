#include "output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "qsd/errors.hpp"

namespace qsd::cli {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string cell_text(const Cell& c, int precision) {
  struct Visitor {
    int precision;
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_number(v, precision); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return csv_field(s); }
  };
  return std::visit(Visitor{precision}, c);
}

nlohmann::ordered_json cell_json(const Cell& c, int precision) {
  struct Visitor {
    int precision;
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      // Round through the decimal text so JSON honors the same precision.
      const std::string s = format_number(v, precision);
      double r = 0.0;
      std::from_chars(s.data(), s.data() + s.size(), r);
      return r;
    }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{precision}, c);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

Cell parse_cell(const std::string& s) {
  if (s.empty()) return std::monostate{};
  const char* b = s.data();
  const char* e = b + s.size();
  std::int64_t i = 0;
  if (auto [p, ec] = std::from_chars(b, e, i); ec == std::errc() && p == e) return i;
  double d = 0.0;
  if (auto [p, ec] = std::from_chars(b, e, d); ec == std::errc() && p == e) return d;
  return s;
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_number(double v, int precision) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
  return std::string(buf, r.ptr);
}

void write_csv(std::ostream& os, const Table& t, int precision) {
  for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << csv_field(t.columns[j]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << cell_text(row[j], precision);
    os << '\n';
  }
}

void write_json(std::ostream& os, const Table& t, int precision) {
  auto record = [&](const std::vector<Cell>& row) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (std::size_t j = 0; j < row.size(); ++j) o[t.columns[j]] = cell_json(row[j], precision);
    return o;
  };
  nlohmann::ordered_json doc;
  if (t.single_record && t.rows.size() == 1) {
    doc = record(t.rows.front());
  } else {
    doc = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) doc.push_back(record(row));
  }
  os << doc.dump(2) << '\n';
}

void emit(std::ostream& os, const Table& t, const OutputSpec& spec) {
  if (spec.format == Format::Csv) {
    write_csv(os, t, spec.precision);
  } else {
    write_json(os, t, spec.precision);
  }
}

void emit_to(const Table& t, const OutputSpec& spec, std::ostream& fallback) {
  if (spec.path.empty()) {
    emit(fallback, t, spec);
    return;
  }
  std::ofstream f(spec.path, std::ios::binary);
  if (!f) throw Error("cli", "IOError", "cannot open " + spec.path + " for writing");
  emit(f, t, spec);
  if (!f) throw Error("cli", "IOError", "failed writing " + spec.path);
}

Table parse_csv(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) return t;
  t.columns = split_csv_line(line);
  while (std::getline(is, line)) {
    std::vector<Cell> row;
    for (const auto& f : split_csv_line(line)) row.push_back(parse_cell(f));
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace qsd::cli
