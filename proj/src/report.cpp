#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "bjw/cli.hpp"

namespace bjw::cli {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_csv(std::ostream& os, const std::vector<Record>& rows) {
  if (rows.empty()) return;
  const Record& head = rows.front();
  for (std::size_t i = 0; i < head.size(); ++i) os << (i ? "," : "") << csv_escape(head[i].first);
  os << "\r\n";
  for (const Record& r : rows) {
    if (r.size() != head.size()) throw std::invalid_argument("CSV rows with differing columns");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i].first != head[i].first) throw std::invalid_argument("CSV rows with differing columns");
      os << (i ? "," : "") << csv_escape(r[i].second);
    }
    os << "\r\n";
  }
}

namespace {

// Splits RFC 4180 text into rows of fields.
std::vector<std::vector<std::string>> parse_fields(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, after_quote = false, any = false;
  char c;
  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    rows.push_back(std::move(row));
    row.clear();
    any = false;
    after_quote = false;
  };
  while (is.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          is.get(c);
          field += '"';
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      after_quote = false;
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && is.peek() == '\n') is.get(c);
      end_row();
    } else if (c == '"') {
      if (!field.empty() || after_quote) throw std::invalid_argument("stray quote in CSV field");
      quoted = true;
      any = true;
    } else {
      if (after_quote) throw std::invalid_argument("text after closing quote in CSV field");
      field += c;
      any = true;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
  if (any || !field.empty()) end_row();
  return rows;
}

}  // namespace

std::vector<Record> read_csv(std::istream& is) {
  const auto rows = parse_fields(is);
  std::vector<Record> out;
  if (rows.empty()) return out;
  const auto& head = rows.front();
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].size() != head.size()) {
      throw std::invalid_argument("CSV row " + std::to_string(k) + " has " +
                                  std::to_string(rows[k].size()) + " fields, expected " +
                                  std::to_string(head.size()));
    }
    Record r;
    for (std::size_t i = 0; i < head.size(); ++i) r.emplace_back(head[i], rows[k][i]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace bjw::cli
