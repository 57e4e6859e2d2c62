// SPDX-License-Identifier: Apache-2.0
#include "dspt5/csv.hpp"

namespace dspt5::csv {
namespace {

bool needs_quoting(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

}  // namespace

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.put(',');
    const std::string& field = fields[i];
    if (!needs_quoting(field)) {
      out << field;
      continue;
    }
    out.put('"');
    for (char c : field) {
      if (c == '"') out.put('"');
      out.put(c);
    }
    out.put('"');
  }
  out << "\r\n";
}

std::vector<std::vector<std::string>> parse(std::string_view content) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // row has at least one field boundary

  const auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = true;
  };
  const auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    field_started = false;
  };

  std::size_t i = 0;
  while (i < content.size()) {
    const char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          i += 2;
        } else {
          in_quotes = false;
          ++i;
        }
      } else {
        field.push_back(c);
        ++i;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        ++i;
        break;
      case ',':
        end_field();
        ++i;
        break;
      case '\r':
        if (i + 1 < content.size() && content[i + 1] == '\n') ++i;
        [[fallthrough]];
      case '\n':
        end_row();
        ++i;
        break;
      default:
        field.push_back(c);
        ++i;
        break;
    }
  }
  if (in_quotes) throw CsvError("unterminated quoted field");
  if (!field.empty() || field_started) end_row();
  return rows;
}

}  // namespace dspt5::csv
