// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dspt5::csv {

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// RFC-4180 writer: fields containing comma, quote, CR or LF are quoted,
/// quotes doubled; rows end with CRLF.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Parse a whole CSV document. Accepts LF or CRLF row endings; a trailing
/// newline does not produce an empty row. Unbalanced quotes raise CsvError.
std::vector<std::vector<std::string>> parse(std::string_view content);

}  // namespace dspt5::csv
