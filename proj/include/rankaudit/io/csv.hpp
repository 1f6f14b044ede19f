#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rankaudit::io {

// A header row plus string cells; every row has the header's width.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, or -1.
  long column(const std::string& name) const;
};

// RFC 4180 style: comma separated, fields optionally double-quoted with ""
// as an escaped quote, CRLF or LF line ends. A UTF-8 byte order mark is
// skipped. Throws kMalformedCsv on ragged rows, an empty or duplicate header
// name, or an unterminated quote.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::string& path);

// Quotes a field only when it holds a comma, quote, CR or LF.
std::string format_csv(const CsvTable& table);

std::string read_file(const std::string& path);
// "-" writes to standard output.
void write_file(const std::string& path, const std::string& content);

}  // namespace rankaudit::io
