#include "rankaudit/io/csv.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "rankaudit/error.hpp"

namespace rankaudit::io {

long CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<long>(i);
  }
  return -1;
}

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kMalformedCsv, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> record_lines;
  std::vector<std::string> record;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  bool any = false;  // current record has content or a separator

  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    // Blank lines are skipped.
    if (any) {
      records.push_back(std::move(record));
      record_lines.push_back(line);
    }
    record.clear();
    any = false;
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c == '"' && field.empty()) {
      const std::size_t start_line = line;
      bool closed = false;
      ++i;
      while (i < text.size()) {
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        if (text[i] == '\n') ++line;
        field.push_back(text[i++]);
      }
      if (!closed) malformed(start_line, "unterminated quoted field");
      any = true;
      if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
        malformed(line, "text after closing quote");
      }
      continue;
    }
    if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
      ++i;
    } else if (c == '\r' || c == '\n') {
      end_record();
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      ++i;
      ++line;
    } else {
      if (c == '"') malformed(line, "quote inside unquoted field");
      field.push_back(c);
      any = true;
      ++i;
    }
  }
  if (any || !field.empty()) end_record();

  if (records.empty()) throw Error(ErrorCode::kMalformedCsv, "missing header row");
  CsvTable table;
  table.header = std::move(records[0]);
  std::set<std::string> seen;
  for (const auto& name : table.header) {
    if (name.empty()) malformed(record_lines[0], "empty column name");
    if (!seen.insert(name).second) malformed(record_lines[0], "duplicate column '" + name + "'");
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      malformed(record_lines[r], "expected " + std::to_string(table.header.size()) + " fields, found " +
                                     std::to_string(records[r].size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path)); }

std::string format_csv(const CsvTable& table) {
  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out.push_back(',');
      const std::string& s = cells[i];
      if (s.find_first_of(",\"\r\n") == std::string::npos) {
        out += s;
        continue;
      }
      out.push_back('"');
      for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
      }
      out.push_back('"');
    }
    out.push_back('\n');
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "cannot read '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << content;
  if (!out.flush()) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
}

}  // namespace rankaudit::io
