#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gogap::csv {

// Minimal RFC-4180 reader/writer: quoted fields, doubled quotes, CRLF
// tolerant. Lines starting with '#' are schema/comment lines and are
// returned separately by read_file.

std::string escape_field(const std::string& field);
std::string join_row(const std::vector<std::string>& fields);

struct Table {
  std::vector<std::string> comments;          // leading '#' lines, verbatim
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

Table read_stream(std::istream& in);
Table read_file(const std::string& path);

std::vector<std::vector<std::string>> parse_rows(const std::string& text);

}  // namespace gogap::csv
