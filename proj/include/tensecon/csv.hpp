#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tensecon::csv {

struct Row {
  std::size_t line;  // 1-based line on which the record starts
  std::vector<std::string> fields;
};

/// RFC 4180 reader: comma separated, double-quote quoting with "" escapes,
/// LF or CRLF endings. A leading UTF-8 byte-order mark is skipped and blank
/// lines are dropped. Throws ValidationError on an unterminated quote.
std::vector<Row> read(std::string_view text);

}  // namespace tensecon::csv
