#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rpm::csv {

using Row = std::vector<std::string>;

/// Quotes the field when it contains a delimiter, quote or line break.
std::string escape(std::string_view field);
/// Always-quoted variant used for free-text columns.
std::string quote(std::string_view field);

/// Joins already-escaped fields and terminates the line with `\n`.
std::string join(const std::vector<std::string>& escaped_fields);

/// RFC 4180 parser; accepts `\n` and `\r\n`. Throws FormatError on an
/// unterminated quoted field.
std::vector<Row> parse(std::string_view text);

} // namespace rpm::csv
