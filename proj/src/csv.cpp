#include "rpmsim/csv.h"

#include "rpmsim/errors.h"

namespace rpm::csv {

std::string quote(std::string_view field) {
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    return quote(field);
}

std::string join(const std::vector<std::string>& escaped_fields) {
    std::string line;
    for (std::size_t i = 0; i < escaped_fields.size(); ++i) {
        if (i) line += ',';
        line += escaped_fields[i];
    }
    line += '\n';
    return line;
}

std::vector<Row> parse(std::string_view text) {
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        switch (ch) {
        case '"':
            in_quotes = true;
            row_started = true;
            break;
        case ',':
            row.push_back(std::move(field));
            field.clear();
            row_started = true;
            break;
        case '\r':
            break;
        case '\n':
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
            row_started = false;
            break;
        default:
            field += ch;
            row_started = true;
        }
    }
    if (in_quotes) throw FormatError("unterminated quoted field");
    if (row_started || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace rpm::csv
