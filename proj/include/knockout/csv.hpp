#ifndef KNOCKOUT_CSV_HPP
#define KNOCKOUT_CSV_HPP

#include <knockout/error.hpp>

#include <charconv>
#include <cstdint>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace knockout::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers; ///< source line of each row, for messages
};

/// Comma-separated records with optional double-quoted fields ("" escapes a
/// quote). Accepts LF or CRLF line ends and skips blank lines. Lines
/// starting with '#' before the header are metadata comments and are skipped.
inline Table parse(std::string_view text) {
    Table table;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false, field_started = false, record_has_content = false;
    std::size_t line = 1, record_line = 1;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        if (record_has_content || !record.empty()) {
            end_field();
            if (table.header.empty() && table.rows.empty()) {
                table.header = std::move(record);
            } else {
                table.rows.push_back(std::move(record));
                table.line_numbers.push_back(record_line);
            }
        }
        record.clear();
        record_has_content = false;
    };

    for (std::size_t k = 0; k < text.size(); ++k) {
        const char c = text[k];
        if (in_quotes) {
            if (c == '"') {
                if (k + 1 < text.size() && text[k + 1] == '"') {
                    field.push_back('"');
                    ++k;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '#' && table.header.empty() && record.empty() && !record_has_content) {
            while (k < text.size() && text[k] != '\n') ++k;
            record_line = ++line;
            continue;
        }
        switch (c) {
        case '"':
            if (field_started)
                throw InvalidArgument("csv line " + std::to_string(line) + ": stray quote inside unquoted field");
            in_quotes = field_started = record_has_content = true;
            break;
        case ',':
            end_field();
            record_has_content = true;
            break;
        case '\r':
            break;
        case '\n':
            end_record();
            record_line = ++line;
            break;
        default:
            field.push_back(c);
            field_started = record_has_content = true;
        }
    }
    if (in_quotes) throw InvalidArgument("csv: unterminated quoted field starting near line " + std::to_string(record_line));
    end_record();
    return table;
}

inline Table read(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse(text);
}

/// Rejects any header other than `expected`, and rows of the wrong width.
inline void require_header(const Table& t, const std::vector<std::string>& expected, std::string_view file_kind) {
    if (t.header != expected) {
        std::string want, got;
        for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
        for (const auto& h : t.header) got += (got.empty() ? "" : ",") + h;
        throw InvalidArgument(std::string(file_kind) + ": expected header '" + want + "' but found '" + got + "'");
    }
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        if (t.rows[r].size() != expected.size())
            throw InvalidArgument(std::string(file_kind) + " line " + std::to_string(t.line_numbers[r]) + ": expected " +
                                  std::to_string(expected.size()) + " fields, found " +
                                  std::to_string(t.rows[r].size()));
}

/// Base-10 integer; the sign is accepted so callers can reject negatives with a clear message.
inline std::int64_t to_integer(std::string_view s, std::string_view context) {
    std::int64_t v = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v, 10);
    if (ec != std::errc{} || ptr != last || s.empty())
        throw InvalidArgument(std::string(context) + ": '" + std::string(s) + "' is not a base-10 integer");
    return v;
}

inline double to_real(std::string_view s, std::string_view context) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw InvalidArgument(std::string(context) + ": '" + std::string(s) + "' is not a number");
    return v;
}

/// Always-quoted text field.
inline std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

/// Shortest decimal that parses back to the same double.
inline std::string real(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline void write_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
    out << '\n';
}

} // namespace knockout::csv

#endif // KNOCKOUT_CSV_HPP
