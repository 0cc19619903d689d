#ifndef ONTOCLUST_TEXT_HPP
#define ONTOCLUST_TEXT_HPP

#include <array>
#include <cmath>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "error.hpp"

namespace ontoclust::text {

inline bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

/// Splits text into lines, accepting LF and CRLF endings.
inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (nl == std::string_view::npos) {
            if (!line.empty()) {
                lines.push_back(line);
            }
            break;
        }
        lines.push_back(line);
        start = nl + 1;
    }
    return lines;
}

/// Splits one line of a tab-separated directive file. Double quotes may open
/// anywhere inside a field and protect tabs; `""` inside quotes is a literal quote.
/// Returns nullopt on an unterminated quote.
inline std::optional<std::vector<std::string>> split_tab_fields(std::string_view line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back() += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == '\t') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted) {
        return std::nullopt;
    }
    return fields;
}

/// Quotes a value for a tab-separated directive file when it would not survive
/// `split_tab_fields` + `trim` unchanged.
inline std::string quote_tab_value(std::string_view value) {
    const bool needs = value.find_first_of("\t\"") != std::string_view::npos;
    if (!needs) {
        return std::string(value);
    }
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out += c;
        }
    }
    out += '"';
    return out;
}

/// Parses a `key=value` field. Returns the value when the key matches.
inline std::optional<std::string_view> key_value(std::string_view field, std::string_view key) {
    const auto eq = field.find('=');
    if (eq == std::string_view::npos || trim(field.substr(0, eq)) != key) {
        return std::nullopt;
    }
    return field.substr(eq + 1);
}

using CsvRow = std::vector<std::string>;

/// RFC-4180 reader. Quoted fields may contain commas, doubled quotes and line
/// breaks. A trailing line break does not produce an empty record.
inline std::vector<CsvRow> parse_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    CsvRow row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t line = 1;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        if (!(row.size() == 1 && row.front().empty())) {
            rows.push_back(std::move(row));
        }
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started && !trim(field).empty()) {
                    throw DataError("csv line " + std::to_string(line) + ": stray quote inside unquoted field");
                }
                field.clear();
                quoted = true;
                field_started = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') {
                    break;
                }
                end_row();
                ++line;
                break;
            case '\n':
                end_row();
                ++line;
                break;
            default:
                field += c;
                field_started = true;
                break;
        }
    }
    if (quoted) {
        throw DataError("csv: unterminated quoted field");
    }
    if (field_started || !field.empty() || !row.empty()) {
        end_row();
    }
    return rows;
}

inline std::string csv_escape(std::string_view value) {
    const bool needs = value.find_first_of(",\"\r\n") != std::string_view::npos ||
                       (!value.empty() && (is_space(value.front()) || is_space(value.back())));
    if (!needs) {
        return std::string(value);
    }
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out += c;
        }
    }
    out += '"';
    return out;
}

/// Strict decimal parse: surrounding whitespace allowed, the whole token must be
/// consumed, and the result must be finite.
inline std::optional<double> parse_real(std::string_view token) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
        if (!token.empty() && (token.front() == '-' || token.front() == '+')) {
            return std::nullopt;
        }
    }
    if (token.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

inline std::optional<long long> parse_integer(std::string_view token) {
    token = trim(token);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
        return std::nullopt;
    }
    return value;
}

/// Shortest representation that parses back to the same double.
inline std::string format_real(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw InvariantError("cannot format real");
    }
    return std::string(buf.data(), ptr);
}

/// Fixed two-decimal rendering used for percentages and SSE tables.
inline std::string format_fixed2(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, 2);
    if (ec != std::errc{}) {
        throw InvariantError("cannot format real");
    }
    std::string out(buf.data(), ptr);
    if (out == "-0.00") {
        out = "0.00";
    }
    return out;
}

} // namespace ontoclust::text

#endif // ONTOCLUST_TEXT_HPP
