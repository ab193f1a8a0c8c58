#ifndef EDBN_DETAIL_TEXT_HPP
#define EDBN_DETAIL_TEXT_HPP

#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace edbn::detail {

inline std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

/// Splits one record, honouring double-quoted fields ("" escapes a quote).
/// Returns nullopt on an unterminated quote.
inline std::optional<std::vector<std::string>> split_record(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && trim(field).empty()) {
            field.clear();
            quoted = true;
            was_quoted = true;
        } else if (c == delim) {
            out.emplace_back(was_quoted ? field : std::string(trim(field)));
            field.clear();
            was_quoted = false;
        } else {
            if (!(was_quoted && (c == ' ' || c == '\t'))) field.push_back(c);
        }
    }
    if (quoted) return std::nullopt;
    out.emplace_back(was_quoted ? field : std::string(trim(field)));
    return out;
}

inline bool needs_quoting(std::string_view s, char delim) {
    if (s.empty()) return false;
    if (s.front() == ' ' || s.back() == ' ' || s.front() == '\t' || s.back() == '\t') return true;
    return s.find_first_of(std::string{delim, '"', '\n', '\r'}) != std::string_view::npos;
}

inline void write_field(std::ostream& os, std::string_view s, char delim) {
    if (!needs_quoting(s, delim)) {
        os << s;
        return;
    }
    os << '"';
    for (char c : s) {
        if (c == '"') os << '"';
        os << c;
    }
    os << '"';
}

inline void write_record(std::ostream& os, const std::vector<std::string>& fields, char delim) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << delim;
        write_field(os, fields[i], delim);
    }
    os << '\n';
}

/// Shortest round-trip decimal form; "-inf"/"inf"/"nan" for non-finite values.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

/// Fixed-precision form used in human-facing reports.
inline std::string format_fixed(double v, int precision) {
    if (!std::isfinite(v)) return format_double(v);
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
    return std::string(buf, end);
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

inline std::vector<std::string> split_list(std::string_view s, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) pos = s.size();
        auto item = trim(s.substr(start, pos - start));
        if (!item.empty()) out.emplace_back(item);
        start = pos + 1;
    }
    return out;
}

}  // namespace edbn::detail

#endif
