#pragma once

#include <cstdint>
#include <iosfwd>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace hfanova {

/// Shortest decimal form that round-trips exactly; identical on every run.
std::string format_number(double value);

namespace detail {

inline void csv_cell(std::ostream& os, std::string_view s) { os << s; }
inline void csv_cell(std::ostream& os, const char* s) { os << s; }
inline void csv_cell(std::ostream& os, const std::string& s) { os << s; }
inline void csv_cell(std::ostream& os, bool b) { os << (b ? "true" : "false"); }

template <class T>
  requires std::is_arithmetic_v<T>
void csv_cell(std::ostream& os, T v) {
  if constexpr (std::is_floating_point_v<T>) {
    os << format_number(static_cast<double>(v));
  } else {
    os << v;
  }
}

}  // namespace detail

template <class First, class... Rest>
void csv_row(std::ostream& os, const First& first, const Rest&... rest) {
  detail::csv_cell(os, first);
  ((os << ',', detail::csv_cell(os, rest)), ...);
  os << '\n';
}

/// "# key=value ..." provenance line written above the column header.
void csv_comment(std::ostream& os, std::string_view text);

/// Splits comma-separated records, skipping blank lines and '#' comments.
std::vector<std::vector<std::string>> read_csv(std::istream& is);

/// Strict numeric parse of one cell; throws ConfigError with the cell text.
double parse_double(std::string_view cell);
long long parse_integer(std::string_view cell);

/// True when every cell of the record parses as a number.
bool is_numeric_record(const std::vector<std::string>& record);

}  // namespace hfanova
