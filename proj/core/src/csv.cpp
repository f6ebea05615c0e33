#include "hfanova/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>

#include "hfanova/error.hpp"

namespace hfanova {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

void csv_comment(std::ostream& os, std::string_view text) { os << "# " << text << '\n'; }

std::vector<std::vector<std::string>> read_csv(std::istream& is) {
  std::vector<std::vector<std::string>> records;
  std::string line;
  while (std::getline(is, line)) {
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      cells.emplace_back(trim(view.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    records.push_back(std::move(cells));
  }
  return records;
}

double parse_double(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw ConfigError("not a number: '" + std::string(cell) + "'");
  }
  return value;
}

long long parse_integer(std::string_view cell) {
  cell = trim(cell);
  long long value = 0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw ConfigError("not an integer: '" + std::string(cell) + "'");
  }
  return value;
}

bool is_numeric_record(const std::vector<std::string>& record) {
  for (const auto& cell : record) {
    try {
      parse_double(cell);
    } catch (const ConfigError&) {
      return false;
    }
  }
  return true;
}

}  // namespace hfanova
