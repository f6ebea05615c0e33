#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace hfanova {

/// Flat key=value run configuration. INI sections become "section.key".
class Config {
 public:
  static Config parse(std::istream& is);
  /// Throws ConfigError when the file is missing or malformed.
  static Config load(const std::string& path);

  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_integer(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  bool contains(const std::string& key) const { return entries_.count(key) > 0; }

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return entries_; }

  /// Sorted "key=value" lines; the hash is taken over this text.
  std::string canonical() const;
  std::uint64_t hash() const;
  std::string hash_hex() const;

 private:
  std::map<std::string, std::string> entries_;
};

/// FNV-1a, 64 bit.
std::uint64_t fnv1a(const std::string& text);

}  // namespace hfanova
