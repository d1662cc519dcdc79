#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qfactor {

// Flat "key = value" configuration, one pair per line. '#' starts a comment,
// blank lines are ignored, and a key may repeat (used for grid lists).
// Serialization preserves insertion order so emit(parse(text)) is stable.
class ConfigMap {
 public:
  static ConfigMap parse(std::string_view text);  // throws ConfigError

  std::string serialize() const;

  bool has(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;  // first occurrence
  std::vector<std::string> get_all(std::string_view key) const;
  const std::string& require(std::string_view key) const;  // throws ConfigError

  // Typed accessors; on a present-but-malformed value they throw ConfigError.
  long long get_int64(std::string_view key, long long fallback) const;
  int get_int(std::string_view key, int fallback) const;
  double get_double(std::string_view key, double fallback) const;
  std::uint64_t get_uint64(std::string_view key, std::uint64_t fallback) const;

  void add(std::string_view key, std::string_view value);
  void add_int64(std::string_view key, long long value);
  void add_double(std::string_view key, double value);

  const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

}  // namespace qfactor
