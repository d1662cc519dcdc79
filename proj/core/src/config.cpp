#include "qfactor/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "qfactor/errors.hpp"

namespace qfactor {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

ConfigMap ConfigMap::parse(std::string_view text) {
  ConfigMap out;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(stripped).substr(0, eq));
    std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    out.items_.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::string ConfigMap::serialize() const {
  std::string out;
  for (const auto& [k, v] : items_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

bool ConfigMap::has(std::string_view key) const {
  for (const auto& [k, v] : items_) {
    if (k == key) return true;
  }
  return false;
}

std::optional<std::string> ConfigMap::get(std::string_view key) const {
  for (const auto& [k, v] : items_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::vector<std::string> ConfigMap::get_all(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : items_) {
    if (k == key) out.push_back(v);
  }
  return out;
}

const std::string& ConfigMap::require(std::string_view key) const {
  for (const auto& [k, v] : items_) {
    if (k == key) return v;
  }
  throw ConfigError("config: missing required key '" + std::string(key) + "'");
}

long long ConfigMap::get_int64(std::string_view key, long long fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size()) {
    throw ConfigError("config: key '" + std::string(key) + "' is not an integer: '" + *v + "'");
  }
  return out;
}

int ConfigMap::get_int(std::string_view key, int fallback) const {
  long long v = get_int64(key, fallback);
  if (v < -2147483647LL - 1 || v > 2147483647LL) {
    throw ConfigError("config: key '" + std::string(key) + "' out of int range");
  }
  return static_cast<int>(v);
}

double ConfigMap::get_double(std::string_view key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    double out = std::stod(*v, &used);
    while (used < v->size() && std::isspace(static_cast<unsigned char>((*v)[used]))) ++used;
    if (used != v->size()) throw std::invalid_argument("trailing junk");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + std::string(key) + "' is not a number: '" + *v + "'");
  }
}

std::uint64_t ConfigMap::get_uint64(std::string_view key, std::uint64_t fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size()) {
    throw ConfigError("config: key '" + std::string(key) + "' is not an unsigned integer: '" +
                      *v + "'");
  }
  return out;
}

void ConfigMap::add(std::string_view key, std::string_view value) {
  items_.emplace_back(std::string(key), std::string(value));
}

void ConfigMap::add_int64(std::string_view key, long long value) {
  add(key, std::to_string(value));
}

void ConfigMap::add_double(std::string_view key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  add(key, buf);
}

}  // namespace qfactor
