#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coinpulse {

/// A value from the TOML subset used by config and lexicon files: strings,
/// integers, floats, booleans and (nested) arrays of those.
struct TomlValue {
  enum class Kind { string, integer, floating, boolean, array };
  Kind kind = Kind::string;
  std::string str;
  std::int64_t integer = 0;
  double floating = 0.0;
  bool boolean = false;
  std::vector<TomlValue> array;
};

std::string_view to_string(TomlValue::Kind kind);

/// Flat view of a document: table headers are folded into dotted keys, so
/// `[network]\ndamping = 0.85` is stored under "network.damping".
/// Inline tables, dates and multi-line strings are not supported.
class TomlDocument {
 public:
  static TomlDocument parse(std::string_view text);
  static TomlDocument load(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, TomlValue>& values() const { return values_; }

  // Accessors throw InputError naming the key when the type does not match.
  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<std::int64_t> get_int(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;
  std::optional<std::vector<std::string>> get_string_array(const std::string& key) const;
  std::optional<std::vector<double>> get_double_array(const std::string& key) const;

 private:
  std::map<std::string, TomlValue> values_;
};

}  // namespace coinpulse
