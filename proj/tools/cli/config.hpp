#pragma once

// Flat experiment configuration: one `key = value` per line, dotted keys,
// `#` starts a comment.  Every accepted key is declared in a KeyTable with
// its type and default; anything else is rejected.

#include "gfront/types.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace gfront::cli {

/// Usage or configuration problem (exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

enum class ValueType { real, integer, u64, boolean, text, choice, real_list, vec2, vec2_list };

struct KeySpec {
  std::string name;
  ValueType type = ValueType::real;
  std::string default_value;  ///< empty: no default (optional, resolved by the command)
  std::vector<std::string> choices;
  std::string doc;
};

class KeyTable {
 public:
  void add(KeySpec spec);
  const KeySpec* find(const std::string& name) const;
  const std::vector<KeySpec>& keys() const { return keys_; }

 private:
  std::vector<KeySpec> keys_;
};

/// Raw key/value pairs in file order, plus the original text.
struct ConfigFile {
  std::string text;
  std::vector<std::pair<std::string, std::string>> entries;
};

ConfigFile parse_config_text(const std::string& text);
ConfigFile read_config_file(const std::string& path);

/// Validated values with defaults filled in.
class Config {
 public:
  Config() = default;
  /// Throws ConfigError naming the first unknown key, duplicate key, or malformed value.
  Config(const ConfigFile& file, const KeyTable& table);

  bool has(const std::string& key) const;
  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::vector<double> real_list(const std::string& key) const;
  Vec2 vec2(const std::string& key) const;
  std::vector<Vec2> vec2_list(const std::string& key) const;

  void set(const std::string& key, const std::string& value);

  /// Every key with a value, sorted, as `key = value` lines.
  std::string resolved_text() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  const std::string& raw(const std::string& key) const;
  std::shared_ptr<const KeyTable> table_;
  std::map<std::string, std::string> values_;
};

/// Checks `value` against the declared type; throws ConfigError.
void check_value(const KeySpec& spec, const std::string& value);

double parse_real(const std::string& s, const std::string& key);

}  // namespace gfront::cli
