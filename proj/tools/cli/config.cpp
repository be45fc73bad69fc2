#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace gfront::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  return std::all_of(k.begin(), k.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; });
}

}  // namespace

double parse_real(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  if (t == "inf") return kInf;
  if (t == "-inf") return -kInf;
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw ConfigError("key '" + key + "': '" + s + "' is not a number");
  return v;
}

namespace {

long parse_integer(const std::string& s, const std::string& key) {
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw ConfigError("key '" + key + "': '" + s + "' is not an integer");
  return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw ConfigError("key '" + key + "': '" + s + "' is not an unsigned 64-bit integer");
  return v;
}

Vec2 parse_vec2(const std::string& s, const std::string& key) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw ConfigError("key '" + key + "': expected two comma-separated numbers, got '" + s + "'");
  return {parse_real(parts[0], key), parse_real(parts[1], key)};
}

}  // namespace

void KeyTable::add(KeySpec spec) {
  if (find(spec.name)) throw Error("KeyTable: duplicate key " + spec.name);
  if (!spec.default_value.empty()) check_value(spec, spec.default_value);
  keys_.push_back(std::move(spec));
}

const KeySpec* KeyTable::find(const std::string& name) const {
  for (const auto& k : keys_)
    if (k.name == name) return &k;
  return nullptr;
}

void check_value(const KeySpec& spec, const std::string& value) {
  const std::string& key = spec.name;
  switch (spec.type) {
    case ValueType::real: parse_real(value, key); break;
    case ValueType::integer: parse_integer(value, key); break;
    case ValueType::u64: parse_u64(value, key); break;
    case ValueType::boolean:
      if (value != "true" && value != "false") throw ConfigError("key '" + key + "': expected true or false");
      break;
    case ValueType::text: break;
    case ValueType::choice:
      if (std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
        std::string all;
        for (const auto& c : spec.choices) all += (all.empty() ? "" : "|") + c;
        throw ConfigError("key '" + key + "': '" + value + "' is not one of " + all);
      }
      break;
    case ValueType::real_list:
      for (const auto& p : split(value, ',')) parse_real(p, key);
      break;
    case ValueType::vec2: parse_vec2(value, key); break;
    case ValueType::vec2_list:
      for (const auto& p : split(value, ';')) parse_vec2(p, key);
      break;
  }
}

ConfigFile parse_config_text(const std::string& text) {
  ConfigFile f;
  f.text = text;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError("line " + std::to_string(lineno) + ": malformed key '" + key + "'");
    f.entries.emplace_back(key, value);
  }
  return f;
}

ConfigFile read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

Config::Config(const ConfigFile& file, const KeyTable& table) : table_(std::make_shared<const KeyTable>(table)) {
  for (const auto& spec : table.keys())
    if (!spec.default_value.empty()) values_[spec.name] = spec.default_value;
  std::map<std::string, bool> seen;
  for (const auto& [key, value] : file.entries) {
    const KeySpec* spec = table.find(key);
    if (!spec) throw ConfigError("unknown key '" + key + "'");
    if (seen[key]) throw ConfigError("duplicate key '" + key + "'");
    seen[key] = true;
    check_value(*spec, value);
    values_[key] = value;
  }
}

void Config::set(const std::string& key, const std::string& value) {
  const KeySpec* spec = table_ ? table_->find(key) : nullptr;
  if (!spec) throw ConfigError("unknown key '" + key + "'");
  check_value(*spec, value);
  values_[key] = value;
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

const std::string& Config::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing value for key '" + key + "'");
  return it->second;
}

double Config::real(const std::string& key) const { return parse_real(raw(key), key); }
long Config::integer(const std::string& key) const { return parse_integer(raw(key), key); }
std::uint64_t Config::u64(const std::string& key) const { return parse_u64(raw(key), key); }
bool Config::boolean(const std::string& key) const { return raw(key) == "true"; }
std::string Config::text(const std::string& key) const { return raw(key); }

std::vector<double> Config::real_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& p : split(raw(key), ',')) out.push_back(parse_real(p, key));
  return out;
}

Vec2 Config::vec2(const std::string& key) const { return parse_vec2(raw(key), key); }

std::vector<Vec2> Config::vec2_list(const std::string& key) const {
  std::vector<Vec2> out;
  for (const auto& p : split(raw(key), ';')) out.push_back(parse_vec2(p, key));
  return out;
}

std::string Config::resolved_text() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace gfront::cli
