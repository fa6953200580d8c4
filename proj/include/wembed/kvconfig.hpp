#pragma once

#include <map>
#include <optional>
#include <string>

namespace wembed {

/// Flat key=value settings. Blank lines and lines starting with '#' are
/// ignored; surrounding whitespace is trimmed from keys and values. Keys may
/// be spelled with '-' or '_' interchangeably and are stored with '_'.
class KeyValueConfig {
public:
  static KeyValueConfig parse(const std::string& text, const std::string& source = "<config>");
  static KeyValueConfig load(const std::string& path);

  std::optional<std::string> get(const std::string& key) const;
  bool contains(const std::string& key) const { return get(key).has_value(); }
  void set(const std::string& key, std::string value);

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  static std::string normalize_key(std::string key);

private:
  std::map<std::string, std::string> entries_;
};

bool parse_bool(const std::string& value);

} // namespace wembed
