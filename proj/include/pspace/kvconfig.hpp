#pragma once

#include <map>
#include <optional>
#include <string>

namespace pspace {

// Flat key-value configuration: one `key = value` per line, '#' comments.
// Secrets never live here; the API key comes from the environment.
class KvConfig {
 public:
  static KvConfig from_file(const std::string& path);     // throws std::runtime_error
  static KvConfig from_string(const std::string& text);

  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  void set(const std::string& key, const std::string& value);

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace pspace
