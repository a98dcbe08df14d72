#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "monotone/report_io.hpp"

namespace monotone {

/// TOML run configuration with dotted-path access. Every value read, including
/// defaults, is recorded so the run manifest can echo exactly what was used.
class Config {
 public:
  Config();
  ~Config();
  Config(const Config&);
  Config& operator=(const Config&);

  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& source = "<string>");

  /// Applies "a.b.c=value"; value is read as a TOML value, falling back to a bare string.
  void set_override(const std::string& assignment);

  const std::string& source() const { return source_; }
  bool has(const std::string& path) const;

  double get_double(const std::string& path) const;
  double get_double(const std::string& path, double fallback) const;
  int get_int(const std::string& path) const;
  int get_int(const std::string& path, int fallback) const;
  bool get_bool(const std::string& path, bool fallback) const;
  std::string get_string(const std::string& path) const;
  std::string get_string(const std::string& path, const std::string& fallback) const;
  std::vector<double> get_doubles(const std::string& path) const;
  std::vector<double> get_doubles(const std::string& path, const std::vector<double>& fallback) const;
  std::vector<std::string> get_strings(const std::string& path, const std::vector<std::string>& fallback) const;
  /// All numeric entries of a table (empty when absent).
  std::map<std::string, double> get_number_table(const std::string& path) const;

  /// Leaf keys present in the file but never read.
  std::vector<std::string> unused_keys() const;
  /// Throws ParseError listing unused keys.
  void require_all_used() const;

  /// Values as read, keyed by path, in first-read order.
  const Json& resolved() const { return resolved_; }
  /// The configuration after overrides.
  Json echo() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string source_;
  mutable std::set<std::string> used_;
  mutable Json resolved_ = Json::object();

  void record(const std::string& path, const Json& value) const;
};

}  // namespace monotone
