#pragma once

// Line-oriented configuration files:
//
//   # comment
//   [section]
//   key = value
//
// A value is a number, a double-quoted string (used for expressions), a
// boolean (true/false), a bare word, or a comma-separated list of those.

#include <filesystem>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lieavg::config {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct Scalar {
  enum class Kind { Number, String, Bool, Word };
  Kind kind = Kind::Number;
  double number = 0.0;
  bool flag = false;
  std::string text;  // String and Word payload

  bool operator==(const Scalar&) const = default;
};

struct Value {
  std::vector<Scalar> items;  // one item for scalars
  bool is_list = false;
  int line = 0;

  bool operator==(const Value& o) const { return items == o.items && is_list == o.is_list; }
};

struct Entry {
  std::string key;
  Value value;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;

  const Entry* find(std::string_view key) const;
};

class Config {
 public:
  static Config parse(std::string_view text, std::string source = "<config>");
  static Config load(const std::filesystem::path& path);

  const std::string& source() const { return source_; }
  const std::vector<Section>& sections() const { return sections_; }
  const Section* section(std::string_view name) const;
  bool has(std::string_view section, std::string_view key) const;

  /// Fails with the offending line on any key outside `allowed`, and on
  /// sections outside `sections`.
  void check_keys(std::string_view section, std::initializer_list<std::string_view> allowed) const;
  void check_sections(std::initializer_list<std::string_view> allowed) const;

  /// Typed accessors. Missing keys fail with the section's line.
  double number(std::string_view section, std::string_view key) const;
  double number_or(std::string_view section, std::string_view key, double fallback) const;
  long integer(std::string_view section, std::string_view key) const;
  long integer_or(std::string_view section, std::string_view key, long fallback) const;
  bool boolean_or(std::string_view section, std::string_view key, bool fallback) const;
  std::string string(std::string_view section, std::string_view key) const;
  std::string string_or(std::string_view section, std::string_view key, std::string fallback) const;
  std::vector<double> numbers(std::string_view section, std::string_view key) const;
  std::vector<std::string> strings(std::string_view section, std::string_view key) const;

  /// Line of a key (or of its section, or 0).
  int line_of(std::string_view section, std::string_view key) const;
  [[noreturn]] void fail(int line, const std::string& message) const;

  /// Canonical text; parse(to_string()) == *this.
  std::string to_string() const;
  bool operator==(const Config& o) const;

 private:
  const Value& require(std::string_view section, std::string_view key) const;

  std::string source_;
  std::vector<Section> sections_;
};

}  // namespace lieavg::config
