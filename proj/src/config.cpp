#include "lieavg/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "lieavg/numfmt.hpp"

namespace lieavg::config {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      return false;
    }
  }
  return true;
}

// Drops a trailing comment that is outside any quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string describe(const Scalar& s) {
  switch (s.kind) {
    case Scalar::Kind::Number: return "number";
    case Scalar::Kind::String: return "string";
    case Scalar::Kind::Bool: return "boolean";
    case Scalar::Kind::Word: return "word";
  }
  return "value";
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + message
                                  : source + ": " + message),
      line_(line) {}

const Entry* Section::find(std::string_view key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

Config Config::parse(std::string_view text, std::string source) {
  Config cfg;
  cfg.source_ = std::move(source);
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') cfg.fail(lineno, "unterminated section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!is_identifier(name)) cfg.fail(lineno, "invalid section name");
      if (cfg.section(name)) cfg.fail(lineno, "duplicate section [" + std::string(name) + "]");
      cfg.sections_.push_back({std::string(name), lineno, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) cfg.fail(lineno, "expected `key = value`");
    if (cfg.sections_.empty()) cfg.fail(lineno, "key outside of any [section]");
    const std::string_view key = trim(line.substr(0, eq));
    if (!is_identifier(key)) cfg.fail(lineno, "invalid key");
    Section& sec = cfg.sections_.back();
    if (sec.find(key)) cfg.fail(lineno, "duplicate key `" + std::string(key) + "`");

    Value value;
    value.line = lineno;
    std::string_view rest = trim(line.substr(eq + 1));
    if (rest.empty()) cfg.fail(lineno, "missing value for `" + std::string(key) + "`");
    while (true) {
      Scalar s;
      std::size_t consumed = 0;
      if (rest.front() == '"') {
        const auto close = rest.find('"', 1);
        if (close == std::string_view::npos) cfg.fail(lineno, "unterminated string");
        s.kind = Scalar::Kind::String;
        s.text = std::string(rest.substr(1, close - 1));
        consumed = close + 1;
      } else {
        const auto comma = rest.find(',');
        const std::string_view tok = trim(rest.substr(0, comma));
        consumed = comma == std::string_view::npos ? rest.size() : comma;
        if (tok.empty()) cfg.fail(lineno, "empty list item");
        if (tok == "true" || tok == "false") {
          s.kind = Scalar::Kind::Bool;
          s.flag = tok == "true";
        } else if (std::isdigit(static_cast<unsigned char>(tok.front())) || tok.front() == '-' ||
                   tok.front() == '+' || tok.front() == '.') {
          try {
            s.number = parse_double(std::string(tok.front() == '+' ? tok.substr(1) : tok));
          } catch (const std::invalid_argument&) {
            cfg.fail(lineno, "malformed number `" + std::string(tok) + "`");
          }
          s.kind = Scalar::Kind::Number;
        } else if (is_identifier(tok)) {
          s.kind = Scalar::Kind::Word;
          s.text = std::string(tok);
        } else {
          cfg.fail(lineno, "malformed value `" + std::string(tok) + "`");
        }
      }
      value.items.push_back(std::move(s));
      rest = trim(rest.substr(consumed));
      if (rest.empty()) break;
      if (rest.front() != ',') cfg.fail(lineno, "expected `,` between list items");
      value.is_list = true;
      rest = trim(rest.substr(1));
      if (rest.empty()) cfg.fail(lineno, "trailing comma");
    }
    sec.entries.push_back({std::string(key), std::move(value)});
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "cannot open configuration file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

const Section* Config::section(std::string_view name) const {
  for (const auto& s : sections_)
    if (s.name == name) return &s;
  return nullptr;
}

bool Config::has(std::string_view section, std::string_view key) const {
  const Section* s = this->section(section);
  return s && s->find(key);
}

void Config::fail(int line, const std::string& message) const {
  throw ConfigError(source_, line, message);
}

int Config::line_of(std::string_view section, std::string_view key) const {
  const Section* s = this->section(section);
  if (!s) return 0;
  const Entry* e = s->find(key);
  return e ? e->value.line : s->line;
}

void Config::check_sections(std::initializer_list<std::string_view> allowed) const {
  for (const auto& s : sections_) {
    bool ok = false;
    for (auto a : allowed) ok = ok || s.name == a;
    if (!ok) fail(s.line, "unknown section [" + s.name + "]");
  }
}

void Config::check_keys(std::string_view section,
                        std::initializer_list<std::string_view> allowed) const {
  const Section* s = this->section(section);
  if (!s) return;
  for (const auto& e : s->entries) {
    bool ok = false;
    for (auto a : allowed) ok = ok || e.key == a;
    if (!ok) fail(e.value.line, "unknown key `" + e.key + "` in [" + s->name + "]");
  }
}

const Value& Config::require(std::string_view section, std::string_view key) const {
  const Section* s = this->section(section);
  if (!s) {
    fail(0, "missing section [" + std::string(section) + "] (required for `" + std::string(key) + "`)");
  }
  const Entry* e = s->find(key);
  if (!e) fail(s->line, "missing required key `" + std::string(key) + "` in [" + s->name + "]");
  return e->value;
}

double Config::number(std::string_view section, std::string_view key) const {
  const Value& v = require(section, key);
  if (v.is_list || v.items[0].kind != Scalar::Kind::Number) {
    fail(v.line, "`" + std::string(key) + "` must be a number");
  }
  return v.items[0].number;
}

double Config::number_or(std::string_view section, std::string_view key, double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

long Config::integer(std::string_view section, std::string_view key) const {
  const double x = number(section, key);
  if (x != std::floor(x) || std::abs(x) > 1e15) {
    fail(line_of(section, key), "`" + std::string(key) + "` must be an integer");
  }
  return static_cast<long>(x);
}

long Config::integer_or(std::string_view section, std::string_view key, long fallback) const {
  return has(section, key) ? integer(section, key) : fallback;
}

bool Config::boolean_or(std::string_view section, std::string_view key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const Value& v = require(section, key);
  if (v.is_list || v.items[0].kind != Scalar::Kind::Bool) {
    fail(v.line, "`" + std::string(key) + "` must be true or false");
  }
  return v.items[0].flag;
}

std::string Config::string(std::string_view section, std::string_view key) const {
  const Value& v = require(section, key);
  const Scalar& s = v.items[0];
  if (v.is_list || (s.kind != Scalar::Kind::String && s.kind != Scalar::Kind::Word)) {
    fail(v.line, "`" + std::string(key) + "` must be a string");
  }
  return s.text;
}

std::string Config::string_or(std::string_view section, std::string_view key,
                              std::string fallback) const {
  return has(section, key) ? string(section, key) : fallback;
}

std::vector<double> Config::numbers(std::string_view section, std::string_view key) const {
  const Value& v = require(section, key);
  std::vector<double> out;
  for (const auto& s : v.items) {
    if (s.kind != Scalar::Kind::Number) {
      fail(v.line, "`" + std::string(key) + "` must list numbers, found a " + describe(s));
    }
    out.push_back(s.number);
  }
  return out;
}

std::vector<std::string> Config::strings(std::string_view section, std::string_view key) const {
  const Value& v = require(section, key);
  std::vector<std::string> out;
  for (const auto& s : v.items) {
    if (s.kind == Scalar::Kind::String || s.kind == Scalar::Kind::Word) {
      out.push_back(s.text);
    } else if (s.kind == Scalar::Kind::Number) {
      out.push_back(format_double(s.number));
    } else {
      fail(v.line, "`" + std::string(key) + "` must list strings");
    }
  }
  return out;
}

std::string Config::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    if (i) out += '\n';
    out += "[" + sections_[i].name + "]\n";
    for (const auto& e : sections_[i].entries) {
      out += e.key + " = ";
      for (std::size_t j = 0; j < e.value.items.size(); ++j) {
        if (j) out += ", ";
        const Scalar& s = e.value.items[j];
        switch (s.kind) {
          case Scalar::Kind::Number: out += format_double(s.number); break;
          case Scalar::Kind::String: out += '"' + s.text + '"'; break;
          case Scalar::Kind::Bool: out += s.flag ? "true" : "false"; break;
          case Scalar::Kind::Word: out += s.text; break;
        }
      }
      out += '\n';
    }
  }
  return out;
}

bool Config::operator==(const Config& o) const {
  if (sections_.size() != o.sections_.size()) return false;
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    const Section& a = sections_[i];
    const Section& b = o.sections_[i];
    if (a.name != b.name || a.entries.size() != b.entries.size()) return false;
    for (std::size_t j = 0; j < a.entries.size(); ++j) {
      if (a.entries[j].key != b.entries[j].key || !(a.entries[j].value == b.entries[j].value)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace lieavg::config
