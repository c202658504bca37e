#include "coinpulse/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "coinpulse/error.hpp"

namespace coinpulse {

std::string_view to_string(TomlValue::Kind kind) {
  switch (kind) {
    case TomlValue::Kind::string: return "string";
    case TomlValue::Kind::integer: return "integer";
    case TomlValue::Kind::floating: return "float";
    case TomlValue::Kind::boolean: return "boolean";
    case TomlValue::Kind::array: return "array";
  }
  return "?";
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  TomlValue value() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a value");
    const char c = text_[pos_];
    if (c == '"') return string_value(basic_string());
    if (c == '\'') return string_value(literal_string());
    if (c == '[') return array();
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      TomlValue v;
      v.kind = TomlValue::Kind::boolean;
      v.boolean = true;
      return v;
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      TomlValue v;
      v.kind = TomlValue::Kind::boolean;
      return v;
    }
    return number();
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  [[noreturn]] void fail(std::string_view what) const {
    throw InputError(fmt::format("toml: line {}: {}", line_, what));
  }

 private:
  static TomlValue string_value(std::string s) {
    TomlValue v;
    v.kind = TomlValue::Kind::string;
    v.str = std::move(s);
    return v;
  }

  std::string basic_string() {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("unterminated escape");
        const char e = text_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case 'r': c = '\r'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(fmt::format("unsupported escape '\\{}'", e));
        }
      }
      out.push_back(c);
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  std::string literal_string() {
    ++pos_;
    const auto end = text_.find('\'', pos_);
    if (end == std::string_view::npos) fail("unterminated string");
    std::string out(text_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return out;
  }

  TomlValue array() {
    ++pos_;
    TomlValue v;
    v.kind = TomlValue::Kind::array;
    skip_ws();
    while (pos_ < text_.size() && text_[pos_] != ']') {
      v.array.push_back(value());
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        skip_ws();
      } else if (pos_ < text_.size() && text_[pos_] != ']') {
        fail("expected ',' or ']' in array");
      }
    }
    if (pos_ >= text_.size()) fail("unterminated array");
    ++pos_;
    return v;
  }

  TomlValue number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '+' ||
                                   text_[pos_] == '-' || text_[pos_] == '.' || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string raw;
    for (const char c : text_.substr(start, pos_ - start)) {
      if (c != '_') raw.push_back(c);
    }
    if (raw.empty()) fail("expected a value");
    if (raw.front() == '+') raw.erase(raw.begin());
    TomlValue v;
    const bool is_float = raw.find_first_of(".eE") != std::string::npos || raw == "inf" || raw == "nan";
    const char* b = raw.data();
    const char* e = raw.data() + raw.size();
    if (is_float) {
      v.kind = TomlValue::Kind::floating;
      const auto [p, ec] = std::from_chars(b, e, v.floating);
      if (ec != std::errc{} || p != e) fail(fmt::format("invalid number '{}'", raw));
    } else {
      v.kind = TomlValue::Kind::integer;
      const auto [p, ec] = std::from_chars(b, e, v.integer);
      if (ec != std::errc{} || p != e) fail(fmt::format("invalid value '{}'", raw));
    }
    return v;
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (const char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.') return false;
  }
  return true;
}

// Counts unbalanced '[' outside strings and comments.
int bracket_depth(std::string_view s) {
  int depth = 0;
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote != 0) {
      if (c == '\\' && quote == '"') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '"' || c == '\'') quote = c;
    else if (c == '#') break;
    else if (c == '[') ++depth;
    else if (c == ']') --depth;
  }
  return depth;
}

}  // namespace

TomlDocument TomlDocument::parse(std::string_view text) {
  TomlDocument doc;
  std::string table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    ++line_no;
    const std::size_t start_line = line_no;
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;

    const auto stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;

    if (stripped.front() == '[') {
      const auto close = stripped.find(']');
      if (close == std::string_view::npos) throw InputError(fmt::format("toml: line {}: unterminated table header", line_no));
      const auto name = trim(stripped.substr(1, close - 1));
      if (!valid_key(name)) throw InputError(fmt::format("toml: line {}: invalid table name", line_no));
      const auto rest = trim(stripped.substr(close + 1));
      if (!rest.empty() && rest.front() != '#') throw InputError(fmt::format("toml: line {}: trailing characters", line_no));
      table = std::string(name);
      continue;
    }

    const auto eq = stripped.find('=');
    if (eq == std::string_view::npos) throw InputError(fmt::format("toml: line {}: expected key = value", line_no));
    auto key = trim(stripped.substr(0, eq));
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"') key = key.substr(1, key.size() - 2);
    if (!valid_key(key)) throw InputError(fmt::format("toml: line {}: invalid key '{}'", line_no, key));

    // Arrays may continue over several lines.
    std::string value_text(stripped.substr(eq + 1));
    while (bracket_depth(value_text) > 0 && pos < text.size()) {
      eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      ++line_no;
      value_text.push_back('\n');
      value_text.append(text.substr(pos, eol - pos));
      pos = eol + 1;
    }

    Parser parser(value_text, start_line);
    TomlValue v = parser.value();
    if (!parser.at_end()) parser.fail("trailing characters after value");
    const std::string full = table.empty() ? std::string(key) : table + "." + std::string(key);
    if (!doc.values_.emplace(full, std::move(v)).second) {
      throw InputError(fmt::format("toml: line {}: duplicate key '{}'", start_line, full));
    }
  }
  return doc;
}

TomlDocument TomlDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

namespace {

[[noreturn]] void type_error(const std::string& key, std::string_view expected, TomlValue::Kind got) {
  throw InputError(fmt::format("{}: expected {}, got {}", key, expected, to_string(got)));
}

}  // namespace

std::optional<std::string> TomlDocument::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (it->second.kind != TomlValue::Kind::string) type_error(key, "string", it->second.kind);
  return it->second.str;
}

std::optional<std::int64_t> TomlDocument::get_int(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (it->second.kind != TomlValue::Kind::integer) type_error(key, "integer", it->second.kind);
  return it->second.integer;
}

std::optional<double> TomlDocument::get_double(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (it->second.kind == TomlValue::Kind::integer) return static_cast<double>(it->second.integer);
  if (it->second.kind != TomlValue::Kind::floating) type_error(key, "number", it->second.kind);
  return it->second.floating;
}

std::optional<bool> TomlDocument::get_bool(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (it->second.kind != TomlValue::Kind::boolean) type_error(key, "boolean", it->second.kind);
  return it->second.boolean;
}

std::optional<std::vector<std::string>> TomlDocument::get_string_array(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (it->second.kind != TomlValue::Kind::array) type_error(key, "array of strings", it->second.kind);
  std::vector<std::string> out;
  for (const auto& v : it->second.array) {
    if (v.kind != TomlValue::Kind::string) type_error(key, "array of strings", v.kind);
    out.push_back(v.str);
  }
  return out;
}

std::optional<std::vector<double>> TomlDocument::get_double_array(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (it->second.kind != TomlValue::Kind::array) type_error(key, "array of numbers", it->second.kind);
  std::vector<double> out;
  for (const auto& v : it->second.array) {
    if (v.kind == TomlValue::Kind::integer) out.push_back(static_cast<double>(v.integer));
    else if (v.kind == TomlValue::Kind::floating) out.push_back(v.floating);
    else type_error(key, "array of numbers", v.kind);
  }
  return out;
}

}  // namespace coinpulse
