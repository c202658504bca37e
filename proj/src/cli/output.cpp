#include "coinpulse/cli/output.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "coinpulse/error.hpp"

namespace coinpulse {

namespace {

bool needs_quotes(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

void append_field(std::string& out, std::string_view field) {
  if (!needs_quotes(field)) {
    out += field;
    return;
  }
  out += '"';
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string render_csv(const CsvTable& table) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      append_field(out, fields[i]);
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    any = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw InputError("csv: unterminated quoted field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

std::string format_fixed(double x, int decimals) {
  if (!std::isfinite(x)) return format_double(x);
  std::string s = fmt::format("{:.{}f}", x, decimals);
  // Avoid "-0.000000" so equal matrices render identically.
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 computation failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_all(path)); }

OutputWriter::OutputWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(fmt::format("cannot create output directory '{}': {}", dir_.string(), ec.message()));
}

void OutputWriter::write_file(const std::string& name, const std::string& bytes, Schema schema) {
  const auto target = dir_ / name;
  const auto tmp = dir_ / (name + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", tmp.string()));
    out << bytes;
    if (!out.flush()) throw Error(fmt::format("write failed for '{}'", tmp.string()));
  }
  std::filesystem::rename(tmp, target);
  schemas_[name] = std::move(schema);
  digests_[name] = sha256_hex(bytes);
}

void OutputWriter::write_csv(const std::string& name, const CsvTable& table) {
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.header.size()) {
      throw Error(fmt::format("{}: row {} has {} fields, header has {}", name, r + 1, table.rows[r].size(),
                              table.header.size()));
    }
  }
  write_file(name, render_csv(table), Schema{Schema::Kind::csv, table.header, table.rows.size()});
}

void OutputWriter::write_json(const std::string& name, const nlohmann::json& value) {
  write_file(name, value.dump(2) + "\n", Schema{Schema::Kind::json, {}, 0});
}

void OutputWriter::write_lines(const std::string& name, const std::vector<std::string>& lines) {
  std::string bytes;
  for (const auto& l : lines) {
    if (l.empty() || l.find('\n') != std::string::npos) throw Error(fmt::format("{}: invalid line '{}'", name, l));
    bytes += l;
    bytes += '\n';
  }
  write_file(name, bytes, Schema{Schema::Kind::lines, {}, lines.size()});
}

void OutputWriter::remove(const std::string& name) const {
  std::error_code ec;
  std::filesystem::remove(dir_ / name, ec);
}

void OutputWriter::validate() const {
  for (const auto& [name, schema] : schemas_) {
    const std::string bytes = read_all(dir_ / name);
    if (sha256_hex(bytes) != digests_.at(name)) throw Error(fmt::format("{}: contents changed after writing", name));
    switch (schema.kind) {
      case Schema::Kind::csv: {
        const auto rows = parse_csv(bytes);
        if (rows.empty() || rows.front() != schema.header) throw Error(fmt::format("{}: header mismatch", name));
        if (rows.size() != schema.rows + 1) {
          throw Error(fmt::format("{}: expected {} data rows, found {}", name, schema.rows, rows.size() - 1));
        }
        for (std::size_t r = 1; r < rows.size(); ++r) {
          if (rows[r].size() != schema.header.size()) {
            throw Error(fmt::format("{}: line {} has {} fields, expected {}", name, r + 1, rows[r].size(),
                                    schema.header.size()));
          }
        }
        break;
      }
      case Schema::Kind::json:
        if (!nlohmann::json::accept(bytes)) throw Error(fmt::format("{}: not valid JSON", name));
        break;
      case Schema::Kind::lines: {
        std::size_t n = 0;
        for (const char c : bytes) n += c == '\n';
        if (n != schema.rows) throw Error(fmt::format("{}: expected {} lines, found {}", name, schema.rows, n));
        break;
      }
    }
  }
}

}  // namespace coinpulse
