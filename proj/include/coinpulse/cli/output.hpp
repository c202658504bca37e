#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace coinpulse {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// RFC 4180 rendering; fields containing separators, quotes or newlines are
/// quoted. Lines end with '\n'.
std::string render_csv(const CsvTable& table);
/// Inverse of render_csv; throws InputError on unterminated quotes.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Shortest round-trip decimal; "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double x);
std::string format_fixed(double x, int decimals);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Writes report files into one directory and remembers, per file, the
/// schema it was written with so the whole set can be re-validated from disk.
class OutputWriter {
 public:
  explicit OutputWriter(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  void write_csv(const std::string& name, const CsvTable& table);
  void write_json(const std::string& name, const nlohmann::json& value);
  /// One item per line.
  void write_lines(const std::string& name, const std::vector<std::string>& lines);
  /// Deletes `name` if present (stale output from an earlier run).
  void remove(const std::string& name) const;

  /// Re-reads every written file and checks it against its schema; throws
  /// Error naming the file on mismatch.
  void validate() const;

  /// name -> sha256 of the bytes written, sorted by name.
  const std::map<std::string, std::string>& digests() const { return digests_; }

 private:
  struct Schema {
    enum class Kind { csv, json, lines } kind = Kind::csv;
    std::vector<std::string> header;
    std::size_t rows = 0;
  };

  void write_file(const std::string& name, const std::string& bytes, Schema schema);

  std::filesystem::path dir_;
  std::map<std::string, Schema> schemas_;
  std::map<std::string, std::string> digests_;
};

}  // namespace coinpulse
