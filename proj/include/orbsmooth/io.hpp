#pragma once

// Report output: RFC-4180 CSV, JSON, atomic file replacement and the flat
// key = value config format.

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace orbsmooth {

using Json = nlohmann::ordered_json;

// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double x);

using CsvCell = std::variant<double, long long, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;

  // Throws ValidationError if the row width differs from the header.
  void add_row(std::vector<CsvCell> row);
  // CRLF line endings; fields with comma, quote, CR or LF are quoted.
  std::string str() const;
};

// Fields of an RFC-4180 document; accepts CRLF or LF line endings.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

// Writes to a temporary file in the target directory, then renames.
void write_atomic(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const Json& j);
void write_csv(const std::filesystem::path& path, const CsvTable& t);

// "key = value" lines; '#' starts a comment; blank lines ignored. Throws
// ValidationError on malformed lines, duplicate keys, or keys outside
// `allowed`.
std::map<std::string, std::string> parse_config(const std::string& text,
                                                const std::vector<std::string>& allowed);
std::map<std::string, std::string> read_config(const std::filesystem::path& path,
                                               const std::vector<std::string>& allowed);

// Comma-separated numbers, e.g. "0.1,0.01".
std::vector<double> parse_number_list(const std::string& text);

}  // namespace orbsmooth
