#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mtssel::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers; // 1-based source line of each row
};

// Minimal RFC-4180 subset: comma separated, optional double quotes, LF newlines.
Table read(const std::filesystem::path& path);
std::vector<std::string> split_line(std::string_view line);
std::string quote(std::string_view field);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
// Strict parse of the whole field; returns false on junk or overflow.
bool parse_double(std::string_view text, double& out);
bool parse_size(std::string_view text, std::size_t& out);

} // namespace mtssel::csv
