#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace lobbyml::csv {

// RFC 4180 quoting: fields containing a comma, quote or newline are quoted.
std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Splits one physical line. Quoted fields may not span lines.
std::vector<std::string> parse_line(std::string_view line);

// Shortest representation that round-trips to the same double.
std::string format_double(double value);

// Writes text to path, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace lobbyml::csv
