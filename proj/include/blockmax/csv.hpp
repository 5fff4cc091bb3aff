#pragma once

// Locale-independent number formatting and a minimal CSV record reader.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace blockmax::csv {

/// Shortest-round-trip decimal with '.', at most 17 significant digits.
std::string format_number(double x);

/// Parses a whole field as a double; throws IoError on failure.
double parse_number(std::string_view field);

std::vector<std::string> split(std::string_view line, char sep = ',');

/// A parsed CSV document: "# key=value" comment metadata, one header row and
/// the data rows as raw fields.
struct Document {
  std::map<std::string, std::string> metadata;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Reads a document whose first non-comment line is the header. Throws IoError
/// when a row's field count differs from the header's.
Document read_document(std::istream& is);

}  // namespace blockmax::csv
