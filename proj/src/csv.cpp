#include "blockmax/csv.hpp"

#include <charconv>
#include <istream>
#include <system_error>

#include "blockmax/errors.hpp"

namespace blockmax::csv {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double x = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), x);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw IoError("not a number: '" + std::string(field) + "'");
  return x;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Document read_document(std::istream& is) {
  Document doc;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      std::string_view body = trim(view.substr(1));
      const std::size_t eq = body.find('=');
      if (eq != std::string_view::npos)
        doc.metadata[std::string(trim(body.substr(0, eq)))] = std::string(trim(body.substr(eq + 1)));
      continue;
    }
    auto fields = split(view);
    if (doc.header.empty()) {
      doc.header = std::move(fields);
      continue;
    }
    if (fields.size() != doc.header.size())
      throw IoError("line " + std::to_string(lineno) + ": expected " +
                    std::to_string(doc.header.size()) + " fields, got " +
                    std::to_string(fields.size()));
    doc.rows.push_back(std::move(fields));
  }
  if (is.bad()) throw IoError("read error");
  return doc;
}

}  // namespace blockmax::csv
