#include "csv.hpp"

#include <stdexcept>
#include <system_error>

#include "config.hpp"
#include "jtm/errors.hpp"

namespace jtm::cli {

Cell::Cell(double v) : text_(format_double(v)) {}

std::string Cell::quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t k = 0; k < header.size(); ++k) out_ << (k ? "," : "") << header[k];
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<Cell> cells) {
  if (cells.size() != columns_) throw std::logic_error("csv row width does not match header");
  std::size_t k = 0;
  for (const Cell& c : cells) out_ << (k++ ? "," : "") << c.text();
  out_ << '\n';
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace jtm::cli
