#ifndef JTM_CLI_CSV_HPP
#define JTM_CLI_CSV_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace jtm::cli {

/// One CSV cell. Doubles are written with 17 significant digits.
class Cell {
 public:
  Cell(double v);
  Cell(int v) : text_(std::to_string(v)) {}
  Cell(unsigned v) : text_(std::to_string(v)) {}
  Cell(long v) : text_(std::to_string(v)) {}
  Cell(unsigned long v) : text_(std::to_string(v)) {}
  Cell(unsigned long long v) : text_(std::to_string(v)) {}
  Cell(const char* s) : text_(quote(s)) {}
  Cell(const std::string& s) : text_(quote(s)) {}

  const std::string& text() const { return text_; }

 private:
  static std::string quote(const std::string& s);
  std::string text_;
};

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(std::initializer_list<Cell> cells);
  std::size_t columns() const { return columns_; }

 private:
  std::ostream& out_;
  std::size_t columns_;
};

/// Opens a file for writing, creating missing parent directories; throws
/// IoError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace jtm::cli

#endif
