#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace parisian::cli {

/// 12 significant digits: fixed notation for |v| in [0.1, 10) or v = 0,
/// scientific otherwise, so that typical probabilities read naturally.
std::string format_number(double v);

/// Comma-separated rows with a header. Cells never contain commas or quotes.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  /// quantity,value,std_error with an empty std_error when absent.
  void quantity(const std::string& name, double value, std::optional<double> std_error = std::nullopt);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
};

/// Reads a table written by CsvWriter. Throws std::runtime_error with the
/// line number when a row's column count differs from the header's.
Table read_table(std::istream& in);

}  // namespace parisian::cli
