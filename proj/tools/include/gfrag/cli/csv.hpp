#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace gfrag::cli {

/// Comma-separated output, '.' decimal point, doubles with 17 significant digits.
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::string>;

  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<Cell>& cells);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

std::string format_double(double v);

}  // namespace gfrag::cli
