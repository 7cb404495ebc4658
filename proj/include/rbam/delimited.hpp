#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rbam {

/// A header-addressed delimited table (CSV or TSV). Fields may be
/// double-quoted; quoted fields may contain the delimiter, newlines and
/// doubled quotes. A UTF-8 BOM on the first line is skipped.
class DelimitedTable {
public:
  static DelimitedTable parse(std::istream& in, char delimiter);
  static DelimitedTable read_file(const std::string& path);

  /// Tab for .tsv/.tab files, comma otherwise.
  static char delimiter_for(const std::string& path);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }

  std::optional<std::size_t> column(std::string_view name) const;

  /// Index of the first header name in `names` that exists, else throws
  /// LoadError listing the candidates.
  std::size_t require_column(std::initializer_list<std::string_view> names) const;

  const std::string& at(std::size_t row, std::size_t col) const;

  /// 1-based physical line number where `row` starts.
  std::size_t line_of(std::size_t row) const { return lines_[row]; }

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
  std::string source_;
};

}  // namespace rbam
