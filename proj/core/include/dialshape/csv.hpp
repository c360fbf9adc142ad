#pragma once

#include <string>
#include <vector>

namespace dialshape {

/// Minimal CSV writer. Every file gets exactly one header row. Fields
/// containing commas, quotes, or newlines are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::string to_string() const;
  void save(const std::string& path) const;

  /// Shortest decimal string that round-trips the double exactly.
  static std::string format(double v);
  static std::string format(int v);
  static std::string format(long long v);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable load_csv(const std::string& path);

}  // namespace dialshape
