#pragma once

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace nlslab::lab {

struct Columns {
  std::vector<std::string> names;
  std::vector<std::vector<double>> data;  // one vector per column

  /// Throws std::out_of_range naming the missing column.
  const std::vector<double>& operator[](const std::string& name) const;
  bool has(const std::string& name) const;
};

/// Numeric CSV with a header row, values at 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);

 private:
  std::FILE* file_;
  std::size_t width_;
  struct Closer {
    void operator()(std::FILE* f) const { std::fclose(f); }
  };
  std::unique_ptr<std::FILE, Closer> owner_;
};

Columns read_columns(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace nlslab::lab
