#include "nlslab/lab/series_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nlslab/field_io.hpp"

namespace nlslab::lab {

const std::vector<double>& Columns::operator[](const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("csv: no column '" + name + "'");
  return data[static_cast<std::size_t>(it - names.begin())];
}

bool Columns::has(const std::string& name) const { return std::find(names.begin(), names.end(), name) != names.end(); }

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : file_(std::fopen(path.c_str(), "wb")), width_(header.size()), owner_(file_) {
  if (!file_) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) std::fprintf(file_, i ? ",%s" : "%s", header[i].c_str());
  std::fputc('\n', file_);
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw std::invalid_argument("csv: row width differs from header");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) std::fputc(',', file_);
    std::fputs(format_double(values[i]).c_str(), file_);
  }
  std::fputc('\n', file_);
}

Columns read_columns(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Columns c;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  {
    std::stringstream ss(line);
    std::string name;
    while (std::getline(ss, name, ',')) c.names.push_back(name);
  }
  c.data.resize(c.names.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col >= c.names.size()) throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": too many cells");
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": bad number");
      c.data[col++].push_back(v);
    }
    if (col != c.names.size()) throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": short row");
  }
  return c;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace nlslab::lab
