#include "nlslab/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nlslab {

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path with_suffix(std::filesystem::path stem, const char* ext) {
  stem += ext;
  return stem;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string field_to_csv(const FourierField& f) {
  std::string out = "mode,re,im\n";
  for (int n = -f.n_modes(); n <= f.n_modes(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += format_double(f[n].real());
    out += ',';
    out += format_double(f[n].imag());
    out += '\n';
  }
  return out;
}

FourierField field_from_csv(const std::string& text, double period) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("mode,re,im", 0) != 0)
    throw std::runtime_error("field csv: missing header 'mode,re,im'");
  std::map<int, cplx> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int n = 0;
    double re = 0.0, im = 0.0;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf", &n, &re, &im) != 3)
      throw std::runtime_error("field csv: malformed row '" + line + "'");
    if (!rows.emplace(n, cplx{re, im}).second)
      throw std::runtime_error("field csv: duplicate mode " + std::to_string(n));
  }
  if (rows.empty() || rows.size() % 2 == 0) throw std::runtime_error("field csv: need 2N+1 modes");
  const int N = static_cast<int>(rows.size() / 2);
  FourierField f(N, period);
  for (const auto& [n, c] : rows) {
    if (n < -N || n > N) throw std::runtime_error("field csv: modes are not -N..N");
    f[n] = c;
  }
  return f;
}

void write_field(const std::filesystem::path& stem, const FourierField& f, double time) {
  {
    std::ofstream csv(with_suffix(stem, ".csv"), std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + stem.string() + ".csv");
    csv << field_to_csv(f);
  }
  nlohmann::ordered_json header;
  header["period"] = f.period();
  header["n_modes"] = f.n_modes();
  header["time"] = time;
  std::ofstream js(with_suffix(stem, ".json"), std::ios::binary);
  if (!js) throw std::runtime_error("cannot write " + stem.string() + ".json");
  js << header.dump(2) << '\n';
}

StampedField read_field(const std::filesystem::path& stem) {
  const auto header = nlohmann::json::parse(slurp(with_suffix(stem, ".json")));
  const double period = header.at("period").get<double>();
  FourierField f = field_from_csv(slurp(with_suffix(stem, ".csv")), period);
  if (f.n_modes() != header.at("n_modes").get<int>())
    throw std::runtime_error("field: header n_modes disagrees with csv body");
  return {std::move(f), header.value("time", 0.0)};
}

}  // namespace nlslab
