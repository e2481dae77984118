#include "nlslab/lab/initial.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nlslab/field_io.hpp"

namespace nlslab::lab {

namespace {

std::vector<std::string> split_terms(const std::string& spec) {
  // a '+' followed by a letter starts a new term
  std::vector<std::string> terms;
  std::string cur;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const char c = spec[i];
    if (c == '+' && i + 1 < spec.size() && std::isalpha(static_cast<unsigned char>(spec[i + 1])) && !cur.empty()) {
      terms.push_back(cur);
      cur.clear();
      continue;
    }
    if (!std::isspace(static_cast<unsigned char>(c))) cur += c;
  }
  if (!cur.empty()) terms.push_back(cur);
  return terms;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double number(const std::string& s, const std::string& term) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument("initial data: bad number '" + s + "' in '" + term + "'");
  return v;
}

int mode_index(const std::string& s, const std::string& term, int n_modes) {
  const double v = number(s, term);
  const int m = static_cast<int>(v);
  if (static_cast<double>(m) != v) throw std::invalid_argument("initial data: mode must be an integer in '" + term + "'");
  if (m < -n_modes || m > n_modes)
    throw std::invalid_argument("initial data: mode " + std::to_string(m) + " exceeds the resolution in '" + term + "'");
  return m;
}

}  // namespace

FourierField parse_initial(const std::string& spec, int n_modes, double period) {
  if (n_modes < 1) throw std::invalid_argument("initial data: n_modes must be >= 1");
  FourierField u(n_modes, period);
  const auto terms = split_terms(spec);
  if (terms.empty()) throw std::invalid_argument("initial data: empty specification");
  for (const auto& term : terms) {
    const auto colon = term.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("initial data: term '" + term + "' lacks ':'");
    const std::string kind = term.substr(0, colon);
    const std::string rest = term.substr(colon + 1);
    if (kind == "file") {
      FourierField f = read_field(rest).field;
      if (f.period() != period) throw std::invalid_argument("initial data: period of '" + rest + "' differs");
      u += f.resized(n_modes);
      continue;
    }
    const auto args = split(rest, ':');
    if (kind == "const") {
      if (args.size() != 1) throw std::invalid_argument("initial data: const takes one value in '" + term + "'");
      u[0] += number(args[0], term);
    } else if (kind == "cos" || kind == "sin" || kind == "exp") {
      if (args.empty() || args.size() > 2)
        throw std::invalid_argument("initial data: expected " + kind + ":A[:m] in '" + term + "'");
      const double A = number(args[0], term);
      const int m = args.size() == 2 ? mode_index(args[1], term, n_modes) : mode_index("1", term, n_modes);
      if (kind == "exp") {
        u[m] += A;
      } else if (kind == "cos") {
        u[m] += A / 2;
        u[-m] += A / 2;
      } else {
        u[m] += cplx{0.0, -A / 2};
        u[-m] += cplx{0.0, A / 2};
      }
    } else if (kind == "mode") {
      if (args.size() < 2 || args.size() > 3)
        throw std::invalid_argument("initial data: expected mode:n:re[:im] in '" + term + "'");
      const int m = mode_index(args[0], term, n_modes);
      u[m] += cplx{number(args[1], term), args.size() == 3 ? number(args[2], term) : 0.0};
    } else {
      throw std::invalid_argument("initial data: unknown term kind '" + kind + "'");
    }
  }
  return u;
}

}  // namespace nlslab::lab
