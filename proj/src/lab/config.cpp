#include "nlslab/lab/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>
#include <json.hpp>

#include "nlslab/lab/initial.hpp"

namespace nlslab::lab {

std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::Simulate: return "simulate";
    case Kind::Sweep: return "sweep";
    case Kind::Bisect: return "bisect";
    case Kind::Galerkin: return "galerkin";
    case Kind::Manifold: return "manifold";
    case Kind::Selfsim: return "selfsim";
  }
  return "?";
}

namespace {

constexpr Kind kKinds[] = {Kind::Simulate, Kind::Sweep, Kind::Bisect, Kind::Galerkin, Kind::Manifold, Kind::Selfsim};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s) {
  const std::string t = trim(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != t.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

template <class V>
void fields(SimulateBlock& b, V&& v) {
  v("theta", b.theta);
  v("dt", b.dt);
  v("t_end", b.t_end);
  v("n_modes", b.n_modes);
  v("period", b.period);
  v("initial", b.initial);
  v("blowup_threshold", b.blowup_threshold);
  v("record_stride", b.record_stride);
  v("snapshot_stride", b.snapshot_stride);
  v("norm_stride", b.norm_stride);
  v("energy_modes", b.energy_modes);
  v("trapping_check", b.trapping_check);
}

template <class V>
void fields(SweepBlock& b, V&& v) {
  v("family", b.family);
  v("A", b.A);
  v("theta", b.theta);
  v("dt", b.dt);
  v("t_end", b.t_end);
  v("n_modes", b.n_modes);
  v("record_stride", b.record_stride);
  v("threads", b.threads);
}

template <class V>
void fields(BisectBlock& b, V&& v) {
  v("family", b.family);
  v("range", b.range);
  v("tol", b.tol);
  v("dt", b.dt);
  v("t_max", b.t_max);
  v("n_modes", b.n_modes);
  v("decay_threshold", b.decay_threshold);
}

template <class V>
void fields(GalerkinBlock& b, V&& v) {
  v("N", b.N);
  v("theta", b.theta);
  v("init", b.init);
  v("order", b.order);
  v("dt", b.dt);
  v("t_end", b.t_end);
  v("record_stride", b.record_stride);
}

template <class V>
void fields(ManifoldBlock& b, V&& v) {
  v("N", b.N);
  v("order", b.order);
  v("sigma", b.sigma);
  v("targets", b.targets);
}

template <class V>
void fields(SelfsimBlock& b, V&& v) {
  v("run", b.run);
  v("window", b.window);
  v("alpha", b.alpha);
  v("beta", b.beta);
  v("frame_window", b.frame_window);
  v("max_frames", b.max_frames);
  v("y_min", b.y_min);
  v("y_max", b.y_max);
  v("y_points", b.y_points);
}

template <class F>
void with_block(ExperimentConfig& c, F&& f) {
  switch (c.kind) {
    case Kind::Simulate: f(c.simulate); break;
    case Kind::Sweep: f(c.sweep); break;
    case Kind::Bisect: f(c.bisect); break;
    case Kind::Galerkin: f(c.galerkin); break;
    case Kind::Manifold: f(c.manifold); break;
    case Kind::Selfsim: f(c.selfsim); break;
  }
}

struct Reader {
  const YAML::Node& block;
  std::string prefix;
  std::vector<std::string>& issues;
  std::vector<std::string> seen;

  template <class T>
  void operator()(const char* key, T& ref) {
    seen.emplace_back(key);
    const YAML::Node n = block[key];
    if (!n) return;
    const std::string where = prefix + "." + key;
    if (!n.IsScalar()) {
      issues.push_back(where + ": expected a scalar");
      return;
    }
    const std::string text = n.Scalar();
    try {
      if constexpr (std::is_same_v<T, std::string>) {
        ref = text;
      } else if constexpr (std::is_same_v<T, bool>) {
        ref = n.as<bool>();
      } else if constexpr (std::is_same_v<T, int>) {
        const double d = parse_number(text);
        if (d != std::floor(d) || std::abs(d) > 2e9) throw std::invalid_argument("not an integer");
        ref = static_cast<int>(d);
      } else if (std::string_view(key) == "theta") {
        ref = parse_angle(text);
      } else {
        ref = parse_number(text);
      }
    } catch (const std::exception&) {
      issues.push_back(where + ": cannot parse '" + text + "'");
    }
  }
};

struct JsonWriter {
  nlohmann::ordered_json& out;
  template <class T>
  void operator()(const char* key, T& ref) {
    out[key] = ref;
  }
};

// shortest decimal that reads back to the same double
std::string shortest(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

struct YamlWriter {
  YAML::Emitter& out;
  template <class T>
  void operator()(const char* key, T& ref) {
    out << YAML::Key << key << YAML::Value;
    if constexpr (std::is_same_v<T, double>)
      out << shortest(ref);
    else if constexpr (std::is_same_v<T, std::string>)
      out << YAML::DoubleQuoted << ref;
    else
      out << ref;
  }
};

}  // namespace

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  if (a.kind != b.kind || a.name != b.name || a.output_dir != b.output_dir) return false;
  switch (a.kind) {
    case Kind::Simulate: return a.simulate == b.simulate;
    case Kind::Sweep: return a.sweep == b.sweep;
    case Kind::Bisect: return a.bisect == b.bisect;
    case Kind::Galerkin: return a.galerkin == b.galerkin;
    case Kind::Manifold: return a.manifold == b.manifold;
    case Kind::Selfsim: return a.selfsim == b.selfsim;
  }
  return false;
}

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& i : issues) msg += "\n  " + i;
        return msg;
      }()),
      issues_(std::move(issues)) {}

double parse_angle(const std::string& s_in) {
  std::string s = trim(s_in);
  const auto p = s.find("pi");
  if (p == std::string::npos) return parse_number(s);
  double coef = 1.0;
  std::string head = trim(s.substr(0, p));
  if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
  if (head == "-")
    coef = -1.0;
  else if (head == "+" || head.empty())
    coef = 1.0;
  else
    coef = parse_number(head);
  std::string tail = trim(s.substr(p + 2));
  double den = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw std::invalid_argument("bad angle '" + s_in + "'");
    den = parse_number(tail.substr(1));
    if (den == 0.0) throw std::invalid_argument("bad angle '" + s_in + "'");
  }
  return coef * std::numbers::pi / den;
}

std::pair<double, double> parse_range(const std::string& s) {
  const auto c = s.find(':', 1);
  if (c == std::string::npos) throw std::invalid_argument("expected lo:hi, got '" + s + "'");
  return {parse_number(s.substr(0, c)), parse_number(s.substr(c + 1))};
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= s.size(); ++i)
    if (i == s.size() || (s[i] == ':' && i > start)) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  if (parts.size() == 1) return {parse_number(parts[0])};
  if (parts.size() != 3) throw std::invalid_argument("expected lo:hi:step, got '" + s + "'");
  const double lo = parse_number(parts[0]), hi = parse_number(parts[1]), step = parse_number(parts[2]);
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("bad grid '" + s + "'");
  std::vector<double> out;
  const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(parse_number(item));
  return out;
}

ExperimentConfig config_from_node(const YAML::Node& node) {
  std::vector<std::string> issues;
  ExperimentConfig cfg;
  if (!node || !node.IsMap()) throw ConfigError({"<root>: expected a mapping with a 'kind' entry"});
  const std::string kind = node["kind"] ? node["kind"].as<std::string>() : "";
  bool found = false;
  for (const Kind k : kKinds)
    if (to_string(k) == kind) {
      cfg.kind = k;
      found = true;
    }
  if (!found) issues.push_back("kind: must be one of simulate, sweep, bisect, galerkin, manifold, selfsim");
  if (node["name"]) cfg.name = node["name"].as<std::string>();
  if (node["output_dir"]) cfg.output_dir = node["output_dir"].as<std::string>();

  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (key == "kind" || key == "name" || key == "output_dir") continue;
    if (!found || key != to_string(cfg.kind)) issues.push_back(key + ": unexpected entry");
  }
  if (found) {
    const YAML::Node block = node[std::string(to_string(cfg.kind))];
    if (block && !block.IsMap()) {
      issues.push_back(std::string(to_string(cfg.kind)) + ": expected a mapping");
    } else if (block) {
      with_block(cfg, [&](auto& b) {
        Reader r{block, std::string(to_string(cfg.kind)), issues, {}};
        fields(b, r);
        for (const auto& kv : block) {
          const std::string key = kv.first.as<std::string>();
          if (std::find(r.seen.begin(), r.seen.end(), key) == r.seen.end())
            issues.push_back(r.prefix + "." + key + ": unknown field");
        }
      });
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

ExperimentConfig config_from_text(const std::string& text) {
  YAML::Node node;
  try {
    node = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError({std::string("<root>: ") + e.what()});
  }
  if (node.IsMap() && !node["kind"] && node["config"]) node = node["config"];
  return config_from_node(node);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read " + path.string()});
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_text(ss.str());
}

std::string config_to_yaml(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(to_string(cfg.kind));
  out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << cfg.name;
  out << YAML::Key << "output_dir" << YAML::Value << YAML::DoubleQuoted << cfg.output_dir;
  out << YAML::Key << std::string(to_string(cfg.kind)) << YAML::Value << YAML::BeginMap;
  with_block(cfg, [&](auto& b) { fields(b, YamlWriter{out}); });
  out << YAML::EndMap << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string config_to_json(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(cfg.kind));
  j["name"] = cfg.name;
  j["output_dir"] = cfg.output_dir;
  nlohmann::ordered_json block;
  with_block(cfg, [&](auto& b) { fields(b, JsonWriter{block}); });
  j[std::string(to_string(cfg.kind))] = block;
  return j.dump(2);
}

ExperimentConfig apply_overrides(const ExperimentConfig& cfg, const std::vector<std::string>& sets) {
  if (sets.empty()) return cfg;
  YAML::Node node = YAML::Load(config_to_yaml(cfg));
  std::vector<std::string> issues;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      issues.push_back(s + ": expected key=value");
      continue;
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      node[key] = value;
    } else {
      const std::string block = key.substr(0, dot);
      if (!node[block]) node[block] = YAML::Node(YAML::NodeType::Map);
      node[block][key.substr(dot + 1)] = value;
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return config_from_node(node);
}

std::filesystem::path resolve_output(const ExperimentConfig& cfg) {
  std::filesystem::path p = cfg.output_dir.empty() ? std::filesystem::path(cfg.name.empty() ? "run" : cfg.name)
                                                   : std::filesystem::path(cfg.output_dir);
  if (p.is_absolute()) return p;
  const char* root = std::getenv("NLSLAB_OUTPUT_ROOT");
  return std::filesystem::path(root && *root ? root : "runs") / p;
}

void validate(const ExperimentConfig& cfg) {
  std::vector<std::string> issues;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) issues.push_back(what);
  };
  const double half_pi = std::numbers::pi / 2 + 1e-12;
  auto check_parse = [&](const std::string& where, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      issues.push_back(where + ": " + e.what());
    }
  };
  switch (cfg.kind) {
    case Kind::Simulate: {
      const auto& b = cfg.simulate;
      need(std::abs(b.theta) <= half_pi, "simulate.theta: must lie in [-pi/2, pi/2]");
      need(b.dt > 0, "simulate.dt: must be > 0");
      need(b.t_end > 0, "simulate.t_end: must be > 0");
      need(b.n_modes >= 1, "simulate.n_modes: must be >= 1");
      need(b.period > 0, "simulate.period: must be > 0");
      need(b.blowup_threshold > 0, "simulate.blowup_threshold: must be > 0");
      need(b.record_stride >= 1, "simulate.record_stride: must be >= 1");
      need(b.snapshot_stride >= 0, "simulate.snapshot_stride: must be >= 0");
      need(b.norm_stride >= 1, "simulate.norm_stride: must be >= 1");
      need(b.energy_modes >= 0, "simulate.energy_modes: must be >= 0");
      if (b.n_modes >= 1 && b.period > 0)
        check_parse("simulate.initial", [&] { parse_initial(b.initial, b.n_modes, b.period); });
      break;
    }
    case Kind::Sweep: {
      const auto& b = cfg.sweep;
      need(std::abs(b.theta) <= half_pi, "sweep.theta: must lie in [-pi/2, pi/2]");
      need(b.dt > 0, "sweep.dt: must be > 0");
      need(b.t_end > 0, "sweep.t_end: must be > 0");
      need(b.n_modes >= 1, "sweep.n_modes: must be >= 1");
      need(b.record_stride >= 1, "sweep.record_stride: must be >= 1");
      need(b.threads >= 0, "sweep.threads: must be >= 0");
      check_parse("sweep.A", [&] { parse_grid(b.A); });
      if (b.n_modes >= 1) check_parse("sweep.family", [&] { parse_initial(b.family, b.n_modes, 1.0); });
      break;
    }
    case Kind::Bisect: {
      const auto& b = cfg.bisect;
      need(b.tol > 0, "bisect.tol: must be > 0");
      need(b.dt > 0, "bisect.dt: must be > 0");
      need(b.t_max > 0, "bisect.t_max: must be > 0");
      need(b.n_modes >= 1, "bisect.n_modes: must be >= 1");
      need(b.decay_threshold > 0, "bisect.decay_threshold: must be > 0");
      check_parse("bisect.range", [&] {
        const auto [lo, hi] = parse_range(b.range);
        if (!(lo < hi)) throw std::invalid_argument("need lo < hi");
      });
      if (b.n_modes >= 1) check_parse("bisect.family", [&] { parse_initial(b.family, b.n_modes, 1.0); });
      break;
    }
    case Kind::Galerkin: {
      const auto& b = cfg.galerkin;
      need(b.N >= 1, "galerkin.N: must be >= 1");
      need(b.dt > 0, "galerkin.dt: must be > 0");
      need(b.t_end > 0, "galerkin.t_end: must be > 0");
      need(b.record_stride >= 1, "galerkin.record_stride: must be >= 1");
      need(b.order >= 1, "galerkin.order: must be >= 1");
      need(std::abs(b.theta) <= half_pi, "galerkin.theta: must lie in [-pi/2, pi/2]");
      check_parse("galerkin.init", [&] {
        const auto c = b.init.find(':');
        if (c == std::string::npos) throw std::invalid_argument("expected values:, sigma: or targets:");
        const std::string head = b.init.substr(0, c);
        const auto vals = parse_list(b.init.substr(c + 1));
        const std::size_t want = head == "values" ? static_cast<std::size_t>(b.N + 1) : static_cast<std::size_t>(b.N);
        if (head != "values" && head != "sigma" && head != "targets")
          throw std::invalid_argument("unknown init kind '" + head + "'");
        if (vals.size() != want) throw std::invalid_argument("expected " + std::to_string(want) + " numbers");
      });
      break;
    }
    case Kind::Manifold: {
      const auto& b = cfg.manifold;
      need(b.N >= 1, "manifold.N: must be >= 1");
      need(b.order >= 1, "manifold.order: must be >= 1");
      if (!b.sigma.empty())
        check_parse("manifold.sigma", [&] {
          if (parse_list(b.sigma).size() != static_cast<std::size_t>(b.N))
            throw std::invalid_argument("expected " + std::to_string(b.N) + " numbers");
        });
      if (!b.targets.empty())
        check_parse("manifold.targets", [&] {
          if (parse_list(b.targets).size() != static_cast<std::size_t>(b.N))
            throw std::invalid_argument("expected " + std::to_string(b.N) + " numbers");
        });
      break;
    }
    case Kind::Selfsim: {
      const auto& b = cfg.selfsim;
      need(!b.run.empty(), "selfsim.run: required");
      check_parse("selfsim.window", [&] { parse_range(b.window); });
      if (!b.frame_window.empty()) check_parse("selfsim.frame_window", [&] { parse_range(b.frame_window); });
      need(b.max_frames >= 0, "selfsim.max_frames: must be >= 0");
      need(b.y_points >= 4, "selfsim.y_points: must be >= 4");
      need(b.y_min < b.y_max, "selfsim.y_min: must be below y_max");
      need(b.alpha >= 0 && b.beta >= 0, "selfsim.alpha/beta: must be >= 0");
      break;
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

}  // namespace nlslab::lab
