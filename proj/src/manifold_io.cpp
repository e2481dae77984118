#include "nlslab/manifold_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nlslab {

using nlohmann::ordered_json;

namespace {

ordered_json encode(const RationalComplex& c) {
  return ordered_json::array({RationalComplex::to_string(c.re()), RationalComplex::to_string(c.im())});
}

RationalComplex decode(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2) throw std::runtime_error("model json: coefficient must be [re, im]");
  return {RationalComplex::parse(j[0].get<std::string>()), RationalComplex::parse(j[1].get<std::string>())};
}

ordered_json encode_series(const std::map<MultiIndex, RationalVector, GradedLess>& series) {
  ordered_json out = ordered_json::array();
  for (const auto& [k, v] : series) {
    ordered_json coeffs = ordered_json::array();
    for (const auto& c : v) coeffs.push_back(encode(c));
    out.push_back({{"k", k}, {"coeffs", coeffs}});
  }
  return out;
}

std::map<MultiIndex, RationalVector, GradedLess> decode_series(const ordered_json& arr, std::size_t width) {
  std::map<MultiIndex, RationalVector, GradedLess> out;
  for (const auto& term : arr) {
    RationalVector v;
    for (const auto& c : term.at("coeffs")) v.push_back(decode(c));
    if (v.size() != width) throw std::runtime_error("model json: coefficient vector has wrong length");
    out.emplace(term.at("k").get<MultiIndex>(), std::move(v));
  }
  return out;
}

ordered_json encode_rationals(const std::vector<mpq_class>& v) {
  ordered_json out = ordered_json::array();
  for (const auto& q : v) out.push_back(RationalComplex::to_string(q));
  return out;
}

std::vector<mpq_class> decode_rationals(const ordered_json& arr) {
  std::vector<mpq_class> out;
  for (const auto& s : arr) out.push_back(RationalComplex::parse(s.get<std::string>()));
  return out;
}

}  // namespace

std::string model_to_json(const TaylorModel& model) {
  ordered_json j;
  j["dim_domain"] = model.dim_domain;
  j["dim_range"] = model.dim_range;
  j["order"] = model.order;
  j["eigenvalues"] = encode_rationals(model.eigenvalues);
  j["range_eigenvalues"] = encode_rationals(model.range_eigenvalues);
  j["tangent_component"] = model.tangent_component;
  j["W"] = encode_series(model.W);
  j["f"] = encode_series(model.f);
  return j.dump(1) + "\n";
}

TaylorModel model_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  TaylorModel m;
  m.dim_domain = j.at("dim_domain").get<int>();
  m.dim_range = j.at("dim_range").get<int>();
  m.order = j.at("order").get<int>();
  m.eigenvalues = decode_rationals(j.at("eigenvalues"));
  m.range_eigenvalues = decode_rationals(j.at("range_eigenvalues"));
  m.tangent_component = j.at("tangent_component").get<std::vector<int>>();
  if (static_cast<int>(m.eigenvalues.size()) != m.dim_domain ||
      static_cast<int>(m.tangent_component.size()) != m.dim_domain ||
      static_cast<int>(m.range_eigenvalues.size()) != m.dim_range)
    throw std::runtime_error("model json: header dimensions disagree");
  m.W = decode_series(j.at("W"), static_cast<std::size_t>(m.dim_range));
  m.f = decode_series(j.at("f"), static_cast<std::size_t>(m.dim_domain));
  return m;
}

void save_model(const std::filesystem::path& path, const TaylorModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << model_to_json(model);
}

TaylorModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

std::string resonances_to_json(const ResonanceSet& set) {
  ordered_json out = ordered_json::array();
  for (const auto& r : set) out.push_back({{"k", r.k}, {"target", r.target}});
  return out.dump(1) + "\n";
}

}  // namespace nlslab
