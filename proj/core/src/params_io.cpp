#include "gsn/params_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gsn {

using nlohmann::ordered_json;

std::string hex_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", value);
  return buf;
}

double parse_double(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw std::invalid_argument("malformed number '" + s + "'");
  return v;
}

namespace {

ordered_json encode_array(const std::vector<double>& values) {
  ordered_json arr = ordered_json::array();
  for (double v : values) arr.push_back(hex_double(v));
  return arr;
}

std::vector<double> decode_array(const ordered_json& arr, std::size_t expected,
                                 const std::string& what) {
  if (!arr.is_array() || arr.size() != expected) {
    throw std::runtime_error(what + ": expected " + std::to_string(expected) + " values");
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : arr) out.push_back(parse_double(v.get<std::string>()));
  return out;
}

ordered_json encode_mlp(const std::string& name, const MlpParams& net) {
  ordered_json j;
  j["name"] = name;
  j["in"] = net.in;
  j["hidden"] = net.hidden;
  j["w0_shape"] = {net.hidden, net.in};
  j["w0"] = encode_array(net.w0);
  j["b0"] = encode_array(net.b0);
  j["w1_shape"] = {1, net.hidden};
  j["w1"] = encode_array(net.w1);
  j["b1"] = hex_double(net.b1);
  return j;
}

MlpParams decode_mlp(const ordered_json& j, std::size_t in, std::size_t hidden) {
  const std::string name = j.at("name").get<std::string>();
  if (j.at("in").get<std::size_t>() != in || j.at("hidden").get<std::size_t>() != hidden) {
    throw std::runtime_error(name + ": unexpected network shape");
  }
  MlpParams net = MlpParams::zeros(in, hidden);
  net.w0 = decode_array(j.at("w0"), hidden * in, name + ".w0");
  net.b0 = decode_array(j.at("b0"), hidden, name + ".b0");
  net.w1 = decode_array(j.at("w1"), hidden, name + ".w1");
  net.b1 = parse_double(j.at("b1").get<std::string>());
  net.validate();
  return net;
}

}  // namespace

std::string params_to_json(const ParamFile& file) {
  ordered_json j;
  j["format"] = "gsn-force-params";
  j["version"] = kParamFormatVersion;
  j["model"] = to_string(kind_of(file.params));
  j["trained_k"] = file.trained_k;
  j["degree_features"] = file.features.raw_degree ? "raw" : "p80_normalized";
  j["param_count"] = param_count(file.params);

  if (std::holds_alternative<SprParams>(file.params)) {
    ordered_json v;
    const auto flat = flatten(file.params);
    const auto names = param_names(file.params);
    for (std::size_t i = 0; i < flat.size(); ++i) v[names[i]] = hex_double(flat[i]);
    j["spr"] = v;
    ordered_json dec;
    for (std::size_t i = 0; i < flat.size(); ++i) dec[names[i]] = flat[i];
    j["decimal"] = dec;
  } else {
    const auto& p = std::get<SprNnParams>(file.params);
    j["networks"] = ordered_json::array({encode_mlp("g_net", p.g_net),
                                         encode_mlp("f_neutral", p.f_neutral),
                                         encode_mlp("f_positive", p.f_positive),
                                         encode_mlp("f_negative", p.f_negative)});
  }
  return j.dump(2) + "\n";
}

ParamFile params_from_json(std::string_view text) {
  const auto j = ordered_json::parse(text);
  if (j.value("format", "") != "gsn-force-params") {
    throw std::runtime_error("not a gsn parameter file");
  }
  if (j.at("version").get<int>() != kParamFormatVersion) {
    throw std::runtime_error("unsupported parameter file version");
  }
  ParamFile file;
  file.trained_k = j.value("trained_k", std::size_t{0});
  file.features.raw_degree = j.value("degree_features", "p80_normalized") == "raw";
  const ModelKind kind = parse_model_kind(j.at("model").get<std::string>());
  if (kind == ModelKind::spr) {
    ForceParams p = SprParams{};
    const auto names = param_names(p);
    std::vector<double> flat;
    for (const auto& n : names) flat.push_back(parse_double(j.at("spr").at(n).get<std::string>()));
    for (double v : flat) {
      if (!std::isfinite(v)) throw std::runtime_error("SPR parameters must be finite");
    }
    unflatten(p, flat);
    file.params = p;
  } else {
    SprNnParams p;
    const auto& nets = j.at("networks");
    if (!nets.is_array() || nets.size() != 4) throw std::runtime_error("expected four networks");
    for (const auto& net : nets) {
      const auto name = net.at("name").get<std::string>();
      if (name == "g_net") p.g_net = decode_mlp(net, kNodeFeatureWidth, 3);
      else if (name == "f_neutral") p.f_neutral = decode_mlp(net, kEdgeFeatureWidth, 7);
      else if (name == "f_positive") p.f_positive = decode_mlp(net, kEdgeFeatureWidth, 7);
      else if (name == "f_negative") p.f_negative = decode_mlp(net, kEdgeFeatureWidth, 7);
      else throw std::runtime_error("unknown network '" + name + "'");
    }
    file.params = p;
  }
  return file;
}

void save_params(const std::filesystem::path& path, const ParamFile& file) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << params_to_json(file);
}

ParamFile load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return params_from_json(ss.str());
}

}  // namespace gsn
