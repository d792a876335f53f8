#include "core/spec_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace cascade {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) {
    throw ValidationError(std::string("field '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

int require_int(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number_integer()) {
    throw ValidationError(std::string("field '") + key + "' must be an integer");
  }
  return j.at(key).get<int>();
}

std::vector<double> require_number_array(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  if (!j.at(key).is_array()) {
    throw ValidationError(std::string("field '") + key + "' must be an array");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) {
      throw ValidationError(std::string("field '") + key + "' must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

LoadedSpec parse_spec_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("spec must be a JSON object");

  const int sites = require_int(j, "M");
  const double gamma = require_number(j, "gamma");
  const double loss = j.contains("loss") ? require_number(j, "loss") : 0.0;

  const bool has_elements = j.contains("elements");
  const bool has_regular = j.contains("regular");
  if (has_elements == has_regular) {
    throw ValidationError("spec must contain exactly one of 'elements' or 'regular'");
  }

  if (has_regular) {
    const json& r = j.at("regular");
    if (!r.is_object()) throw ValidationError("'regular' must be an object");
    RegularSpec spec;
    spec.sites = sites;
    spec.gamma = gamma;
    spec.loss = loss;
    spec.taus = require_number_array(r, "taus");
    spec.phis = require_number_array(r, "phis");
    NetworkSpec net = expand_regular(spec);  // validates
    return LoadedSpec{std::move(net), std::move(spec)};
  }

  const json& els = j.at("elements");
  if (!els.is_array()) throw ValidationError("'elements' must be an array");
  NetworkSpec net(sites, gamma, loss);
  std::set<std::pair<int, int>> seen;
  for (const auto& e : els) {
    if (!e.is_object()) throw ValidationError("each element must be an object");
    const int m = require_int(e, "m");
    const int mp = require_int(e, "mp");
    const std::string pair = "(" + std::to_string(m) + "," + std::to_string(mp) + ")";
    if (!seen.insert({m, mp}).second) {
      throw ValidationError("element " + pair + ": duplicate entry");
    }
    const double t = require_number(e, "t");
    const double phi = e.contains("phi") ? require_number(e, "phi") : 0.0;
    if (!(t >= 0.0 && t <= 1.0)) {
      throw ValidationError("element " + pair + ": transmissivity " + std::to_string(t) +
                            " outside [0,1]");
    }
    net.set_element(m, mp, BeamSplitter(t, phi));  // index errors name the pair
  }
  return LoadedSpec{std::move(net), std::nullopt};
}

LoadedSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open spec file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec_json(ss.str());
}

std::string regular_spec_to_json(const RegularSpec& spec) {
  validate_regular(spec);
  json j;
  j["M"] = spec.sites;
  j["gamma"] = spec.gamma;
  j["loss"] = spec.loss;
  j["regular"] = {{"taus", spec.taus}, {"phis", spec.phis}};
  return j.dump(2) + "\n";
}

std::string network_spec_to_json(const NetworkSpec& net) {
  json els = json::array();
  for (int m = 1; m <= net.sites(); ++m) {
    for (int mp = m + 1; mp <= net.sites(); ++mp) {
      const BeamSplitter& bs = net.element(m, mp);
      els.push_back({{"m", m}, {"mp", mp}, {"t", bs.transmissivity}, {"phi", bs.phase}});
    }
  }
  json j;
  j["M"] = net.sites();
  j["gamma"] = net.gamma();
  j["loss"] = net.loss();
  j["elements"] = std::move(els);
  return j.dump(2) + "\n";
}

}  // namespace cascade
