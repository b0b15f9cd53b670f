#include "gnc/codespec.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "gnc/error.hpp"

namespace gnc {

using nlohmann::json;

namespace {

DegreeDistribution parse_degrees(const json& j) {
  std::map<unsigned, double> probs;
  for (auto it = j.begin(); it != j.end(); ++it) {
    unsigned deg = static_cast<unsigned>(std::stoul(it.key()));
    probs[deg] = it.value().get<double>();
  }
  return DegreeDistribution(probs);
}

}  // namespace

CodeSpec parse_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("spec: invalid JSON: ") + e.what());
  }
  try {
    CodeSpec s;
    s.g = j.at("g").get<unsigned>();
    s.n = j.at("n").get<unsigned>();
    s.q = j.at("q").get<unsigned>();
    s.R = j.at("R").get<double>();
    s.R_prime = j.at("R_prime").get<double>();
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "dense-check")
      s.mode = OuterMode::dense_check;
    else if (mode == "packet-level")
      s.mode = OuterMode::packet_level;
    else
      throw ParseError("spec: mode must be dense-check or packet-level");
    s.P = parse_degrees(j.at("P"));
    s.seed = j.value("seed", uint64_t{0});
    if (j.contains("x0")) s.x0 = j.at("x0").get<double>();
    if (j.contains("delta")) s.delta = j.at("delta").get<double>();
    if (j.contains("robust")) {
      RobustParams r;
      r.delta0 = j.at("robust").at("delta0").get<double>();
      r.Delta = j.at("robust").at("Delta").get<double>();
      s.robust = r;
    }
    s.dip_tolerance = j.value("dip_tolerance", 0.0);
    if (s.g == 0 || s.n == 0) throw ParseError("spec: g and n must be positive");
    if (s.q != 2 && s.q != 16 && s.q != 256)
      throw ParseError("spec: q must be 2, 16, or 256");
    if (!(s.R > 0) || s.R > 1) throw ParseError("spec: R out of (0,1]");
    if (!(s.R_prime > 0) || s.R_prime > 1)
      throw ParseError("spec: R_prime out of (0,1]");
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("spec: ") + e.what());
  }
}

CodeSpec load_spec(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("spec: cannot open " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string spec_to_json(const CodeSpec& spec) {
  json j;
  j["g"] = spec.g;
  j["n"] = spec.n;
  j["q"] = spec.q;
  j["R"] = spec.R;
  j["R_prime"] = spec.R_prime;
  j["mode"] =
      spec.mode == OuterMode::dense_check ? "dense-check" : "packet-level";
  json p = json::object();
  for (auto& [deg, prob] : spec.P.entries()) p[std::to_string(deg)] = prob;
  j["P"] = p;
  j["seed"] = spec.seed;
  if (spec.x0) j["x0"] = *spec.x0;
  if (spec.delta) j["delta"] = *spec.delta;
  if (spec.robust)
    j["robust"] = {{"delta0", spec.robust->delta0}, {"Delta", spec.robust->Delta}};
  if (spec.dip_tolerance > 0) j["dip_tolerance"] = spec.dip_tolerance;
  return j.dump(2) + "\n";
}

void save_spec(const CodeSpec& spec, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error("spec: cannot write " + file.string());
  out << spec_to_json(spec);
}

DEParams to_de_params(const CodeSpec& spec) {
  if (!spec.x0) throw ConfigError("spec: x0 required for analysis");
  DEParams p{spec.g, spec.R, spec.P, *spec.x0,
             spec.delta.value_or(1.0 - spec.R_prime), spec.robust};
  return p;
}

}  // namespace gnc
