#include "latbv/config.hpp"

#include "latbv/util.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace latbv {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      std::string t = trim(cur);
      if (!t.empty()) out.push_back(t);
      cur.clear();
    } else {
      cur += c;
    }
  }
  std::string t = trim(cur);
  if (!t.empty()) out.push_back(t);
  return out;
}

}  // namespace

Rat parse_rat(const std::string& s) {
  std::string t = trim(s);
  if (t.empty()) fail(Err::ConfigInvalid, "empty rational");
  auto slash = t.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(t));
    Int num(t.substr(0, slash));
    Int den(t.substr(slash + 1));
    if (den == 0) fail(Err::ConfigInvalid, "zero denominator");
    return Rat(num, den);
  } catch (const std::exception&) {
    fail(Err::ConfigInvalid, "bad rational: " + t);
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        fail(Err::ConfigInvalid, "line " + std::to_string(lineno) + ": unterminated section");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos)
      fail(Err::ConfigInvalid, "line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    try {
      if (section == "model") {
        if (key == "name")
          cfg.model_name = val;
        else if (key == "nt")
          cfg.nt = std::stoi(val);
        else if (key == "nx")
          cfg.nx = std::stoi(val);
        else if (key == "dt")
          cfg.dt = parse_rat(val);
        else if (key == "dx")
          cfg.dx = parse_rat(val);
        else if (key == "xi")
          cfg.xi = parse_rat(val);
        else if (key == "mass")
          cfg.mass = parse_rat(val);
        else if (key == "g3")
          cfg.g3 = parse_rat(val);
        else if (key == "g4")
          cfg.g4 = parse_rat(val);
        else if (key == "current_seed")
          cfg.current_seed = std::stoull(val);
        else
          fail(Err::ConfigInvalid, "line " + std::to_string(lineno) + ": unknown model key " + key);
      } else if (section == "truncation") {
        if (key == "lambda_max")
          cfg.lambda_max = std::stoi(val);
        else if (key == "hbar_headroom")
          cfg.hbar_headroom = std::stoi(val);
        else
          fail(Err::ConfigInvalid,
               "line " + std::to_string(lineno) + ": unknown truncation key " + key);
      } else if (section == "run") {
        if (key == "margin")
          cfg.margin = std::stoi(val);
        else if (key == "ramp")
          cfg.ramp = std::stoi(val);
        else if (key == "seed")
          cfg.seed = std::stoull(val);
        else if (key == "suites")
          cfg.suites = split_list(val);
        else if (key == "report")
          cfg.report_path = val;
        else if (key == "format")
          cfg.format = val;
        else if (key == "dump_kernels")
          cfg.dump_kernels_dir = val;
        else
          fail(Err::ConfigInvalid, "line " + std::to_string(lineno) + ": unknown run key " + key);
      } else {
        fail(Err::ConfigInvalid, "line " + std::to_string(lineno) + ": unknown section " + section);
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(Err::ConfigInvalid, "line " + std::to_string(lineno) + ": bad value for " + key);
    }
  }
  if (cfg.format != "json" && cfg.format != "md")
    fail(Err::ConfigInvalid, "format must be json or md");
  if (cfg.lambda_max < 0 || cfg.lambda_max > 6)
    fail(Err::ConfigInvalid, "lambda_max out of supported range");
  if (cfg.nt - 2 * (cfg.margin + cfg.ramp) < 3)
    fail(Err::ConfigInvalid, "lattice too short for the requested margins");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Err::ConfigInvalid, "cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::map<std::string, std::string> RunConfig::echo() const {
  std::map<std::string, std::string> e;
  e["model.name"] = model_name;
  e["model.nt"] = std::to_string(nt);
  e["model.nx"] = std::to_string(nx);
  e["model.dt"] = rat_str(dt);
  e["model.dx"] = rat_str(dx);
  e["model.xi"] = rat_str(xi);
  e["model.mass"] = rat_str(mass);
  e["model.g3"] = rat_str(g3);
  e["model.g4"] = rat_str(g4);
  e["model.current_seed"] = std::to_string(current_seed);
  e["truncation.lambda_max"] = std::to_string(lambda_max);
  e["truncation.hbar_headroom"] = std::to_string(hbar_headroom);
  e["run.margin"] = std::to_string(margin);
  e["run.ramp"] = std::to_string(ramp);
  e["run.seed"] = std::to_string(seed);
  std::string s;
  for (const auto& name : suites) s += (s.empty() ? "" : ",") + name;
  e["run.suites"] = s;
  return e;
}

}  // namespace latbv
