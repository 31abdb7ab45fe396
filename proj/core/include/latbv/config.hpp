#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latbv/rational.hpp"

namespace latbv {

// Flat sectioned key=value configuration for a verification run.
struct RunConfig {
  // [model]
  std::string model_name = "em";
  int nt = 10;
  int nx = 4;
  Rat dt = 1;
  Rat dx = 1;
  Rat xi = 1;
  Rat mass = 0;
  Rat g3 = 0;
  Rat g4 = 1;
  std::uint64_t current_seed = 7;

  // [truncation]
  int lambda_max = 2;
  int hbar_headroom = 2;

  // [run]
  int margin = 2;
  int ramp = 0;
  std::uint64_t seed = 42;
  std::vector<std::string> suites;
  std::string report_path;
  std::string format = "json";  // json | md
  std::string dump_kernels_dir;

  std::map<std::string, std::string> echo() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

Rat parse_rat(const std::string& s);

}  // namespace latbv
