#pragma once

#include <map>
#include <string>
#include <vector>

#include "latbv/rational.hpp"

namespace latbv {

struct CheckRecord {
  std::string id;      // suite.check
  std::string anchor;  // which identity this record verifies
  std::string status;  // PASS | FAIL | SKIPPED
  std::string defect = "0";  // exact rational defect norm
  std::string note;
  int lambda_max = 0;
  double wall_ms = 0.0;
};

struct Report {
  std::string timestamp;  // header only; excluded from determinism comparisons
  std::map<std::string, std::string> config_echo;
  std::vector<CheckRecord> records;

  int n_pass() const;
  int n_fail() const;
  int n_skip() const;

  void add(CheckRecord rec);
  bool all_ok() const { return n_fail() == 0; }
};

std::string render_json(const Report& r);
std::string render_markdown(const Report& r);

// parses the output of render_json back into a report (round-trip checked in
// tests); timestamp is restored as-is
Report parse_json_report(const std::string& text);

// body identical ignoring the timestamp header
bool reports_equal_modulo_time(const Report& a, const Report& b);

}  // namespace latbv
