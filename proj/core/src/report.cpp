#include "latbv/report.hpp"

#include <json.hpp>

#include <sstream>

namespace latbv {

using nlohmann::json;
using nlohmann::ordered_json;

int Report::n_pass() const {
  int n = 0;
  for (const auto& r : records) n += r.status == "PASS";
  return n;
}
int Report::n_fail() const {
  int n = 0;
  for (const auto& r : records) n += r.status == "FAIL";
  return n;
}
int Report::n_skip() const {
  int n = 0;
  for (const auto& r : records) n += r.status == "SKIPPED";
  return n;
}

void Report::add(CheckRecord rec) { records.push_back(std::move(rec)); }

std::string render_json(const Report& r) {
  ordered_json j;
  j["timestamp"] = r.timestamp;
  j["config"] = ordered_json::object();
  for (const auto& [k, v] : r.config_echo) j["config"][k] = v;
  j["records"] = ordered_json::array();
  for (const auto& rec : r.records) {
    ordered_json e;
    e["id"] = rec.id;
    e["anchor"] = rec.anchor;
    e["status"] = rec.status;
    e["defect"] = rec.defect;
    e["note"] = rec.note;
    e["lambda_max"] = rec.lambda_max;
    j["records"].push_back(e);
  }
  j["summary"] = {{"pass", r.n_pass()}, {"fail", r.n_fail()}, {"skipped", r.n_skip()}};
  return j.dump(2) + "\n";
}

std::string render_markdown(const Report& r) {
  std::ostringstream os;
  os << "# verification report\n\n";
  os << "generated: " << r.timestamp << "\n\n";
  if (!r.config_echo.empty()) {
    os << "## config\n\n";
    for (const auto& [k, v] : r.config_echo) os << "- " << k << " = " << v << "\n";
    os << "\n";
  }
  os << "## checks\n\n";
  os << "| id | status | defect | identity |\n";
  os << "|---|---|---|---|\n";
  for (const auto& rec : r.records) {
    os << "| " << rec.id << " | " << rec.status << " | " << rec.defect << " | " << rec.anchor;
    if (!rec.note.empty()) os << " (" << rec.note << ")";
    os << " |\n";
  }
  os << "\n**summary**: " << r.n_pass() << " pass, " << r.n_fail() << " fail, " << r.n_skip()
     << " skipped\n";
  return os.str();
}

Report parse_json_report(const std::string& text) {
  json j = json::parse(text);
  Report r;
  r.timestamp = j.value("timestamp", "");
  if (j.contains("config"))
    for (auto it = j["config"].begin(); it != j["config"].end(); ++it)
      r.config_echo[it.key()] = it.value().get<std::string>();
  for (const auto& e : j["records"]) {
    CheckRecord rec;
    rec.id = e.value("id", "");
    rec.anchor = e.value("anchor", "");
    rec.status = e.value("status", "");
    rec.defect = e.value("defect", "");
    rec.note = e.value("note", "");
    rec.lambda_max = e.value("lambda_max", 0);
    r.records.push_back(std::move(rec));
  }
  return r;
}

bool reports_equal_modulo_time(const Report& a, const Report& b) {
  Report a2 = a, b2 = b;
  a2.timestamp.clear();
  b2.timestamp.clear();
  return render_json(a2) == render_json(b2);
}

}  // namespace latbv
