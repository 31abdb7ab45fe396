#include <CLI11.hpp>

#include "latbv/suites.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"lattice BV/BRST verification engine"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute verification suites");
  std::string config_path;
  std::vector<std::string> suites;
  std::string report_path;
  std::string format;
  std::string dump_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;

  run->add_option("--config", config_path, "configuration file")->required();
  run->add_option("--suite", suites, "suite to run (repeatable; overrides the config)");
  run->add_option("--report", report_path, "report output path");
  run->add_option("--format", format, "report format: json or md");
  run->add_option("--dump-kernels", dump_dir, "directory for propagator dumps");
  auto* seed_opt = run->add_option("--seed", seed, "random seed override");

  CLI11_PARSE(app, argc, argv);
  seed_set = seed_opt->count() > 0;

  try {
    latbv::RunConfig cfg = latbv::load_config(config_path);
    if (!suites.empty()) cfg.suites = suites;
    if (!report_path.empty()) cfg.report_path = report_path;
    if (!format.empty()) cfg.format = format;
    if (!dump_dir.empty()) cfg.dump_kernels_dir = dump_dir;
    if (seed_set) cfg.seed = seed;
    if (const char* env = std::getenv("LATBV_REPORT")) cfg.report_path = env;
    if (cfg.format != "json" && cfg.format != "md")
      latbv::fail(latbv::Err::ConfigInvalid, "format must be json or md");

    latbv::Report report = latbv::run_suite(cfg);
    std::string text =
        cfg.format == "md" ? latbv::render_markdown(report) : latbv::render_json(report);
    if (cfg.report_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.report_path);
      if (!out) latbv::fail(latbv::Err::ConfigInvalid, "cannot write report: " + cfg.report_path);
      out << text;
      std::cout << report.n_pass() << " pass, " << report.n_fail() << " fail, "
                << report.n_skip() << " skipped -> " << cfg.report_path << "\n";
    }
    return report.all_ok() ? 0 : 1;
  } catch (const latbv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
