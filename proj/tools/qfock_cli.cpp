#include "qfock/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification sweeps for q-deformed Fock space constructions"};
  std::string config_path, suite = "all", q_list, dim_spec, format = "json", out_path;
  std::optional<int> degree;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool timings = false;
  app.add_option("--config", config_path, "JSON sweep configuration")->check(CLI::ExistingFile);
  app.add_option("--suite", suite, "symmetrizer | wick | quantization | toeplitz | haagerup | all")
      ->check(CLI::IsMember({"symmetrizer", "wick", "quantization", "toeplitz", "haagerup", "all"}));
  app.add_option("--q", q_list, "comma-separated q values");
  app.add_option("--dim-spec", dim_spec, "semicolon-separated spectra, e.g. \"1;2,1\"");
  app.add_option("--degree", degree, "truncation degree N");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "output file (default: $QFOCK_OUT_DIR/report.<format>, else stdout)");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--timings", timings, "include per-check wall time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  qfock::SweepConfig cfg;
  try {
    if (!config_path.empty()) cfg = qfock::load_config(config_path);
    if (!q_list.empty()) {
      cfg.q.clear();
      for (const auto& v : split(q_list, ',')) cfg.q.push_back(std::stod(v));
    }
    if (!dim_spec.empty()) cfg.spectra = split(dim_spec, ';');
    if (degree) cfg.degree = *degree;
    if (seed) cfg.seed = *seed;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::vector<qfock::VerificationReport> reports;
  try {
    reports = qfock::run_suite(cfg, suite, {jobs, timings});
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (out_path.empty()) {
    if (const char* dir = std::getenv("QFOCK_OUT_DIR"); dir && *dir)
      out_path = (std::filesystem::path(dir) / ("report." + format)).string();
  }
  try {
    if (out_path.empty())
      std::cout << qfock::emit(reports, format);
    else
      qfock::write_report(out_path, reports, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const auto failed = std::count_if(reports.begin(), reports.end(), [](const auto& r) { return !r.pass; });
  std::cerr << reports.size() - static_cast<std::size_t>(failed) << "/" << reports.size() << " checks passed\n";
  return failed == 0 ? 0 : 1;
}
