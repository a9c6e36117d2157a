// corrloss: sweeps capacities of the lossy channel with a correlated
// environment and writes figure datasets.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corrloss/scan.hpp"

namespace {

void print_progress(std::size_t done, std::size_t total) {
  std::fprintf(stderr, "\r%zu/%zu points", done, total);
  if (done == total) {
    std::fputc('\n', stderr);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacities of a lossy bosonic channel with a correlated environment"};
  app.require_subcommand(1);

  CLI::App* scan = app.add_subcommand("scan", "Evaluate one quantity over an (eta, T, s) grid");
  std::string config_path;
  int n = 10;
  double nbar = 8.0;
  std::vector<double> etas{0.9};
  std::vector<double> temps{0.0};
  double s_min = 0.0;
  double s_max = 3.0;
  int s_steps = 31;
  std::string quantity = "classical-lower";
  std::string scenario = "global";
  std::string format = "csv";
  std::string out;
  int jobs = 1;
  scan->add_option("--config", config_path, "JSON scan file; flags given explicitly override it");
  scan->add_option("--n", n, "Uses per memory block")->check(CLI::Range(1, 64));
  scan->add_option("--nbar", nbar, "Mean input photons per use")->check(CLI::NonNegativeNumber);
  scan->add_option("--eta", etas, "Transmissivities")->delimiter(',');
  scan->add_option("--temp", temps, "Environment temperatures")->delimiter(',');
  scan->add_option("--s-min", s_min, "Smallest memory parameter");
  scan->add_option("--s-max", s_max, "Largest memory parameter");
  scan->add_option("--s-steps", s_steps, "Points on the s axis")->check(CLI::PositiveNumber);
  scan->add_option("--quantity", quantity,
                   "classical-lower, classical-upper, classical-local, classical-analytic, "
                   "quantum, quantum-local, ent-assisted, ent-assisted-local, seed-entropy, "
                   "seed-entropy-analytic or separability");
  scan->add_option("--scenario", scenario, "global or local")
      ->check(CLI::IsMember({"global", "local"}));
  scan->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  scan->add_option("--out", out, "Output file (default: standard output)");
  scan->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  CLI::App* figure = app.add_subcommand("figure", "Write the datasets of one figure");
  std::string figure_id;
  std::string figure_dir = ".";
  std::string figure_format = "csv";
  int figure_jobs = 1;
  figure->add_option("id", figure_id, "2a, 2b, 3a, 3b, 4a, 4b, 5 or 6")->required();
  figure->add_option("--out", figure_dir, "Output directory");
  figure->add_option("--format", figure_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  figure->add_option("--jobs", figure_jobs, "Worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (scan->parsed()) {
      corrloss::ScanSpec spec;
      if (!config_path.empty()) {
        spec = corrloss::load_scan_file(config_path, spec);
      }
      auto given = [&](const char* flag) { return scan->count(flag) > 0; };
      if (given("--quantity")) {
        spec.quantity = corrloss::parse_scan_quantity(quantity);
      }
      if (given("--scenario") && scenario == "local") {
        spec.quantity = corrloss::local_variant(spec.quantity);
      }
      if (given("--n")) {
        spec.n = n;
      }
      if (given("--nbar")) {
        spec.N = nbar;
      }
      if (given("--eta")) {
        spec.eta_grid = etas;
      }
      if (given("--temp")) {
        spec.T_grid = temps;
      }
      if (given("--s-min") || given("--s-max") || given("--s-steps") || spec.s_grid.empty()) {
        spec.s_grid = corrloss::linspace(s_min, s_max, s_steps);
      }
      if (given("--format")) {
        spec.format = corrloss::parse_output_format(format);
      }
      if (given("--out")) {
        spec.out_path = out;
      }
      if (given("--jobs")) {
        spec.jobs = jobs;
      }
      spec.validate();
      const std::vector<corrloss::ScanRow> rows = corrloss::run_scan(spec, print_progress);
      corrloss::write_rows(rows, spec.format, spec.out_path);
    } else if (figure->parsed()) {
      const std::vector<std::string> written = corrloss::emit_figure_data(
          figure_id, figure_dir, corrloss::parse_output_format(figure_format), figure_jobs,
          print_progress);
      for (const std::string& path : written) {
        std::cerr << "wrote " << path << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
