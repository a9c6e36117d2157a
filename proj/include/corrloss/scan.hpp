// scan.hpp: Parameter sweeps over (eta, T, s) and the figure datasets.

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corrloss/optimizer.hpp"

namespace corrloss {

enum class ScanQuantity {
  ClassicalLower,       // numerical Holevo optimum, global scenario
  ClassicalUpper,       // maximum output entropy bound
  ClassicalLocal,       // coherent states against T_eff(k)
  ClassicalAnalytic,    // closed-form optimum (meaningful where analytic_valid)
  Quantum,
  QuantumLocal,
  EntAssisted,
  EntAssistedLocal,
  SeedEntropy,          // mean marginal entropy of the optimal classical seed
  SeedEntropyAnalytic,  // same for the closed-form seed t = 0, r_j = s_j
  Separability,         // n = 2 environment: value = nu_tilde, analytic_valid = separable
};

std::string_view to_string(ScanQuantity q);
// Throws std::invalid_argument for unknown names.
ScanQuantity parse_scan_quantity(std::string_view name);
// Local counterpart of a global quantity; throws when there is none.
ScanQuantity local_variant(ScanQuantity q);

enum class OutputFormat { Csv, Json };

OutputFormat parse_output_format(std::string_view name);

struct ScanSpec {
  ScanQuantity quantity = ScanQuantity::ClassicalLower;
  int n = 10;
  double N = 8.0;
  std::vector<double> s_grid;
  std::vector<double> T_grid{0.0};
  std::vector<double> eta_grid{0.9};
  OutputFormat format = OutputFormat::Csv;
  std::string out_path;  // empty: standard output
  int jobs = 1;

  // Throws std::invalid_argument on empty grids or out-of-domain values.
  void validate() const;
};

// Equispaced grid with `steps` points including both ends.
std::vector<double> linspace(double lo, double hi, int steps);

struct ScanRow {
  int n = 0;
  double eta = 0.0;
  double s = 0.0;
  double T = 0.0;
  double N = 0.0;
  ScanQuantity quantity = ScanQuantity::ClassicalLower;
  double value_bits = 0.0;
  bool analytic_valid = false;
  bool converged = true;
};

ScanRow evaluate_point(ScanQuantity quantity, const ChannelConfig& cfg,
                       const OptimizerOptions& options = {});

// Called after each finished point with (done, total).
using ScanProgress = std::function<void(std::size_t, std::size_t)>;

// Rows ordered eta (outer), T, s (inner) regardless of the number of jobs.
std::vector<ScanRow> run_scan(const ScanSpec& spec, const ScanProgress& progress = {});

void write_csv(std::ostream& os, const std::vector<ScanRow>& rows);
void write_json(std::ostream& os, const std::vector<ScanRow>& rows);
void write_rows(const std::vector<ScanRow>& rows, OutputFormat format, const std::string& path);

// Inverse of write_csv; throws std::runtime_error on malformed input.
std::vector<ScanRow> parse_csv(std::istream& is);

// JSON scan file: {"quantity", "scenario", "n", "nbar", "eta": [...],
// "temp": [...], "s": {"min", "max", "steps"}, "format", "out", "jobs"};
// every key optional.
ScanSpec load_scan_file(const std::string& path, ScanSpec defaults = {});

struct FigureSeries {
  std::string name;
  ScanSpec spec;
};

// Known ids: 2a 2b 3a 3b 4a 4b 5 6. Throws std::invalid_argument otherwise.
std::vector<FigureSeries> figure_specs(std::string_view figure_id);

// Writes fig<id>_<series>.<ext> into out_dir (and fig6_boundary for id 6);
// returns the written paths.
std::vector<std::string> emit_figure_data(std::string_view figure_id, const std::string& out_dir,
                                          OutputFormat format, int jobs,
                                          const ScanProgress& progress = {});

}  // namespace corrloss
