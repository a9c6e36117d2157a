#include "corrloss/scan.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "corrloss/analytic.hpp"
#include "corrloss/entanglement.hpp"

namespace corrloss {

namespace {

using json = nlohmann::json;

struct NamedQuantity {
  ScanQuantity quantity;
  std::string_view name;
};

constexpr std::array<NamedQuantity, 11> kQuantityNames{{
    {ScanQuantity::ClassicalLower, "classical-lower"},
    {ScanQuantity::ClassicalUpper, "classical-upper"},
    {ScanQuantity::ClassicalLocal, "classical-local"},
    {ScanQuantity::ClassicalAnalytic, "classical-analytic"},
    {ScanQuantity::Quantum, "quantum"},
    {ScanQuantity::QuantumLocal, "quantum-local"},
    {ScanQuantity::EntAssisted, "ent-assisted"},
    {ScanQuantity::EntAssistedLocal, "ent-assisted-local"},
    {ScanQuantity::SeedEntropy, "seed-entropy"},
    {ScanQuantity::SeedEntropyAnalytic, "seed-entropy-analytic"},
    {ScanQuantity::Separability, "separability"},
}};

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double rounded(double x) { return std::stod(format_number(x)); }

void require_finite_grid(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) {
    throw std::invalid_argument(std::string("scan: empty ") + name + " grid");
  }
  for (double x : grid) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string("scan: non-finite value in ") + name + " grid");
    }
  }
}

SeedState analytic_seed(const ChannelConfig& cfg) {
  SeedState seed{{}, omega_spectrum(cfg.n)};
  for (const GlobalEnvMode& m : env_global_modes(cfg, seed.basis)) {
    seed.params.modes.push_back({0.0, m.s, 0.0, 0.0, 0.0});
  }
  return seed;
}

bool parse_bool(const std::string& field) {
  if (field == "true" || field == "1") {
    return true;
  }
  if (field == "false" || field == "0") {
    return false;
  }
  throw std::runtime_error("parse_csv: bad boolean '" + field + "'");
}

}  // namespace

std::string_view to_string(ScanQuantity q) {
  for (const NamedQuantity& nq : kQuantityNames) {
    if (nq.quantity == q) {
      return nq.name;
    }
  }
  return "unknown";
}

ScanQuantity parse_scan_quantity(std::string_view name) {
  for (const NamedQuantity& nq : kQuantityNames) {
    if (nq.name == name) {
      return nq.quantity;
    }
  }
  throw std::invalid_argument("unknown quantity '" + std::string(name) + "'");
}

ScanQuantity local_variant(ScanQuantity q) {
  switch (q) {
    case ScanQuantity::ClassicalLower:
    case ScanQuantity::ClassicalLocal:
      return ScanQuantity::ClassicalLocal;
    case ScanQuantity::Quantum:
    case ScanQuantity::QuantumLocal:
      return ScanQuantity::QuantumLocal;
    case ScanQuantity::EntAssisted:
    case ScanQuantity::EntAssistedLocal:
      return ScanQuantity::EntAssistedLocal;
    default:
      throw std::invalid_argument("no local scenario for '" + std::string(to_string(q)) + "'");
  }
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") {
    return OutputFormat::Csv;
  }
  if (name == "json") {
    return OutputFormat::Json;
  }
  throw std::invalid_argument("unknown format '" + std::string(name) + "'");
}

void ScanSpec::validate() const {
  if (n < 1 || n > kDefaultMaxModes) {
    throw std::invalid_argument("scan: n must lie in [1, " + std::to_string(kDefaultMaxModes) +
                                "]");
  }
  if (!(N >= 0.0) || !std::isfinite(N)) {
    throw std::invalid_argument("scan: nbar must be finite and >= 0");
  }
  require_finite_grid(s_grid, "s");
  require_finite_grid(T_grid, "temperature");
  require_finite_grid(eta_grid, "eta");
  for (double T : T_grid) {
    if (T < 0.0) {
      throw std::invalid_argument("scan: temperatures must be >= 0");
    }
  }
  for (double eta : eta_grid) {
    if (eta < 0.0 || eta > 1.0) {
      throw std::invalid_argument("scan: eta must lie in [0, 1]");
    }
  }
  if (jobs < 1) {
    throw std::invalid_argument("scan: jobs must be >= 1");
  }
  if (quantity == ScanQuantity::Separability && n != 2) {
    throw std::invalid_argument("scan: separability needs n = 2");
  }
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 1) {
    throw std::invalid_argument("linspace: steps must be >= 1");
  }
  if (steps == 1) {
    return {lo};
  }
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i) {
    out[i] = lo + (hi - lo) * i / (steps - 1);
  }
  return out;
}

ScanRow evaluate_point(ScanQuantity quantity, const ChannelConfig& cfg,
                       const OptimizerOptions& options) {
  cfg.validate();
  ScanRow row{cfg.n, cfg.eta, cfg.s, cfg.T, cfg.N, quantity};
  auto closed_form_valid = [&] { return classical_lower_analytic(cfg).valid; };
  switch (quantity) {
    case ScanQuantity::ClassicalLower: {
      const OptResult r = maximize_classical(cfg, options);
      row.value_bits = r.value;
      row.converged = r.converged;
      row.analytic_valid = closed_form_valid();
      break;
    }
    case ScanQuantity::ClassicalUpper: {
      const AnalyticBound b = classical_upper_bound(cfg);
      row.value_bits = b.value;
      row.analytic_valid = b.valid;
      break;
    }
    case ScanQuantity::ClassicalLocal:
      row.value_bits = local_classical_lower(cfg);
      row.analytic_valid = closed_form_valid();
      break;
    case ScanQuantity::ClassicalAnalytic: {
      const AnalyticBound b = classical_lower_analytic(cfg);
      row.value_bits = b.value;
      row.analytic_valid = b.valid;
      break;
    }
    case ScanQuantity::Quantum:
    case ScanQuantity::QuantumLocal:
    case ScanQuantity::EntAssisted:
    case ScanQuantity::EntAssistedLocal: {
      OptResult r;
      if (quantity == ScanQuantity::Quantum) {
        r = maximize_quantum(cfg, options);
      } else if (quantity == ScanQuantity::QuantumLocal) {
        r = maximize_quantum_local(cfg, options);
      } else if (quantity == ScanQuantity::EntAssisted) {
        r = maximize_ent_assisted(cfg, options);
      } else {
        r = maximize_ent_assisted_local(cfg, options);
      }
      row.value_bits = r.value;
      row.converged = r.converged;
      break;
    }
    case ScanQuantity::SeedEntropy: {
      const OptResult r = maximize_classical(cfg, options);
      row.value_bits = mean_reduced_entropy({r.params, omega_spectrum(cfg.n)});
      row.converged = r.converged;
      row.analytic_valid = closed_form_valid();
      break;
    }
    case ScanQuantity::SeedEntropyAnalytic:
      row.value_bits = mean_reduced_entropy(analytic_seed(cfg));
      row.analytic_valid = closed_form_valid();
      break;
    case ScanQuantity::Separability:
      if (cfg.n != 2) {
        throw std::invalid_argument("separability needs n = 2");
      }
      row.value_bits = env_ppt_eigenvalue(cfg.s, cfg.T);
      row.analytic_valid = row.value_bits >= 0.5 - kPhysicalTolerance;
      break;
  }
  return row;
}

std::vector<ScanRow> run_scan(const ScanSpec& spec, const ScanProgress& progress) {
  spec.validate();
  std::vector<ChannelConfig> points;
  points.reserve(spec.eta_grid.size() * spec.T_grid.size() * spec.s_grid.size());
  for (double eta : spec.eta_grid) {
    for (double T : spec.T_grid) {
      for (double s : spec.s_grid) {
        points.push_back({spec.n, eta, s, T, spec.N});
      }
    }
  }

  std::vector<ScanRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex report;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        rows[i] = evaluate_point(spec.quantity, points[i]);
      } catch (...) {
        std::lock_guard lock(report);
        if (!failure) {
          failure = std::current_exception();
        }
        next = points.size();
        return;
      }
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(report);
        progress(finished, points.size());
      }
    }
  };

  const int jobs = std::min<int>(spec.jobs, static_cast<int>(points.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) {
      pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "n,eta,s,T,N,quantity,value_bits,analytic_valid,converged\n";
  for (const ScanRow& r : rows) {
    os << r.n << ',' << format_number(r.eta) << ',' << format_number(r.s) << ','
       << format_number(r.T) << ',' << format_number(r.N) << ',' << to_string(r.quantity) << ','
       << format_number(r.value_bits) << ',' << (r.analytic_valid ? "true" : "false") << ','
       << (r.converged ? "true" : "false") << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<ScanRow>& rows) {
  json out = json::array();
  for (const ScanRow& r : rows) {
    out.push_back({{"n", r.n},
                   {"eta", rounded(r.eta)},
                   {"s", rounded(r.s)},
                   {"T", rounded(r.T)},
                   {"N", rounded(r.N)},
                   {"quantity", std::string(to_string(r.quantity))},
                   {"value_bits", rounded(r.value_bits)},
                   {"analytic_valid", r.analytic_valid},
                   {"converged", r.converged}});
  }
  os << out.dump(1) << '\n';
}

void write_rows(const std::vector<ScanRow>& rows, OutputFormat format, const std::string& path) {
  auto emit = [&](std::ostream& os) {
    if (format == OutputFormat::Csv) {
      write_csv(os, rows);
    } else {
      write_json(os, rows);
    }
  };
  if (path.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream file(path);
  if (!file) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  emit(file);
  file.flush();
  if (!file) {
    throw std::runtime_error("write to '" + path + "' failed");
  }
}

std::vector<ScanRow> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) ||
      line != "n,eta,s,T,N,quantity,value_bits,analytic_valid,converged") {
    throw std::runtime_error("parse_csv: missing or unexpected header");
  }
  std::vector<ScanRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      fields.push_back(field);
    }
    if (fields.size() != 9) {
      throw std::runtime_error("parse_csv: expected 9 fields in '" + line + "'");
    }
    try {
      ScanRow r;
      r.n = std::stoi(fields[0]);
      r.eta = std::stod(fields[1]);
      r.s = std::stod(fields[2]);
      r.T = std::stod(fields[3]);
      r.N = std::stod(fields[4]);
      r.quantity = parse_scan_quantity(fields[5]);
      r.value_bits = std::stod(fields[6]);
      r.analytic_valid = parse_bool(fields[7]);
      r.converged = parse_bool(fields[8]);
      rows.push_back(r);
    } catch (const std::logic_error& e) {
      throw std::runtime_error("parse_csv: bad row '" + line + "': " + e.what());
    }
  }
  return rows;
}

ScanSpec load_scan_file(const std::string& path, ScanSpec spec) {
  std::ifstream file(path);
  if (!file) {
    throw std::runtime_error("cannot open scan file '" + path + "'");
  }
  json cfg;
  try {
    file >> cfg;
  } catch (const json::exception& e) {
    throw std::runtime_error("scan file '" + path + "': " + e.what());
  }
  try {
    if (cfg.contains("quantity")) {
      spec.quantity = parse_scan_quantity(cfg["quantity"].get<std::string>());
    }
    if (cfg.value("scenario", std::string("global")) == "local") {
      spec.quantity = local_variant(spec.quantity);
    }
    spec.n = cfg.value("n", spec.n);
    spec.N = cfg.value("nbar", spec.N);
    if (cfg.contains("eta")) {
      spec.eta_grid = cfg["eta"].get<std::vector<double>>();
    }
    if (cfg.contains("temp")) {
      spec.T_grid = cfg["temp"].get<std::vector<double>>();
    }
    if (cfg.contains("s")) {
      const json& s = cfg["s"];
      spec.s_grid = linspace(s.value("min", 0.0), s.value("max", 3.0), s.value("steps", 31));
    }
    if (cfg.contains("format")) {
      spec.format = parse_output_format(cfg["format"].get<std::string>());
    }
    spec.out_path = cfg.value("out", spec.out_path);
    spec.jobs = cfg.value("jobs", spec.jobs);
  } catch (const json::exception& e) {
    throw std::runtime_error("scan file '" + path + "': " + e.what());
  }
  return spec;
}

std::vector<FigureSeries> figure_specs(std::string_view figure_id) {
  const std::vector<double> s_axis = linspace(0.0, 3.0, 31);
  auto make = [&](ScanQuantity q, int n, std::vector<double> eta, std::vector<double> temps,
                  std::vector<double> s = {}) {
    ScanSpec spec;
    spec.quantity = q;
    spec.n = n;
    spec.N = 8.0;
    spec.eta_grid = std::move(eta);
    spec.T_grid = std::move(temps);
    spec.s_grid = s.empty() ? s_axis : std::move(s);
    return spec;
  };
  auto series = [&](std::vector<ScanQuantity> qs, int n, std::vector<double> eta,
                    std::vector<double> temps) {
    std::vector<FigureSeries> out;
    for (ScanQuantity q : qs) {
      out.push_back({std::string(to_string(q)), make(q, n, eta, temps)});
    }
    return out;
  };
  const std::vector<double> eta_low_high{0.1, 0.3, 0.5, 0.7, 0.9};
  const std::vector<ScanQuantity> classical{ScanQuantity::ClassicalLower,
                                            ScanQuantity::ClassicalAnalytic,
                                            ScanQuantity::ClassicalLocal};
  const std::vector<ScanQuantity> quantum{ScanQuantity::Quantum, ScanQuantity::QuantumLocal};
  const std::vector<ScanQuantity> assisted{ScanQuantity::EntAssisted,
                                           ScanQuantity::EntAssistedLocal};

  if (figure_id == "2a") {
    return series(classical, 10, eta_low_high, {0.0});
  }
  if (figure_id == "2b") {
    return series(classical, 10, {0.9}, linspace(0.0, 5.0, 6));
  }
  if (figure_id == "3a") {
    return series(quantum, 10, linspace(0.6, 0.9, 4), {0.0});
  }
  if (figure_id == "3b") {
    return series(quantum, 10, {0.9}, linspace(0.0, 1.5, 4));
  }
  if (figure_id == "4a") {
    return series(assisted, 10, eta_low_high, {0.0});
  }
  if (figure_id == "4b") {
    return series(assisted, 10, {0.9}, linspace(0.0, 6.0, 7));
  }
  if (figure_id == "5") {
    return series({ScanQuantity::SeedEntropy, ScanQuantity::SeedEntropyAnalytic}, 10, {0.9},
                  {0.0});
  }
  if (figure_id == "6") {
    std::vector<FigureSeries> out;
    for (ScanQuantity q : {ScanQuantity::ClassicalLower, ScanQuantity::SeedEntropy,
                           ScanQuantity::Quantum, ScanQuantity::EntAssisted,
                           ScanQuantity::Separability}) {
      out.push_back({std::string(to_string(q)),
                     make(q, 2, {0.9}, linspace(0.0, 3.0, 16), linspace(0.0, 3.0, 16))});
    }
    return out;
  }
  throw std::invalid_argument("unknown figure id '" + std::string(figure_id) + "'");
}

std::vector<std::string> emit_figure_data(std::string_view figure_id, const std::string& out_dir,
                                          OutputFormat format, int jobs,
                                          const ScanProgress& progress) {
  std::vector<FigureSeries> all = figure_specs(figure_id);
  std::filesystem::create_directories(out_dir);
  const std::string ext = format == OutputFormat::Csv ? ".csv" : ".json";
  const std::string stem = "fig" + std::string(figure_id) + "_";
  std::vector<std::string> written;
  for (FigureSeries& fs : all) {
    fs.spec.jobs = jobs;
    fs.spec.format = format;
    const std::string path = (std::filesystem::path(out_dir) / (stem + fs.name + ext)).string();
    write_rows(run_scan(fs.spec, progress), format, path);
    written.push_back(path);
  }
  if (figure_id == "6") {
    const SeparabilityScan sep =
        env_separability_scan(all.front().spec.s_grid, std::vector<double>{0.0});
    const std::string path = (std::filesystem::path(out_dir) / (stem + "boundary" + ext)).string();
    std::ofstream file(path);
    if (!file) {
      throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    if (format == OutputFormat::Csv) {
      file << "s,T_boundary,T_closed_form\n";
      for (const BoundaryPoint& b : sep.boundary) {
        file << format_number(b.s) << ',' << format_number(b.T) << ','
             << format_number(b.T_closed_form) << '\n';
      }
    } else {
      json out = json::array();
      for (const BoundaryPoint& b : sep.boundary) {
        out.push_back({{"s", rounded(b.s)},
                       {"T_boundary", rounded(b.T)},
                       {"T_closed_form", rounded(b.T_closed_form)}});
      }
      file << out.dump(1) << '\n';
    }
    if (!file) {
      throw std::runtime_error("write to '" + path + "' failed");
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace corrloss
