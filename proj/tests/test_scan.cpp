#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "corrloss/analytic.hpp"
#include "corrloss/scan.hpp"

using namespace corrloss;

namespace {

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("corrloss_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  std::filesystem::create_directories(dir);
  return dir;
}

ScanSpec small_spec(ScanQuantity q) {
  ScanSpec spec;
  spec.quantity = q;
  spec.n = 4;
  spec.N = 2.0;
  spec.s_grid = {0.0, 0.7, 1.4};
  spec.T_grid = {0.0, 0.5};
  spec.eta_grid = {0.6, 0.9};
  return spec;
}

}  // namespace

TEST(ScanNames, RoundTrip) {
  for (ScanQuantity q : {ScanQuantity::ClassicalLower, ScanQuantity::ClassicalUpper,
                         ScanQuantity::ClassicalLocal, ScanQuantity::ClassicalAnalytic,
                         ScanQuantity::Quantum, ScanQuantity::QuantumLocal,
                         ScanQuantity::EntAssisted, ScanQuantity::EntAssistedLocal,
                         ScanQuantity::SeedEntropy, ScanQuantity::SeedEntropyAnalytic,
                         ScanQuantity::Separability}) {
    EXPECT_EQ(parse_scan_quantity(to_string(q)), q);
  }
  EXPECT_THROW(parse_scan_quantity("capacity"), std::invalid_argument);
  EXPECT_EQ(local_variant(ScanQuantity::Quantum), ScanQuantity::QuantumLocal);
  EXPECT_EQ(local_variant(ScanQuantity::ClassicalLower), ScanQuantity::ClassicalLocal);
  EXPECT_THROW(local_variant(ScanQuantity::Separability), std::invalid_argument);
  EXPECT_EQ(parse_output_format("json"), OutputFormat::Json);
  EXPECT_THROW(parse_output_format("xml"), std::invalid_argument);
}

TEST(Linspace, EndpointsAndErrors) {
  const std::vector<double> g = linspace(0.0, 3.0, 31);
  ASSERT_EQ(g.size(), 31u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 3.0);
  EXPECT_NEAR(g[10], 1.0, 1e-15);
  EXPECT_EQ(linspace(2.0, 5.0, 1), std::vector<double>{2.0});
  EXPECT_THROW(linspace(0.0, 1.0, 0), std::invalid_argument);
}

TEST(ScanSpecValidation, RejectsBadInput) {
  ScanSpec spec = small_spec(ScanQuantity::ClassicalLower);
  EXPECT_NO_THROW(spec.validate());
  ScanSpec empty = spec;
  empty.s_grid.clear();
  EXPECT_THROW(empty.validate(), std::invalid_argument);
  ScanSpec no_eta = spec;
  no_eta.eta_grid.clear();
  EXPECT_THROW(no_eta.validate(), std::invalid_argument);
  ScanSpec hot = spec;
  hot.T_grid = {-1.0};
  EXPECT_THROW(hot.validate(), std::invalid_argument);
  ScanSpec leaky = spec;
  leaky.eta_grid = {1.2};
  EXPECT_THROW(leaky.validate(), std::invalid_argument);
  ScanSpec wide = spec;
  wide.n = 100;
  EXPECT_THROW(wide.validate(), std::invalid_argument);
  ScanSpec nan_grid = spec;
  nan_grid.s_grid = {NAN};
  EXPECT_THROW(nan_grid.validate(), std::invalid_argument);
  ScanSpec sep = spec;
  sep.quantity = ScanQuantity::Separability;
  EXPECT_THROW(sep.validate(), std::invalid_argument);
  ScanSpec no_jobs = spec;
  no_jobs.jobs = 0;
  EXPECT_THROW(no_jobs.validate(), std::invalid_argument);
}

TEST(EvaluatePoint, FlagsAndValues) {
  const ChannelConfig cfg{10, 0.9, 0.5, 0.0, 8.0};
  const ScanRow analytic = evaluate_point(ScanQuantity::ClassicalAnalytic, cfg);
  EXPECT_TRUE(analytic.analytic_valid);
  EXPECT_EQ(analytic.value_bits, classical_lower_analytic(cfg).value);
  const ScanRow sep = evaluate_point(ScanQuantity::Separability, {2, 0.9, 1.0, 0.0, 8.0});
  EXPECT_NEAR(sep.value_bits, std::exp(-1.0) / 2, 1e-12);
  EXPECT_FALSE(sep.analytic_valid);
  EXPECT_THROW(evaluate_point(ScanQuantity::Separability, cfg), std::invalid_argument);
  const ScanRow seed = evaluate_point(ScanQuantity::SeedEntropyAnalytic, cfg);
  EXPECT_GT(seed.value_bits, 0.0);
}

TEST(RunScan, OrderingAndDeterminismAcrossJobs) {
  ScanSpec spec = small_spec(ScanQuantity::Quantum);
  const std::vector<ScanRow> serial = run_scan(spec);
  spec.jobs = 3;
  std::size_t calls = 0;
  const std::vector<ScanRow> parallel = run_scan(spec, [&](std::size_t, std::size_t total) {
    ++calls;
    EXPECT_EQ(total, 12u);
  });
  EXPECT_EQ(calls, 12u);
  ASSERT_EQ(serial.size(), 12u);
  ASSERT_EQ(parallel.size(), 12u);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].value_bits, parallel[i].value_bits);
    EXPECT_EQ(serial[i].s, parallel[i].s);
  }
  // eta outer, T middle, s inner.
  EXPECT_EQ(serial[1].s, 0.7);
  EXPECT_EQ(serial[3].T, 0.5);
  EXPECT_EQ(serial[6].eta, 0.9);
}

TEST(RunScan, PropagatesFailures) {
  ScanSpec spec = small_spec(ScanQuantity::ClassicalLower);
  spec.N = -1.0;
  EXPECT_THROW(run_scan(spec), std::invalid_argument);
}

TEST(CsvOutput, RoundTripsAtTwelveDigits) {
  const std::vector<ScanRow> rows = run_scan(small_spec(ScanQuantity::ClassicalUpper));
  std::stringstream ss;
  write_csv(ss, rows);
  const std::vector<ScanRow> back = parse_csv(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_NEAR(back[i].value_bits, rows[i].value_bits, 1e-11 * std::abs(rows[i].value_bits));
    EXPECT_EQ(back[i].quantity, rows[i].quantity);
    EXPECT_EQ(back[i].analytic_valid, rows[i].analytic_valid);
    EXPECT_EQ(back[i].n, rows[i].n);
    EXPECT_EQ(back[i].eta, rows[i].eta);
  }
}

TEST(CsvOutput, ParseErrors) {
  std::stringstream no_header("1,2,3\n");
  EXPECT_THROW(parse_csv(no_header), std::runtime_error);
  std::stringstream short_row("n,eta,s,T,N,quantity,value_bits,analytic_valid,converged\n1,2\n");
  EXPECT_THROW(parse_csv(short_row), std::runtime_error);
  std::stringstream bad_bool(
      "n,eta,s,T,N,quantity,value_bits,analytic_valid,converged\n"
      "2,0.9,0,0,8,quantum,1.5,maybe,true\n");
  EXPECT_THROW(parse_csv(bad_bool), std::runtime_error);
  std::stringstream bad_number(
      "n,eta,s,T,N,quantity,value_bits,analytic_valid,converged\n"
      "2,x,0,0,8,quantum,1.5,true,true\n");
  EXPECT_THROW(parse_csv(bad_number), std::runtime_error);
}

TEST(JsonOutput, FieldsPresent) {
  const std::vector<ScanRow> rows = run_scan(small_spec(ScanQuantity::ClassicalAnalytic));
  std::stringstream ss;
  write_json(ss, rows);
  const nlohmann::json parsed = nlohmann::json::parse(ss.str());
  ASSERT_EQ(parsed.size(), rows.size());
  EXPECT_EQ(parsed[0]["quantity"], "classical-analytic");
  EXPECT_NEAR(parsed[4]["value_bits"].get<double>(), rows[4].value_bits, 1e-11);
  EXPECT_EQ(parsed[4]["analytic_valid"].get<bool>(), rows[4].analytic_valid);
}

TEST(ScanFile, LoadsAndOverridesDefaults) {
  const auto path = scratch_dir() / "scan.json";
  {
    std::ofstream f(path);
    f << R"({"quantity": "quantum", "scenario": "local", "n": 6, "nbar": 3.5,
             "eta": [0.7, 0.8], "temp": [1.0], "s": {"min": 0.5, "max": 1.5, "steps": 3},
             "format": "json", "jobs": 2})";
  }
  const ScanSpec spec = load_scan_file(path.string());
  EXPECT_EQ(spec.quantity, ScanQuantity::QuantumLocal);
  EXPECT_EQ(spec.n, 6);
  EXPECT_EQ(spec.N, 3.5);
  EXPECT_EQ(spec.eta_grid, (std::vector<double>{0.7, 0.8}));
  EXPECT_EQ(spec.T_grid, (std::vector<double>{1.0}));
  EXPECT_EQ(spec.s_grid, (std::vector<double>{0.5, 1.0, 1.5}));
  EXPECT_EQ(spec.format, OutputFormat::Json);
  EXPECT_EQ(spec.jobs, 2);

  const auto broken = scratch_dir() / "broken.json";
  {
    std::ofstream f(broken);
    f << "{\"n\": ";
  }
  EXPECT_THROW(load_scan_file(broken.string()), std::runtime_error);
  const auto wrong_type = scratch_dir() / "wrong.json";
  {
    std::ofstream f(wrong_type);
    f << R"({"eta": "high"})";
  }
  EXPECT_THROW(load_scan_file(wrong_type.string()), std::runtime_error);
  EXPECT_THROW(load_scan_file((scratch_dir() / "missing.json").string()), std::runtime_error);
  std::filesystem::remove_all(scratch_dir());
}

TEST(Figures, KnownIdsAndGrids) {
  for (const char* id : {"2a", "2b", "3a", "3b", "4a", "4b", "5", "6"}) {
    const std::vector<FigureSeries> series = figure_specs(id);
    EXPECT_FALSE(series.empty()) << id;
    for (const FigureSeries& fs : series) {
      EXPECT_NO_THROW(fs.spec.validate()) << id << " " << fs.name;
    }
  }
  EXPECT_EQ(figure_specs("2a").front().spec.eta_grid.size(), 5u);
  EXPECT_EQ(figure_specs("6").back().spec.n, 2);
  EXPECT_THROW(figure_specs("7"), std::invalid_argument);
}

TEST(Figures, SeparabilityFigureWritesBoundary) {
  // Figure 6 minus its optimizer series: write only the cheap ones by hand.
  const auto dir = scratch_dir();
  const std::vector<FigureSeries> series = figure_specs("6");
  const FigureSeries& sep = series.back();
  ASSERT_EQ(sep.name, "separability");
  write_rows(run_scan(sep.spec), OutputFormat::Csv, (dir / "sep.csv").string());
  std::ifstream in(dir / "sep.csv");
  const std::vector<ScanRow> rows = parse_csv(in);
  EXPECT_EQ(rows.size(), 16u * 16u);
  for (const ScanRow& r : rows) {
    EXPECT_NEAR(r.value_bits, (r.T + 0.5) * std::exp(-std::abs(r.s)), 1e-10);
  }
  EXPECT_THROW(write_rows(rows, OutputFormat::Csv, (dir / "no/such/dir/x.csv").string()),
               std::runtime_error);
  std::filesystem::remove_all(dir);
}
