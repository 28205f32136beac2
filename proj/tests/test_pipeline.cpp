#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "lgosc/analysis.hpp"
#include "lgosc/dataset_io.hpp"
#include "lgosc/error.hpp"
#include "lgosc/synthetic.hpp"

namespace {

using namespace lgosc;
namespace fs = std::filesystem;

OscParams minos() {
  OscParams p;
  p.dm2 = 2.4e-3;
  p.sin2_2theta = 0.95;
  p.baseline_km = 735.0;
  return p;
}

RunConfig base_config(std::uint64_t replicas = 2000) {
  RunConfig c;
  c.params = minos();
  c.pseudo.replicas = replicas;
  c.pseudo.seed = 42;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

TEST(Synthetic, EnergyGridAndPhaseRange) {
  const auto e = log_spaced_energies(30, 0.5, 50.0);
  ASSERT_EQ(e.size(), 30u);
  EXPECT_EQ(e.front(), 0.5);
  EXPECT_NEAR(e.back(), 50.0, 1e-12);
  for (std::size_t i = 1; i < e.size(); ++i) EXPECT_NEAR(e[i] / e[i - 1], std::pow(100.0, 1.0 / 29), 1e-12);
  const OscParams p = minos();
  EXPECT_LE(accumulated_phase(p, e.front()), 1.5 * M_PI + 0.1);
  EXPECT_GT(accumulated_phase(p, e.front()), 1.2 * M_PI);
  EXPECT_LT(accumulated_phase(p, e.back()), 0.05);
  EXPECT_THROW(log_spaced_energies(30, 5.0, 1.0), DomainError);
  EXPECT_THROW(log_spaced_energies(1, 1.0, 5.0), DomainError);
}

TEST(Synthetic, NoiselessPointsSitOnTheCurve) {
  SyntheticSpec spec;
  spec.rel_error = 0.0;
  const auto pts = generate_synthetic(minos(), spec);
  for (const auto& m : pts) {
    EXPECT_EQ(m.p_mumu, vacuum_survival_probability(minos(), m.energy_gev));
    EXPECT_EQ(m.sigma_stat, 0.0);
  }
}

TEST(Synthetic, DeterministicPerSeed) {
  SyntheticSpec spec;
  spec.seed = 5;
  const auto a = generate_synthetic(minos(), spec);
  const auto b = generate_synthetic(minos(), spec);
  spec.seed = 6;
  const auto c = generate_synthetic(minos(), spec);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].p_mumu, b[i].p_mumu);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs = differs || a[i].p_mumu != c[i].p_mumu;
  EXPECT_TRUE(differs);
}

TEST(Synthetic, FlatTruthNoiselessK) {
  SyntheticSpec spec;
  spec.truth = Truth::classical_flat;
  spec.flat_p = 0.7;
  spec.rel_error = 0.0;
  RunConfig cfg = base_config(1000);
  cfg.tolerance = 0.01;
  const auto report = run_analysis(cfg, generate_synthetic(minos(), spec));
  ASSERT_GT(report.n_tuples, 0u);
  for (const auto& rec : report.tuples) EXPECT_NEAR(rec.k.value, 0.4, 1e-12);
  EXPECT_EQ(report.n_violations_observed, 0u);
}

TEST(Synthetic, TruthNames) {
  for (Truth t : {Truth::quantum, Truth::classical_flat, Truth::classical_markov}) {
    EXPECT_EQ(truth_from_string(to_string(t)), t);
  }
  EXPECT_THROW(truth_from_string("bohmian"), DomainError);
}

TEST(RunAnalysis, QuantumTruthIsSignificant) {
  SyntheticSpec spec;
  spec.seed = 3;
  const auto report = run_analysis(base_config(5000), generate_synthetic(minos(), spec));
  EXPECT_EQ(report.status, "ok");
  ASSERT_TRUE(report.z_score);
  EXPECT_GT(*report.z_score, 2.0);
  ASSERT_TRUE(report.chi2_quantum);
  EXPECT_EQ(report.dof, static_cast<int>(report.n_tuples) - 1);
  EXPECT_EQ(report.null_counts.size(), 5000u);
  for (const auto& rec : report.tuples) EXPECT_EQ(rec.violation, rec.k.value > 1.0);
}

TEST(RunAnalysis, NoTuplesStatus) {
  std::vector<MeasuredPoint> pts(3);
  for (int i = 0; i < 3; ++i) {
    pts[i].energy_gev = 1.0 + 10.0 * i;
    pts[i].p_mumu = 0.5;
    pts[i].sigma_stat = 0.05;
  }
  const auto report = run_analysis(base_config(), pts);
  EXPECT_EQ(report.status, "no_tuples");
  EXPECT_EQ(report.n_tuples, 0u);
  EXPECT_FALSE(report.z_score);
  EXPECT_TRUE(to_json(report)["z_score"].is_null());
}

TEST(RunAnalysis, TooFewPoints) {
  std::vector<MeasuredPoint> pts(2);
  pts[0].energy_gev = 1.0;
  pts[1].energy_gev = 2.0;
  EXPECT_THROW(run_analysis(base_config(), pts), DataError);
}

TEST(RunAnalysis, DegenerateNullIsFlagged) {
  SyntheticSpec spec;
  spec.rel_error = 0.0;
  const auto report = run_analysis(base_config(1000), generate_synthetic(minos(), spec));
  ASSERT_TRUE(report.null_fit);
  EXPECT_EQ(report.null_fit->kind, NullFitKind::degenerate);
  EXPECT_TRUE(report.z_used_sd_floor);
  const auto j = to_json(report);
  EXPECT_EQ(j["z_used_sd_floor"], true);
  EXPECT_EQ(j["null_fit"]["kind"], "degenerate");
  EXPECT_FALSE(j["warnings"].empty());
}

TEST(RunAnalysis, SmallReplicaWarning) {
  SyntheticSpec spec;
  const auto report = run_analysis(base_config(200), generate_synthetic(minos(), spec));
  const bool warned = std::any_of(report.warnings.begin(), report.warnings.end(),
                                  [](const std::string& w) { return w.find("replicas") != std::string::npos; });
  EXPECT_TRUE(warned);
}

TEST(RunAnalysis, ThreadCountDoesNotChangeReport) {
  SyntheticSpec spec;
  spec.seed = 11;
  const auto pts = generate_synthetic(minos(), spec);
  RunConfig cfg = base_config(3000);
  cfg.pseudo.threads = 1;
  auto serial = to_json(run_analysis(cfg, pts));
  cfg.pseudo.threads = 4;
  auto parallel = to_json(run_analysis(cfg, pts));
  serial["config"].erase("pseudo");
  parallel["config"].erase("pseudo");
  EXPECT_EQ(serial.dump(), parallel.dump());
}

TEST(RunAnalysis, FittedCurveOption) {
  SyntheticSpec spec;
  spec.seed = 2;
  RunConfig cfg = base_config(1000);
  cfg.fit_curve = true;
  const auto report = run_analysis(cfg, generate_synthetic(minos(), spec));
  EXPECT_TRUE(report.model_fitted);
  EXPECT_NEAR(report.model_params.dm2 / 2.4e-3, 1.0, 0.1);
}

TEST(Artifacts, EndToEndDeterminism) {
  TempDir dir("lgosc_pipeline_det");
  SyntheticSpec spec;
  spec.seed = 4;
  write_dataset(dir.path / "spectrum_in.csv", generate_synthetic(minos(), spec));
  RunConfig cfg = base_config(2000);
  cfg.data = dir.path / "spectrum_in.csv";
  cfg.out_dir = dir.path / "a";
  run_analysis(cfg);
  cfg.out_dir = dir.path / "b";
  run_analysis(cfg);
  const std::vector<std::string> files{"report.json", "tuples.csv", "null_histogram.csv",
                                       "spectrum.csv", "model_curve.csv", "k_vs_phase.csv"};
  for (const auto& f : files) {
    ASSERT_TRUE(fs::exists(dir.path / "a" / f)) << f;
    const std::string a = slurp(dir.path / "a" / f);
    const std::string b = slurp(dir.path / "b" / f);
    if (f == "report.json") {
      auto ja = nlohmann::json::parse(a);
      auto jb = nlohmann::json::parse(b);
      ja["config"].erase("out_dir");
      jb["config"].erase("out_dir");
      EXPECT_EQ(ja, jb);
    } else {
      EXPECT_EQ(a, b) << f;
    }
  }
}

TEST(Artifacts, EmitReportTwiceIsByteIdentical) {
  TempDir dir("lgosc_pipeline_emit");
  SyntheticSpec spec;
  const auto report = run_analysis(base_config(1000), generate_synthetic(minos(), spec));
  emit_report(report, dir.path / "r1.json");
  emit_report(report, dir.path / "r2.json");
  EXPECT_EQ(slurp(dir.path / "r1.json"), slurp(dir.path / "r2.json"));
  EXPECT_THROW(emit_report(report, dir.path / "missing" / "deeper" / "r.json"), IoError);
}

TEST(Config, JsonRoundTrip) {
  RunConfig c = base_config(12345);
  c.order = 4;
  c.tolerance = 0.01;
  c.residual_mode = ResidualMode::absolute;
  c.pseudo.include_systematics = true;
  c.pseudo.sys_amplitude_sigma = 0.03;
  c.synthetic.truth = Truth::classical_markov;
  c.synthetic.damping = 1.5;
  c.mode = Mode::simulate;
  c.fit_curve = true;
  const nlohmann::json j = to_json(c);
  EXPECT_EQ(to_json(run_config_from_json(j)), j);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  nlohmann::json j = to_json(base_config());
  j["replica"] = 3;
  EXPECT_THROW(run_config_from_json(j), DomainError);
  j = to_json(base_config());
  j["pseudo"]["replicas"] = "many";
  EXPECT_THROW(run_config_from_json(j), DomainError);
  RunConfig c = base_config();
  c.order = 5;
  c.mode = Mode::simulate;
  EXPECT_THROW(c.validate(), DomainError);
  c.allow_high_order = true;
  EXPECT_NO_THROW(c.validate());
  c.params.reset();
  EXPECT_THROW(c.oscillation(), DomainError);
}

TEST(Config, LoadResolvesRelativePaths) {
  TempDir dir("lgosc_pipeline_cfg");
  nlohmann::json j = to_json(base_config());
  j["data"] = "spectrum.csv";
  j["out_dir"] = "out";
  std::ofstream(dir.path / "run.json") << j.dump();
  const RunConfig c = load_run_config(dir.path / "run.json");
  EXPECT_EQ(c.data, dir.path / "spectrum.csv");
  EXPECT_EQ(c.out_dir, dir.path / "out");
  std::ofstream(dir.path / "bad.json") << "{ not json";
  EXPECT_THROW(load_run_config(dir.path / "bad.json"), DomainError);
  EXPECT_THROW(load_run_config(dir.path / "absent.json"), IoError);
}

TEST(Curve, MatterDeviationIsSmallInCrust) {
  OscParams p = minos();
  const auto energies = log_spaced_energies(200, 0.5, 50.0);
  EXPECT_EQ(max_matter_deviation(model_curve(p, energies)), 0.0);
  p.v_c = charged_current_potential(2.7, 0.5);
  const double dev = max_matter_deviation(model_curve(p, energies));
  EXPECT_GT(dev, 0.0);
  EXPECT_LT(dev, 0.1);
}

// When the truth obeys the product rule the observed count is a draw from the
// simulated null, so z should be roughly standard normal.
TEST(Calibration, MarkovTruthZIsStandardised) {
  std::vector<double> z;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SyntheticSpec spec;
    spec.truth = Truth::classical_markov;
    spec.damping = 2.0;
    spec.seed = 1000 + seed;
    RunConfig cfg = base_config(2000);
    cfg.pseudo.seed = 5000 + seed;
    cfg.tolerance = 0.01;
    const auto report = run_analysis(cfg, generate_synthetic(minos(), spec));
    ASSERT_TRUE(report.z_score);
    z.push_back(*report.z_score);
  }
  double m = 0.0;
  for (double v : z) m += v;
  m /= static_cast<double>(z.size());
  double s = 0.0;
  for (double v : z) s += (v - m) * (v - m);
  s = std::sqrt(s / static_cast<double>(z.size() - 1));
  EXPECT_NEAR(m, 0.0, 0.2);
  EXPECT_NEAR(s, 1.0, 0.25);
}

TEST(Power, MedianZGrowsWithPrecision) {
  double previous = -1e300;
  for (double rel : {0.2, 0.1, 0.05, 0.025}) {
    std::vector<double> z;
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      SyntheticSpec spec;
      spec.rel_error = rel;
      spec.seed = 300 + seed;
      RunConfig cfg = base_config(2000);
      cfg.pseudo.seed = 700 + seed;
      cfg.tolerance = 0.01;
      const auto report = run_analysis(cfg, generate_synthetic(minos(), spec));
      z.push_back(report.z_score.value_or(0.0));
    }
    std::nth_element(z.begin(), z.begin() + 7, z.end());
    EXPECT_GE(z[7], previous) << "rel_error " << rel;
    previous = z[7];
  }
}

}  // namespace
