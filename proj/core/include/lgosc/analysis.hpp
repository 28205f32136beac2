#pragma once

// End-to-end LGI analysis of a fixed-baseline spectrum: tuple selection,
// K_n evaluation, classical-null pseudo-experiments, significance and the
// quantum goodness of fit, plus report and plot-table emission.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lgosc/beta_binomial.hpp"
#include "lgosc/goodness_of_fit.hpp"
#include "lgosc/pseudo_experiment.hpp"
#include "lgosc/selection.hpp"
#include "lgosc/synthetic.hpp"

namespace lgosc {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kConfigEnvVar = "LGOSC_CONFIG";

enum class ExitCode : int {
  success = 0,
  data_error = 2,
  domain_error = 3,
  no_tuples = 4,
};

enum class Mode { analyze, simulate, curve, triples };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);

struct RunConfig {
  std::optional<OscParams> params;
  int order = 3;
  bool allow_high_order = false;
  double tolerance = 0.005;
  ResidualMode residual_mode = ResidualMode::relative;
  PseudoConfig pseudo;
  std::filesystem::path data;
  std::filesystem::path out_dir;
  Mode mode = Mode::analyze;
  SyntheticSpec synthetic;
  bool fit_curve = false;

  // Throws DomainError for inconsistent settings (order outside {3, 4}
  // without allow_high_order, missing parameters, ...).
  void validate() const;
  const OscParams& oscillation() const;
};

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);
RunConfig load_run_config(const std::filesystem::path& path);

struct TupleRecord {
  PhaseTuple tuple;
  KValue k;             // from the measured spectrum
  double k_theory = 0;  // model curve at the component phases
  double k_classical = 0;  // product rule on the measured component correlations
  bool violation = false;
};

struct SignificanceReport {
  std::string status = "ok";  // "ok" or "no_tuples"
  int order = 3;
  double tolerance = 0.0;
  std::size_t n_points = 0;
  std::size_t n_tuples = 0;
  std::size_t n_violations_observed = 0;
  std::optional<BetaBinomialFit> null_fit;
  std::optional<double> z_score;
  bool z_used_sd_floor = false;
  double sd_floor = 0.0;
  std::optional<double> chi2_quantum;
  int dof = 0;
  OscParams model_params;
  bool model_fitted = false;
  nlohmann::json config;
  std::vector<std::string> warnings;
  std::vector<TupleRecord> tuples;
  std::vector<std::uint32_t> null_counts;
};

// Runs the full pipeline on an in-memory spectrum.
SignificanceReport run_analysis(const RunConfig& config, std::vector<MeasuredPoint> points);

// Loads config.data, runs the pipeline and writes every artifact into
// config.out_dir when it is set.
SignificanceReport run_analysis(const RunConfig& config);

nlohmann::json to_json(const SignificanceReport& report);

// Canonical JSON (sorted keys, shortest round-trip floats).
void emit_report(const SignificanceReport& report, const std::filesystem::path& path);

// report.json, tuples.csv, null_histogram.csv, spectrum.csv, model_curve.csv
// and k_vs_phase.csv.
void write_artifacts(const SignificanceReport& report, const PhasedDataset& dataset,
                     const std::filesystem::path& out_dir);

struct CurveRow {
  double energy_gev = 0;
  double psi = 0;
  double p_vacuum = 0;
  double p_matter = 0;  // equal to p_vacuum when v_c == 0
};

std::vector<CurveRow> model_curve(const OscParams& params, std::span<const double> energies);

// max |P_vacuum - P_matter| over the rows.
double max_matter_deviation(std::span<const CurveRow> rows);

void write_curve(std::ostream& out, std::span<const CurveRow> rows);
void write_tuples(std::ostream& out, const PhasedDataset& dataset,
                  std::span<const TupleRecord> records);

}  // namespace lgosc
