#include "lgosc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "lgosc/dataset_io.hpp"
#include "lgosc/error.hpp"

namespace lgosc {
namespace {

using nlohmann::json;

constexpr const char* kChi2Note =
    "tuples share measured points and are strongly correlated; chi2 treats them as "
    "independent and is descriptive only";

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!j.is_object()) throw DomainError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw DomainError("unknown config key '" + where + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("config key '") + key + "': " + e.what());
  }
}

OscParams params_from_json(const json& j) {
  reject_unknown_keys(j, {"dm2", "sin2_2theta", "v_c", "v_n", "baseline_km"}, "params.");
  OscParams p;
  for (const char* key : {"dm2", "sin2_2theta", "baseline_km"}) {
    if (!j.contains(key)) throw DomainError(std::string("params missing '") + key + "'");
  }
  read(j, "dm2", p.dm2);
  read(j, "sin2_2theta", p.sin2_2theta);
  read(j, "v_c", p.v_c);
  read(j, "v_n", p.v_n);
  read(j, "baseline_km", p.baseline_km);
  p.validate();
  return p;
}

json params_to_json(const OscParams& p) {
  return {{"dm2", p.dm2},
          {"sin2_2theta", p.sin2_2theta},
          {"v_c", p.v_c},
          {"v_n", p.v_n},
          {"baseline_km", p.baseline_km}};
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json fit_to_json(const BetaBinomialFit& fit) {
  return {{"alpha", finite_or_null(fit.alpha)},
          {"beta", finite_or_null(fit.beta)},
          {"trials_n", fit.trials_n},
          {"mean_violations", fit.mean_violations},
          {"sd_violations", fit.sd_violations},
          {"kind", std::string(to_string(fit.kind))},
          {"degenerate", fit.kind == NullFitKind::degenerate}};
}

std::string join(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(xs[i]);
  }
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += format_double(xs[i]);
  }
  return out;
}

void open_for_write(std::ofstream& out, const std::filesystem::path& path) {
  out.open(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::analyze: return "analyze";
    case Mode::simulate: return "simulate";
    case Mode::curve: return "curve";
    case Mode::triples: return "triples";
  }
  return "unknown";
}

Mode mode_from_string(std::string_view name) {
  if (name == "analyze") return Mode::analyze;
  if (name == "simulate") return Mode::simulate;
  if (name == "curve") return Mode::curve;
  if (name == "triples") return Mode::triples;
  throw DomainError("unknown mode '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  if (params) params->validate();
  if (order < 3) throw DomainError("order must be at least 3");
  if (order > 4 && !allow_high_order) {
    throw DomainError("order " + std::to_string(order) +
                      " needs allow_high_order; the standard pipeline uses 3 or 4");
  }
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  pseudo.validate();
  synthetic.validate();
  if ((mode == Mode::analyze || mode == Mode::triples) && data.empty()) {
    throw DomainError(std::string(to_string(mode)) + " needs a dataset path");
  }
  if (!data.empty() && !std::filesystem::exists(data)) {
    throw IoError("dataset '" + data.string() + "' does not exist");
  }
}

const OscParams& RunConfig::oscillation() const {
  if (!params) {
    throw DomainError(std::string("no oscillation parameters configured; pass --params or set ") +
                      kConfigEnvVar);
  }
  return *params;
}

RunConfig run_config_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"mode", "params", "order", "allow_high_order", "tolerance",
                       "residual_mode", "pseudo", "data", "out_dir", "synthetic", "fit_curve"},
                      "");
  RunConfig c;
  if (j.contains("mode")) c.mode = mode_from_string(j.at("mode").get<std::string>());
  if (j.contains("params")) c.params = params_from_json(j.at("params"));
  read(j, "order", c.order);
  read(j, "allow_high_order", c.allow_high_order);
  read(j, "tolerance", c.tolerance);
  if (j.contains("residual_mode")) {
    const auto mode = j.at("residual_mode").get<std::string>();
    if (mode == "relative") c.residual_mode = ResidualMode::relative;
    else if (mode == "absolute") c.residual_mode = ResidualMode::absolute;
    else throw DomainError("residual_mode must be 'relative' or 'absolute'");
  }
  if (j.contains("pseudo")) {
    const json& p = j.at("pseudo");
    reject_unknown_keys(p,
                        {"replicas", "seed", "include_systematics", "sys_amplitude_sigma",
                         "sys_phase_sigma", "threads"},
                        "pseudo.");
    read(p, "replicas", c.pseudo.replicas);
    read(p, "seed", c.pseudo.seed);
    read(p, "include_systematics", c.pseudo.include_systematics);
    read(p, "sys_amplitude_sigma", c.pseudo.sys_amplitude_sigma);
    read(p, "sys_phase_sigma", c.pseudo.sys_phase_sigma);
    read(p, "threads", c.pseudo.threads);
  }
  if (j.contains("data")) c.data = j.at("data").get<std::string>();
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("synthetic")) {
    const json& s = j.at("synthetic");
    reject_unknown_keys(s,
                        {"truth", "bins", "e_min_gev", "e_max_gev", "rel_error", "seed", "flat_p",
                         "damping"},
                        "synthetic.");
    if (s.contains("truth")) c.synthetic.truth = truth_from_string(s.at("truth").get<std::string>());
    read(s, "bins", c.synthetic.bins);
    read(s, "e_min_gev", c.synthetic.e_min_gev);
    read(s, "e_max_gev", c.synthetic.e_max_gev);
    read(s, "rel_error", c.synthetic.rel_error);
    read(s, "seed", c.synthetic.seed);
    read(s, "flat_p", c.synthetic.flat_p);
    read(s, "damping", c.synthetic.damping);
  }
  read(j, "fit_curve", c.fit_curve);
  c.pseudo.tolerance = c.tolerance;
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["mode"] = std::string(to_string(c.mode));
  j["params"] = c.params ? params_to_json(*c.params) : json(nullptr);
  j["order"] = c.order;
  j["allow_high_order"] = c.allow_high_order;
  j["tolerance"] = c.tolerance;
  j["residual_mode"] = c.residual_mode == ResidualMode::relative ? "relative" : "absolute";
  j["pseudo"] = {{"replicas", c.pseudo.replicas},
                 {"seed", c.pseudo.seed},
                 {"include_systematics", c.pseudo.include_systematics},
                 {"sys_amplitude_sigma", c.pseudo.sys_amplitude_sigma},
                 {"sys_phase_sigma", c.pseudo.sys_phase_sigma}};
  j["data"] = c.data.generic_string();
  j["out_dir"] = c.out_dir.generic_string();
  j["synthetic"] = {{"truth", std::string(to_string(c.synthetic.truth))},
                    {"bins", c.synthetic.bins},
                    {"e_min_gev", c.synthetic.e_min_gev},
                    {"e_max_gev", c.synthetic.e_max_gev},
                    {"rel_error", c.synthetic.rel_error},
                    {"seed", c.synthetic.seed},
                    {"flat_p", c.synthetic.flat_p},
                    {"damping", c.synthetic.damping}};
  j["fit_curve"] = c.fit_curve;
  return j;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DomainError("config '" + path.string() + "': " + e.what());
  }
  RunConfig c = run_config_from_json(j);
  // Relative paths in a config file are relative to the file itself.
  const auto base = path.parent_path();
  if (!c.data.empty() && c.data.is_relative()) c.data = base / c.data;
  if (!c.out_dir.empty() && c.out_dir.is_relative()) c.out_dir = base / c.out_dir;
  return c;
}

SignificanceReport run_analysis(const RunConfig& config, std::vector<MeasuredPoint> points) {
  const OscParams& params = config.oscillation();
  SignificanceReport report;
  report.order = config.order;
  report.tolerance = config.tolerance;
  report.config = to_json(config);
  report.n_points = points.size();
  report.sd_floor = 1.0 / static_cast<double>(config.pseudo.replicas);
  if (config.pseudo.replicas < kMinReplicasForSignificance) {
    report.warnings.push_back("replicas below " + std::to_string(kMinReplicasForSignificance) +
                              "; significance is not meaningful");
  }

  if (points.size() < static_cast<std::size_t>(config.order)) {
    throw DataError("order " + std::to_string(config.order) + " needs at least " +
                    std::to_string(config.order) + " points, dataset has " +
                    std::to_string(points.size()));
  }
  const PhasedDataset dataset = attach_phases(std::move(points), params);
  const auto tuples = select_ntuples(dataset, config.order, config.tolerance, config.residual_mode);

  report.model_params = params;
  if (config.fit_curve) {
    report.model_params = fit_oscillation_curve(dataset, params);
    report.model_fitted = true;
  }

  std::vector<KValue> kvalues;
  kvalues.reserve(tuples.size());
  for (const PhaseTuple& t : tuples) {
    TupleRecord rec;
    rec.tuple = t;
    rec.k = evaluate_tuple(t, dataset);
    std::vector<double> scaled = rec.k.phases;
    const double scale = std::abs(report.model_params.dm2) / std::abs(params.dm2);
    for (double& psi : scaled) psi *= scale;
    rec.k_theory = k_n_quantum_theory(report.model_params.sin2_2theta, scaled).value;
    std::vector<double> corrs;
    for (std::size_t i : t.indices) corrs.push_back(2.0 * dataset[i].p_mumu - 1.0);
    rec.k_classical = k_n_classical(corrs).value;
    rec.violation = rec.k.value > lgi_bound(config.order);
    kvalues.push_back(rec.k);
    report.tuples.push_back(std::move(rec));
  }
  report.n_tuples = tuples.size();
  report.n_violations_observed = count_violations(kvalues, config.order);

  if (tuples.empty()) {
    report.status = "no_tuples";
    return report;
  }

  PseudoConfig pseudo = config.pseudo;
  pseudo.tolerance = config.tolerance;
  NullDistribution null = classical_null_distribution(dataset, tuples, pseudo);
  for (auto& w : null.warnings) report.warnings.push_back(std::move(w));
  const BetaBinomialFit fit = fit_beta_binomial(null.counts, null.trials);
  const ZScore z = z_significance(static_cast<double>(report.n_violations_observed), fit,
                                  report.sd_floor);
  report.null_fit = fit;
  report.z_score = z.z;
  report.z_used_sd_floor = z.used_sd_floor;
  if (z.used_sd_floor) {
    report.warnings.push_back("classical null has zero spread; z uses the sd floor 1/replicas");
  }
  report.null_counts = std::move(null.counts);

  const bool all_sigmas = std::all_of(kvalues.begin(), kvalues.end(),
                                      [](const KValue& k) { return k.uncertainty > 0.0; });
  if (all_sigmas) {
    const ChiSquare chi = chi_square_quantum(kvalues, report.model_params, params);
    report.chi2_quantum = chi.chi2;
    report.dof = chi.dof;
  } else {
    report.dof = static_cast<int>(kvalues.size()) - 1;
    report.warnings.push_back("some K values have zero uncertainty; chi2 not computed");
  }
  return report;
}

SignificanceReport run_analysis(const RunConfig& config) {
  config.validate();
  auto points = parse_dataset(config.data);
  SignificanceReport report = run_analysis(config, points);
  if (!config.out_dir.empty()) {
    write_artifacts(report, attach_phases(std::move(points), config.oscillation()),
                    config.out_dir);
  }
  return report;
}

json to_json(const SignificanceReport& r) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["status"] = r.status;
  j["order"] = r.order;
  j["tolerance"] = r.tolerance;
  j["lgi_bound"] = lgi_bound(r.order);
  j["n_points"] = r.n_points;
  j["n_tuples"] = r.n_tuples;
  j["n_violations_observed"] = r.n_violations_observed;
  j["null_fit"] = r.null_fit ? fit_to_json(*r.null_fit) : json(nullptr);
  j["z_score"] = r.z_score ? finite_or_null(*r.z_score) : json(nullptr);
  j["z_used_sd_floor"] = r.z_used_sd_floor;
  j["sd_floor"] = r.sd_floor;
  j["chi2_quantum"] = r.chi2_quantum ? json(*r.chi2_quantum) : json(nullptr);
  j["dof"] = r.dof;
  j["chi2_note"] = kChi2Note;
  j["model_params"] = params_to_json(r.model_params);
  j["model_fitted"] = r.model_fitted;
  j["config"] = r.config;
  j["warnings"] = r.warnings;
  json tuples = json::array();
  for (const TupleRecord& t : r.tuples) {
    tuples.push_back({{"components", t.tuple.indices},
                      {"target", t.tuple.target_index},
                      {"mismatch", t.tuple.mismatch},
                      {"phases", t.k.phases},
                      {"k", t.k.value},
                      {"k_uncertainty", t.k.uncertainty},
                      {"k_quantum_theory", t.k_theory},
                      {"k_classical", t.k_classical},
                      {"kind", std::string(to_string(t.k.kind))},
                      {"violation", t.violation}});
  }
  j["tuples"] = std::move(tuples);
  if (!r.null_counts.empty()) {
    const auto [lo, hi] = std::minmax_element(r.null_counts.begin(), r.null_counts.end());
    j["null_replicas"] = r.null_counts.size();
    j["null_min"] = *lo;
    j["null_max"] = *hi;
  }
  return j;
}

void emit_report(const SignificanceReport& report, const std::filesystem::path& path) {
  std::ofstream out;
  open_for_write(out, path);
  out << to_json(report).dump(2) << '\n';
  if (!out) throw IoError("failed writing report '" + path.string() + "'");
}

void write_tuples(std::ostream& out, const PhasedDataset& dataset,
                  std::span<const TupleRecord> records) {
  out << "n,components,target,component_phases,target_phase,phase_sum,mismatch,k,"
         "k_uncertainty,k_quantum_theory,k_classical,violation\n";
  for (const TupleRecord& r : records) {
    const double sum = std::accumulate(r.k.phases.begin(), r.k.phases.end(), 0.0);
    out << r.tuple.n << ',' << join(r.tuple.indices) << ',' << r.tuple.target_index << ','
        << join(r.k.phases) << ',' << format_double(dataset[r.tuple.target_index].psi) << ','
        << format_double(sum) << ',' << format_double(r.tuple.mismatch) << ','
        << format_double(r.k.value) << ',' << format_double(r.k.uncertainty) << ','
        << format_double(r.k_theory) << ',' << format_double(r.k_classical) << ','
        << (r.violation ? 1 : 0) << '\n';
  }
}

void write_artifacts(const SignificanceReport& report, const PhasedDataset& dataset,
                     const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "'");

  emit_report(report, out_dir / "report.json");

  std::ofstream out;
  open_for_write(out, out_dir / "tuples.csv");
  write_tuples(out, dataset, report.tuples);
  out.close();

  open_for_write(out, out_dir / "null_histogram.csv");
  out << "violations,replicas\n";
  std::map<std::uint32_t, std::uint64_t> histogram;
  for (std::uint32_t c : report.null_counts) ++histogram[c];
  for (const auto& [count, replicas] : histogram) out << count << ',' << replicas << '\n';
  out.close();

  const OscParams& model = report.model_params;
  open_for_write(out, out_dir / "spectrum.csv");
  out << "energy_gev,psi,p_mumu,sigma_total,p_model\n";
  for (const MeasuredPoint& p : dataset.points()) {
    out << format_double(p.energy_gev) << ',' << format_double(p.psi) << ','
        << format_double(p.p_mumu) << ',' << format_double(p.sigma_total()) << ','
        << format_double(vacuum_survival_probability(model, p.energy_gev)) << '\n';
  }
  out.close();

  open_for_write(out, out_dir / "model_curve.csv");
  const double e_lo = dataset.points().front().energy_gev;
  const double e_hi = dataset.points().back().energy_gev;
  std::vector<double> energies;
  if (e_hi > e_lo) {
    energies = log_spaced_energies(400, e_lo, e_hi);
  } else {
    energies = {e_lo};
  }
  write_curve(out, model_curve(model, energies));
  out.close();

  open_for_write(out, out_dir / "k_vs_phase.csv");
  out << "phase_sum,k_data,k_uncertainty,k_quantum_theory,k_classical,violation\n";
  for (const TupleRecord& r : report.tuples) {
    const double sum = std::accumulate(r.k.phases.begin(), r.k.phases.end(), 0.0);
    out << format_double(sum) << ',' << format_double(r.k.value) << ','
        << format_double(r.k.uncertainty) << ',' << format_double(r.k_theory) << ','
        << format_double(r.k_classical) << ',' << (r.violation ? 1 : 0) << '\n';
  }
}

std::vector<CurveRow> model_curve(const OscParams& params, std::span<const double> energies) {
  params.validate();
  std::vector<CurveRow> rows;
  rows.reserve(energies.size());
  for (double e : energies) {
    rows.push_back({e, accumulated_phase(params, e), vacuum_survival_probability(params, e),
                    survival_probability(params, e)});
  }
  return rows;
}

double max_matter_deviation(std::span<const CurveRow> rows) {
  double worst = 0.0;
  for (const CurveRow& r : rows) worst = std::max(worst, std::abs(r.p_vacuum - r.p_matter));
  return worst;
}

void write_curve(std::ostream& out, std::span<const CurveRow> rows) {
  out << "energy_gev,psi,p_vacuum,p_matter,delta_p\n";
  for (const CurveRow& r : rows) {
    out << format_double(r.energy_gev) << ',' << format_double(r.psi) << ','
        << format_double(r.p_vacuum) << ',' << format_double(r.p_matter) << ','
        << format_double(r.p_matter - r.p_vacuum) << '\n';
  }
}

}  // namespace lgosc
