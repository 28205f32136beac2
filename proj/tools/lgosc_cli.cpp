// lgosc: Leggett-Garg analysis of fixed-baseline neutrino oscillation spectra.
//
//   lgosc curve    --params cfg.json [--bins N --emin E --emax E]
//   lgosc simulate --params cfg.json --truth quantum --bins 30 --rel-error 0.05
//   lgosc triples  --params cfg.json --data spectrum.csv [--order 4]
//   lgosc analyze  --params cfg.json --data spectrum.csv --out-dir results/

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lgosc/analysis.hpp"
#include "lgosc/dataset_io.hpp"
#include "lgosc/error.hpp"

namespace {

using namespace lgosc;

struct Overrides {
  std::string params_path;
  std::optional<std::string> data;
  std::optional<int> order;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> replicas;
  std::optional<std::uint64_t> seed;
  bool systematics = false;
  std::optional<double> sys_amplitude;
  std::optional<double> sys_phase;
  std::optional<unsigned> threads;
  std::optional<std::string> out_dir;
  std::optional<std::string> truth;
  std::optional<int> bins;
  std::optional<double> emin;
  std::optional<double> emax;
  std::optional<double> rel_error;
  std::optional<double> flat_p;
  std::optional<double> damping;
  bool fit_curve = false;
  bool absolute_residual = false;
  bool allow_high_order = false;
  std::optional<double> dm2;
  std::optional<double> sin2_2theta;
  std::optional<double> baseline_km;
  std::optional<double> v_c;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--params", o.params_path,
                  std::string("Run configuration JSON (default: $") + kConfigEnvVar + ")");
  cmd->add_option("--dm2", o.dm2, "Mass-squared splitting [eV^2]");
  cmd->add_option("--sin2-2theta", o.sin2_2theta, "Mixing amplitude sin^2(2 theta)");
  cmd->add_option("--baseline", o.baseline_km, "Baseline [km]");
  cmd->add_option("--vc", o.v_c, "Charged-current potential [eV]");
  cmd->add_option("--out-dir", o.out_dir, "Directory for output files (default: stdout)");
}

void add_selection(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--data", o.data, "Spectrum CSV (energy_gev,p_mumu,sigma_stat[,sigma_sys])");
  cmd->add_option("--order", o.order, "Leggett-Garg order n");
  cmd->add_option("--tolerance", o.tolerance, "Sum-rule tolerance (relative fraction)");
  cmd->add_flag("--absolute-residual", o.absolute_residual,
                "Interpret the tolerance in radians instead of relative to the target phase");
  cmd->add_flag("--allow-high-order", o.allow_high_order, "Permit orders above 4");
}

void add_spectrum(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--bins", o.bins, "Number of log-spaced energies");
  cmd->add_option("--emin", o.emin, "Lowest energy [GeV]");
  cmd->add_option("--emax", o.emax, "Highest energy [GeV]");
}

RunConfig build_config(Mode mode, const Overrides& o) {
  std::string path = o.params_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnvVar)) path = env;
  }
  RunConfig c = path.empty() ? RunConfig{} : load_run_config(path);
  c.mode = mode;

  if (o.dm2 || o.sin2_2theta || o.baseline_km || o.v_c) {
    OscParams p = c.params.value_or(OscParams{});
    if (o.dm2) p.dm2 = *o.dm2;
    if (o.sin2_2theta) p.sin2_2theta = *o.sin2_2theta;
    if (o.baseline_km) p.baseline_km = *o.baseline_km;
    if (o.v_c) p.v_c = *o.v_c;
    c.params = p;
  }
  if (o.data) c.data = *o.data;
  if (o.order) c.order = *o.order;
  if (o.allow_high_order) c.allow_high_order = true;
  if (o.tolerance) c.tolerance = *o.tolerance;
  if (o.absolute_residual) c.residual_mode = ResidualMode::absolute;
  if (o.replicas) c.pseudo.replicas = *o.replicas;
  if (o.seed) {
    if (mode == Mode::simulate) c.synthetic.seed = *o.seed;
    else c.pseudo.seed = *o.seed;
  }
  if (o.systematics) c.pseudo.include_systematics = true;
  if (o.sys_amplitude) c.pseudo.sys_amplitude_sigma = *o.sys_amplitude;
  if (o.sys_phase) c.pseudo.sys_phase_sigma = *o.sys_phase;
  if (o.threads) c.pseudo.threads = *o.threads;
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.truth) c.synthetic.truth = truth_from_string(*o.truth);
  if (o.bins) c.synthetic.bins = *o.bins;
  if (o.emin) c.synthetic.e_min_gev = *o.emin;
  if (o.emax) c.synthetic.e_max_gev = *o.emax;
  if (o.rel_error) c.synthetic.rel_error = *o.rel_error;
  if (o.flat_p) c.synthetic.flat_p = *o.flat_p;
  if (o.damping) c.synthetic.damping = *o.damping;
  if (o.fit_curve) c.fit_curve = true;
  c.pseudo.tolerance = c.tolerance;
  c.validate();
  c.oscillation();
  return c;
}

// Writes to out_dir/name when an output directory is configured, else stdout.
template <typename Fn>
void emit(const RunConfig& c, const std::string& name, Fn&& write) {
  if (c.out_dir.empty()) {
    write(std::cout);
    return;
  }
  std::filesystem::create_directories(c.out_dir);
  const auto path = c.out_dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write(out);
  std::cerr << "wrote " << path.string() << '\n';
}

int run_curve(const RunConfig& c) {
  const auto energies =
      log_spaced_energies(c.synthetic.bins, c.synthetic.e_min_gev, c.synthetic.e_max_gev);
  const auto rows = model_curve(c.oscillation(), energies);
  emit(c, "curve.csv", [&](std::ostream& out) { write_curve(out, rows); });
  std::cerr << "max |P_vacuum - P_matter| = " << format_double(max_matter_deviation(rows))
            << " (v_c = " << format_double(c.oscillation().v_c) << " eV)\n";
  return 0;
}

int run_simulate(const RunConfig& c) {
  const auto points = generate_synthetic(c.oscillation(), c.synthetic);
  emit(c, "synthetic.csv", [&](std::ostream& out) { write_dataset(out, points); });
  return 0;
}

int run_triples(const RunConfig& c) {
  const auto dataset = attach_phases(parse_dataset(c.data), c.oscillation());
  const auto tuples = select_ntuples(dataset, c.order, c.tolerance, c.residual_mode);
  std::vector<TupleRecord> records;
  for (const PhaseTuple& t : tuples) {
    TupleRecord r;
    r.tuple = t;
    r.k = evaluate_tuple(t, dataset);
    r.k_theory = k_n_quantum_theory(c.oscillation().sin2_2theta, r.k.phases).value;
    std::vector<double> corrs;
    for (std::size_t i : t.indices) corrs.push_back(2.0 * dataset[i].p_mumu - 1.0);
    r.k_classical = k_n_classical(corrs).value;
    r.violation = r.k.value > lgi_bound(c.order);
    records.push_back(std::move(r));
  }
  emit(c, "tuples.csv", [&](std::ostream& out) { write_tuples(out, dataset, records); });
  std::cerr << records.size() << " tuples of order " << c.order << '\n';
  return records.empty() ? static_cast<int>(ExitCode::no_tuples) : 0;
}

int run_analyze(const RunConfig& c) {
  const SignificanceReport report = run_analysis(c);
  if (c.out_dir.empty()) {
    std::cout << to_json(report).dump(2) << '\n';
  } else {
    std::cerr << "wrote artifacts to " << c.out_dir.string() << '\n';
  }
  std::cerr << "K_" << report.order << ": " << report.n_violations_observed << " of "
            << report.n_tuples << " tuples violate the bound";
  if (report.z_score) std::cerr << ", z = " << format_double(*report.z_score);
  if (report.chi2_quantum) {
    std::cerr << ", chi2_Q = " << format_double(*report.chi2_quantum) << " / " << report.dof;
  }
  std::cerr << '\n';
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  return report.status == "no_tuples" ? static_cast<int>(ExitCode::no_tuples) : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leggett-Garg inequality analysis of two-flavor neutrino oscillation spectra"};
  app.require_subcommand(1);
  Overrides o;

  auto* curve = app.add_subcommand("curve", "Model survival probability versus energy");
  add_common(curve, o);
  add_spectrum(curve, o);

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic spectrum");
  add_common(simulate, o);
  add_spectrum(simulate, o);
  simulate->add_option("--truth", o.truth, "quantum | classical_flat | classical_markov");
  simulate->add_option("--rel-error", o.rel_error, "Relative measurement error");
  simulate->add_option("--seed", o.seed, "Random seed");
  simulate->add_option("--flat-p", o.flat_p, "Survival probability of the classical_flat truth");
  simulate->add_option("--damping", o.damping, "Correlation decay per radian (classical_markov)");

  auto* triples = app.add_subcommand("triples", "Enumerate sum-rule phase tuples");
  add_common(triples, o);
  add_selection(triples, o);

  auto* analyze = app.add_subcommand("analyze", "Full LGI significance analysis");
  add_common(analyze, o);
  add_selection(analyze, o);
  analyze->add_option("--replicas", o.replicas, "Pseudo-experiments for the classical null");
  analyze->add_option("--seed", o.seed, "Pseudo-experiment seed");
  analyze->add_flag("--systematics", o.systematics, "Include amplitude and phase nuisances");
  analyze->add_option("--sys-amplitude", o.sys_amplitude, "Relative amplitude nuisance sigma");
  analyze->add_option("--sys-phase", o.sys_phase, "Relative phase-scale nuisance sigma");
  analyze->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  analyze->add_flag("--fit-curve", o.fit_curve,
                    "Fit dm2 and sin^2(2 theta) to the spectrum for the model curve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::domain_error);
  }

  try {
    if (*curve) return run_curve(build_config(Mode::curve, o));
    if (*simulate) return run_simulate(build_config(Mode::simulate, o));
    if (*triples) return run_triples(build_config(Mode::triples, o));
    if (*analyze) return run_analyze(build_config(Mode::analyze, o));
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::data_error);
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::data_error);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::domain_error);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
