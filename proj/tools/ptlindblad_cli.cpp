// ptlindblad: spectra, symmetry checks, perturbative rates and thresholds of
// Lindblad generators.  Exit codes: 0 ok, 1 invalid input, 2 numerical failure.

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptlindblad/errors.hpp"
#include "ptlindblad/io.hpp"
#include "ptlindblad/perturbation.hpp"
#include "ptlindblad/spectral.hpp"
#include "ptlindblad/symmetry.hpp"
#include "ptlindblad/threshold.hpp"

using namespace ptlindblad;
using nlohmann::json;

namespace {

constexpr double kTauRel = 1e-8;
constexpr double kDegeneracyRel = 1e-8;

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json base_report(const ModelConfig& cfg, const std::string& command) {
  return {{"command", command}, {"config", cfg.source}};
}

int cmd_spectrum(const ModelConfig& cfg, const std::string& out) {
  const SpectralDecomposition dec = eig_biortho(config_liouvillian(cfg), kDegeneracyRel);
  write_text(out, format_spectrum_csv(dec));
  return 0;
}

int cmd_check(const ModelConfig& cfg, const std::string& out) {
  const SuperOperator liou = config_liouvillian(cfg);
  const SpectralDecomposition dec = eig_biortho(liou, kDegeneracyRel);
  const double gbar = average_damping(liou);
  json r = base_report(cfg, "check");
  r["tolerances"] = {{"tau_rel", kTauRel}, {"degeneracy_rel", kDegeneracyRel}};
  r["dimension"] = liou.dim();
  r["gamma_bar"] = gbar;
  r["spectral_radius"] = dec.spectral_radius;
  r["cross"] = to_json(classify_cross(dec, gbar, kTauRel));
  r["d2"] = to_json(verify_d2(dec, gbar));
  if (const auto parity = config_parity(cfg)) {
    r["symmetry"] = to_json(check_pt(liou, *parity));
    r["partners"] = to_json(pt_partner_check(dec, *parity, gbar));
  } else {
    r["symmetry"] = nullptr;
    r["partners"] = nullptr;
  }
  const SuperOperator full = build_superoperator(config_model(cfg));
  r["hermiticity_residual"] = hermiticity_residual(full);
  write_text(out, dump(r));
  return 0;
}

int cmd_perturb(const ModelConfig& cfg, const std::string& out, const std::string& report) {
  const LindbladModel model = config_model(cfg);
  const auto conserved = config_conserved(cfg);
  const PerturbationReport pr = population_matrix(model, conserved);
  std::vector<std::string> header;
  for (Eigen::Index k = 0; k < pr.v.cols(); ++k) header.push_back("c" + std::to_string(k));
  std::vector<std::vector<double>> rows;
  for (Eigen::Index j = 0; j < pr.v.rows(); ++j) {
    std::vector<double> row;
    for (Eigen::Index k = 0; k < pr.v.cols(); ++k) row.push_back(pr.v(j, k));
    rows.push_back(row);
  }
  write_text(out, format_csv(header, rows));

  json r = base_report(cfg, "perturb");
  r["tolerances"] = {{"degeneracy_tol", "1e-9 * ||H||_2"}};
  r["xi"] = complex_json(pr.xi);
  r["symmetry_defect"] = pr.symmetry_defect;
  r["reality_defect"] = pr.reality_defect;
  r["column_sum_defect"] = pr.column_sum_defect;
  r["degeneracy"] = to_json(degeneracy_report(model.hamiltonian, -1.0, conserved));
  if (!report.empty()) write_text(report, dump(r));
  return 0;
}

ThresholdOptions threshold_options(double gmin, double gmax, double precision) {
  ThresholdOptions o;
  o.gamma_min = gmin;
  o.gamma_max = gmax;
  o.rel_precision = precision;
  o.tau_rel = kTauRel;
  return o;
}

int cmd_threshold(const ModelConfig& cfg, const std::string& out, double gmin, double gmax, double precision) {
  const ThresholdOptions o = threshold_options(gmin, gmax, precision);
  const ThresholdResult res = find_gamma_pt(model_family(config_model(cfg), config_sector(cfg)), o);
  json r = base_report(cfg, "threshold");
  r["tolerances"] = {{"tau_rel", o.tau_rel},
                     {"rel_precision", o.rel_precision},
                     {"gamma_min", o.gamma_min},
                     {"gamma_max", o.gamma_max},
                     {"points_per_decade", o.points_per_decade}};
  r["result"] = to_json(res);
  write_text(out, dump(r));
  return 0;
}

ComplexMatrix observable(const ModelConfig& cfg, const std::string& name) {
  const auto n = static_cast<std::size_t>(config_model(cfg).dim());
  int sites = 0;
  while ((std::size_t{1} << sites) < n) ++sites;
  const bool chain = (std::size_t{1} << sites) == n;
  if (name == "current") {
    if (cfg.model != ModelKind::XXZ) throw InvalidArgument("observable 'current' needs an xxz model");
    return spin_current(cfg.n);
  }
  if (!chain) throw InvalidArgument("observable '" + name + "' needs a spin-chain Hilbert space");
  if (name == "sx1") return site_operator(Pauli::X, 1, sites);
  if (name == "sz1") return site_operator(Pauli::Z, 1, sites);
  if (name == "mz") return total_magnetization(sites);
  throw InvalidArgument("unknown observable '" + name + "' (current, sx1, sz1, mz)");
}

int cmd_evolve(const ModelConfig& cfg, const std::string& out, const std::string& report, const std::string& obs_name,
               double t0, double t1, int steps) {
  if (steps < 2) throw InvalidArgument("--steps must be >= 2");
  if (!(t1 > t0) || t0 < 0.0) throw InvalidArgument("need 0 <= t0 < t1");
  const ComplexMatrix obs = observable(cfg, obs_name);
  std::vector<double> grid;
  for (int i = 0; i < steps; ++i) grid.push_back(t0 + (t1 - t0) * i / (steps - 1));
  const DecayResult d = observable_decay(config_model(cfg), obs, decay_initial_state(obs), grid);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < d.times.size(); ++i) rows.push_back({d.times[i], d.deviations[i]});
  write_text(out, format_csv({"t", "deviation"}, rows));

  json r = base_report(cfg, "evolve");
  r["observable"] = obs_name;
  r["tolerances"] = {{"window_skip_fraction", 0.05}, {"deviation_floor", 1e-10}, {"pencil_rank_tol", 1e-10}};
  r["method"] = d.method;
  r["fitted_rate"] = real_json(d.fitted_rate);
  r["log_regression_rate"] = real_json(d.log_regression_rate);
  r["rate_spread"] = real_json(d.rate_spread);
  r["window"] = {d.window_start, d.window_end};
  json modes = json::array();
  for (std::size_t k = 0; k < d.poles.size(); ++k) {
    modes.push_back({{"exponent", complex_json(d.poles[k])}, {"amplitude", complex_json(d.amplitudes[k])}});
  }
  r["modes"] = modes;
  if (!report.empty()) write_text(report, dump(r));
  return 0;
}

std::vector<int> parse_n_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoi(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("--n-list: '" + item + "' is not an integer");
    }
  }
  return out;
}

int cmd_scaling(const ModelConfig& cfg, const std::string& out, const std::string& report, const std::string& n_list,
                double gmin, double gmax, double precision) {
  const XXZParams p = xxz_params(cfg);
  const ThresholdOptions o = threshold_options(gmin, gmax, precision);
  const ScalingResult res = scaling_study(parse_n_list(n_list), p.delta, p.mu, o);
  std::vector<std::vector<double>> rows;
  for (const auto& row : res.rows) {
    rows.push_back({static_cast<double>(row.n), row.gamma_pt, row.gamma_low, row.gamma_high, row.heuristic});
  }
  write_text(out, format_csv({"n", "gamma_pt", "gamma_low", "gamma_high", "heuristic"}, rows));
  json r = base_report(cfg, "scaling");
  r["tolerances"] = {{"tau_rel", o.tau_rel},
                     {"rel_precision", o.rel_precision},
                     {"gamma_min", o.gamma_min},
                     {"gamma_max", o.gamma_max}};
  r["fit"] = to_json(res);
  if (!report.empty()) write_text(report, dump(r));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Liouvillian spectra, PT-symmetry checks and breaking thresholds"};
  app.require_subcommand(1);

  std::string config, out, report, obs = "current", n_list = "2,3,4";
  double gmin = 1e-3, gmax = 1.0, precision = 1e-3, t0 = 0.5, t1 = 50.0;
  int steps = 1000;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "model configuration (JSON)")->required();
    sub->add_option("--out", out, "output file (default stdout)");
  };
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalue CSV");
  add_common(spectrum);
  auto* check = app.add_subcommand("check", "symmetry, D2 and cross-classification report");
  add_common(check);
  auto* perturb = app.add_subcommand("perturb", "first-order population matrix V");
  add_common(perturb);
  perturb->add_option("--report", report, "JSON report with xi and degeneracies");
  auto* threshold = app.add_subcommand("threshold", "locate the PT-breaking coupling");
  add_common(threshold);
  auto* evolve = app.add_subcommand("evolve", "observable relaxation time series");
  add_common(evolve);
  evolve->add_option("--report", report, "JSON report with fitted rates");
  evolve->add_option("--observable", obs, "current | sx1 | sz1 | mz");
  evolve->add_option("--t0", t0);
  evolve->add_option("--t1", t1);
  evolve->add_option("--steps", steps);
  auto* scaling = app.add_subcommand("scaling", "threshold versus chain length");
  add_common(scaling);
  scaling->add_option("--report", report, "JSON report with the fit");
  scaling->add_option("--n-list", n_list, "comma-separated chain lengths");
  for (auto* sub : {threshold, scaling}) {
    sub->add_option("--gamma-min", gmin);
    sub->add_option("--gamma-max", gmax);
    sub->add_option("--precision", precision, "relative bracket width");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_json("UsageError", e.what()).dump() << "\n";
    return 1;
  }

  try {
    const ModelConfig cfg = parse_config_file(config);
    if (spectrum->parsed()) return cmd_spectrum(cfg, out);
    if (check->parsed()) return cmd_check(cfg, out);
    if (perturb->parsed()) return cmd_perturb(cfg, out, report);
    if (threshold->parsed()) return cmd_threshold(cfg, out, gmin, gmax, precision);
    if (evolve->parsed()) return cmd_evolve(cfg, out, report, obs, t0, t1, steps);
    if (scaling->parsed()) return cmd_scaling(cfg, out, report, n_list, gmin, gmax, precision);
  } catch (const ValidationError& e) {
    std::cerr << error_json(e.kind(), e.what()).dump() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << error_json(e.kind(), e.what()).dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << error_json("InternalError", e.what()).dump() << "\n";
    return 2;
  }
  return 1;
}
