#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ptlindblad/spectral.hpp"
#include "ptlindblad/xxz.hpp"

namespace ptlindblad {

enum class Sector { Full, DMz0 };

/// Liouvillian as a function of the coupling, already restricted to the
/// sector of interest.
using GammaFamily = std::function<SuperOperator(double gamma)>;

GammaFamily xxz_family(const XXZParams& base, Sector sector);
GammaFamily model_family(const LindbladModel& base, std::vector<BasisPair> sector = {});

struct UnbrokenResult {
  bool unbroken = false;
  CrossClassification classification;
  double gamma_bar = 0.0;
  /// max over eigenvalues of min(|Im lambda|, |Re lambda + gamma_bar|)
  double max_cross_distance = 0.0;
};

UnbrokenResult is_unbroken(const SuperOperator& liou, double tau_rel = 1e-8);
UnbrokenResult is_unbroken(const XXZParams& p, Sector sector, double tau_rel = 1e-8);

struct Evaluation {
  double gamma = 0.0;
  std::size_t off_cross = 0;
  double max_cross_distance = 0.0;
  bool unbroken = false;
};

/// gamma_low < gamma_pt <= gamma_high, off_cross(gamma_low) = 0 < off_cross(gamma_high).
struct ThresholdResult {
  double gamma_pt = 0.0;
  double gamma_low = 0.0;
  double gamma_high = 0.0;
  std::vector<Evaluation> evaluations;  ///< every predicate evaluation, in order
  double tau_rel = 1e-8;
};

struct ThresholdOptions {
  double gamma_min = 1e-3;
  double gamma_max = 1.0;
  double rel_precision = 1e-3;
  double tau_rel = 1e-8;
  int points_per_decade = 8;
  int max_expansion_decades = 3;
};

/// Sweeps a logarithmic grid from gamma_min upward, takes the first broken
/// grid point and bisects (geometrically) against the preceding unbroken one.
/// The predicate is not assumed monotone; the result is the first breaking
/// point encountered.  When gamma_min is already broken the bracket is
/// expanded downward, and when nothing breaks up to gamma_max it is expanded
/// upward, by at most max_expansion_decades each.  Throws BracketInvalid after that.
ThresholdResult find_gamma_pt(const GammaFamily& family, const ThresholdOptions& opts = {});
ThresholdResult find_gamma_pt(const XXZParams& family, Sector sector, const ThresholdOptions& opts = {});

struct ScalingRow {
  int n = 0;
  std::string status;  ///< "ok", "broken_at_min" or "unbroken_at_max"
  double gamma_pt = 0.0;  ///< NaN unless status == "ok"
  double gamma_low = 0.0;
  double gamma_high = 0.0;
  double heuristic = 0.0;  ///< 1 / (||D'|| d^2)
  std::size_t evaluations = 0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  double slope = 0.0;  ///< least-squares slope of ln gamma_pt vs n over "ok" rows; NaN if fewer than two
  double intercept = 0.0;
  std::size_t fitted_points = 0;
};

/// n_list must be a subset of {2,3,4,5}.  Thresholds are located in the
/// dMz = 0 sector.
ScalingResult scaling_study(const std::vector<int>& n_list, double delta, double mu, const ThresholdOptions& opts = {});

struct DecayResult {
  std::vector<double> times;
  std::vector<double> deviations;  ///< tr[(rho(t) - rho_inf) obs]
  /// Decay rate from an exponential-sum (matrix pencil) fit of the window,
  /// weighted by mode amplitude; equals log_regression_rate on non-uniform grids.
  double fitted_rate = 0.0;
  /// Negative slope of a least-squares line through ln|deviation|.
  double log_regression_rate = 0.0;
  /// Largest |rate_k - fitted_rate| among modes carrying >= 1% of the amplitude.
  double rate_spread = 0.0;
  std::vector<Complex> poles;       ///< fitted exponents s_k
  std::vector<Complex> amplitudes;  ///< matching amplitudes
  double window_start = 0.0;
  double window_end = 0.0;
  std::string method;
};

/// (1 + 0.5 obs / ||obs||_2) / N
ComplexMatrix decay_initial_state(const ComplexMatrix& obs);

/// Evolves rho0 with exp(t L) and records tr[(rho(t) - rho_inf) obs] on the
/// (strictly increasing) grid.  The fit window drops the first 5% of the
/// grid span and stops at the last sample with |deviation| > 1e-10.
DecayResult observable_decay(const XXZParams& p, const ComplexMatrix& obs, const ComplexMatrix& rho0,
                             const std::vector<double>& t_grid);
DecayResult observable_decay(const LindbladModel& model, const ComplexMatrix& obs, const ComplexMatrix& rho0,
                             const std::vector<double>& t_grid);

/// Exponential-sum fit y_i ~ sum_k a_k exp(s_k i dt) (matrix pencil).
struct ExponentialFit {
  std::vector<Complex> exponents;
  std::vector<Complex> amplitudes;
};
ExponentialFit matrix_pencil_fit(const std::vector<double>& samples, double dt, double rank_tol = 1e-10);

}  // namespace ptlindblad
