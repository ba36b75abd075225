#include "ptlindblad/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ptlindblad/errors.hpp"
#include "ptlindblad/perturbation.hpp"

namespace ptlindblad {

GammaFamily xxz_family(const XXZParams& base, Sector sector) {
  base.validate();
  std::vector<BasisPair> labels;
  if (sector == Sector::DMz0) labels = sector_basis(base.n, 0);
  return [base, labels](double gamma) {
    XXZParams p = base;
    p.gamma = gamma;
    SuperOperator l = build_superoperator(xxz_model(p));
    return labels.empty() ? l : sector_restrict(l, labels);
  };
}

GammaFamily model_family(const LindbladModel& base, std::vector<BasisPair> sector) {
  base.validate();
  return [base, sector = std::move(sector)](double gamma) {
    LindbladModel m = base;
    m.gamma = gamma;
    SuperOperator l = build_superoperator(m);
    return sector.empty() ? l : sector_restrict(l, sector);
  };
}

UnbrokenResult is_unbroken(const SuperOperator& liou, double tau_rel) {
  const SpectralDecomposition dec = eig_biortho(liou);
  UnbrokenResult r;
  r.gamma_bar = average_damping(liou);
  r.classification = classify_cross(dec, r.gamma_bar, tau_rel);
  r.unbroken = r.classification.off_cross.empty();
  for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i) {
    const Complex lam = dec.eigenvalues(i);
    r.max_cross_distance =
        std::max(r.max_cross_distance, std::min(std::abs(lam.imag()), std::abs(lam.real() + r.gamma_bar)));
  }
  return r;
}

UnbrokenResult is_unbroken(const XXZParams& p, Sector sector, double tau_rel) {
  return is_unbroken(xxz_family(p, sector)(p.gamma), tau_rel);
}

namespace {

enum class ScanStatus { Ok, BrokenAtMin, UnbrokenAtMax };

struct Scan {
  ScanStatus status = ScanStatus::Ok;
  ThresholdResult result;
};

Scan scan_threshold(const GammaFamily& family, const ThresholdOptions& opts) {
  if (!(opts.gamma_min > 0.0) || !(opts.gamma_max > opts.gamma_min)) {
    throw InvalidArgument("find_gamma_pt: need 0 < gamma_min < gamma_max");
  }
  if (!(opts.rel_precision > 0.0 && opts.rel_precision < 1.0)) {
    throw InvalidArgument("find_gamma_pt: rel_precision must lie in (0, 1)");
  }
  if (opts.points_per_decade < 1) throw InvalidArgument("find_gamma_pt: points_per_decade must be >= 1");

  Scan scan;
  scan.result.tau_rel = opts.tau_rel;
  auto& evals = scan.result.evaluations;
  auto evaluate = [&](double g) {
    const UnbrokenResult u = is_unbroken(family(g), opts.tau_rel);
    evals.push_back({g, u.classification.off_cross.size(), u.max_cross_distance, u.unbroken});
    return u.unbroken;
  };

  const double step = std::pow(10.0, 1.0 / opts.points_per_decade);
  // lower end: expand downward while broken
  double lo = opts.gamma_min;
  bool lo_ok = evaluate(lo);
  for (int d = 0; !lo_ok && d < opts.max_expansion_decades; ++d) {
    lo /= 10.0;
    lo_ok = evaluate(lo);
  }
  if (!lo_ok) {
    scan.status = ScanStatus::BrokenAtMin;
    scan.result.gamma_high = lo;
    return scan;
  }

  // sweep upward on the logarithmic grid
  const double ceiling = opts.gamma_max * std::pow(10.0, opts.max_expansion_decades);
  double prev = lo;
  double hi = 0.0;
  for (int i = 1;; ++i) {
    double g = lo * std::pow(step, i);
    if (g > ceiling * (1.0 + 1e-12)) break;
    if (g > opts.gamma_max && prev < opts.gamma_max) g = opts.gamma_max;  // land exactly on gamma_max once
    if (!evaluate(g)) {
      hi = g;
      break;
    }
    prev = g;
    if (g >= opts.gamma_max && g == opts.gamma_max) {
      // continue past gamma_max on the same grid (expansion)
      lo = g;
      i = 0;
    }
  }
  if (hi == 0.0) {
    scan.status = ScanStatus::UnbrokenAtMax;
    scan.result.gamma_low = prev;
    return scan;
  }

  double a = prev, b = hi;
  while ((b - a) / b > opts.rel_precision) {
    const double mid = std::sqrt(a * b);
    if (evaluate(mid)) {
      a = mid;
    } else {
      b = mid;
    }
  }
  scan.result.gamma_low = a;
  scan.result.gamma_high = b;
  scan.result.gamma_pt = std::sqrt(a * b);
  return scan;
}

}  // namespace

ThresholdResult find_gamma_pt(const GammaFamily& family, const ThresholdOptions& opts) {
  Scan scan = scan_threshold(family, opts);
  if (scan.status == ScanStatus::BrokenAtMin) {
    std::ostringstream os;
    os << "spectrum is already off the cross at gamma = " << scan.result.gamma_high
       << " (lowest coupling tried); no unbroken lower bracket";
    throw BracketInvalid(os.str());
  }
  if (scan.status == ScanStatus::UnbrokenAtMax) {
    std::ostringstream os;
    os << "spectrum stays on the cross up to gamma = " << scan.result.gamma_low << "; no broken upper bracket";
    throw BracketInvalid(os.str());
  }
  return scan.result;
}

ThresholdResult find_gamma_pt(const XXZParams& family, Sector sector, const ThresholdOptions& opts) {
  return find_gamma_pt(xxz_family(family, sector), opts);
}

ScalingResult scaling_study(const std::vector<int>& n_list, double delta, double mu, const ThresholdOptions& opts) {
  if (n_list.empty()) throw InvalidArgument("scaling_study: empty chain-length list");
  for (int n : n_list) {
    if (n < 2 || n > 5) throw InvalidArgument("scaling_study: chain lengths must be in {2,3,4,5}");
  }
  ScalingResult out;
  std::vector<double> xs, ys;
  for (int n : n_list) {
    XXZParams p{n, delta, mu, 0.0};
    const Scan scan = scan_threshold(xxz_family(p, Sector::DMz0), opts);
    ScalingRow row;
    row.n = n;
    row.evaluations = scan.result.evaluations.size();
    row.gamma_low = scan.result.gamma_low;
    row.gamma_high = scan.result.gamma_high;
    row.gamma_pt = std::numeric_limits<double>::quiet_NaN();
    switch (scan.status) {
      case ScanStatus::Ok:
        row.status = "ok";
        row.gamma_pt = scan.result.gamma_pt;
        xs.push_back(n);
        ys.push_back(std::log(row.gamma_pt));
        break;
      case ScanStatus::BrokenAtMin:
        row.status = "broken_at_min";
        break;
      case ScanStatus::UnbrokenAtMax:
        row.status = "unbroken_at_max";
        break;
    }
    p.gamma = 1.0;
    const LindbladModel model = xxz_model(p);
    row.heuristic = heuristic_gamma_pt(traceless_dissipator(model), model.hamiltonian);
    out.rows.push_back(row);
  }
  out.fitted_points = xs.size();
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.intercept = (sy - out.slope * sx) / n;
  } else {
    out.slope = std::numeric_limits<double>::quiet_NaN();
    out.intercept = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

ComplexMatrix decay_initial_state(const ComplexMatrix& obs) {
  Eigen::JacobiSVD<ComplexMatrix> svd(obs);
  const double norm2 = svd.singularValues()(0);
  const auto n = static_cast<std::size_t>(obs.rows());
  ComplexMatrix rho = identity(n);
  if (norm2 > 0.0) rho += 0.5 * obs / norm2;
  return rho / static_cast<double>(n);
}

ExponentialFit matrix_pencil_fit(const std::vector<double>& y, double dt, double rank_tol) {
  const auto m = static_cast<Eigen::Index>(y.size());
  if (m < 4) throw InvalidArgument("matrix_pencil_fit: need at least 4 samples");
  const Eigen::Index pencil = m / 2;
  ComplexMatrix hankel(m - pencil, pencil + 1);
  for (Eigen::Index i = 0; i < hankel.rows(); ++i)
    for (Eigen::Index j = 0; j < hankel.cols(); ++j) hankel(i, j) = y[static_cast<std::size_t>(i + j)];

  Eigen::BDCSVD<ComplexMatrix> svd(hankel, Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && rank < pencil && sv(rank) > rank_tol * sv(0)) ++rank;
  ExponentialFit fit;
  if (rank == 0) return fit;

  const ComplexMatrix vk = svd.matrixV().leftCols(rank);
  const ComplexMatrix v1 = vk.topRows(pencil);
  const ComplexMatrix v2 = vk.bottomRows(pencil);
  const ComplexMatrix shift = v1.completeOrthogonalDecomposition().solve(v2);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(shift, false);
  // the right singular vectors span the conjugated signal space
  ComplexVector z = es.eigenvalues().conjugate();

  ComplexMatrix vander(m, rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    Complex p{1.0, 0.0};
    for (Eigen::Index i = 0; i < m; ++i) {
      vander(i, k) = p;
      p *= z(k);
    }
  }
  ComplexVector rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) rhs(i) = y[static_cast<std::size_t>(i)];
  const ComplexVector amp = vander.completeOrthogonalDecomposition().solve(rhs);
  for (Eigen::Index k = 0; k < rank; ++k) {
    fit.exponents.push_back(std::log(z(k)) / dt);
    fit.amplitudes.push_back(amp(k));
  }
  return fit;
}

DecayResult observable_decay(const XXZParams& p, const ComplexMatrix& obs, const ComplexMatrix& rho0,
                             const std::vector<double>& t_grid) {
  return observable_decay(xxz_model(p), obs, rho0, t_grid);
}

DecayResult observable_decay(const LindbladModel& model, const ComplexMatrix& obs, const ComplexMatrix& rho0,
                             const std::vector<double>& t_grid) {
  model.validate();
  const std::size_t n = model.dim();
  if (static_cast<std::size_t>(obs.rows()) != n || static_cast<std::size_t>(rho0.rows()) != n) {
    throw DimensionMismatch("observable_decay: observable/state size does not match the model");
  }
  if (!is_hermitian(obs, 1e-12 * std::max(1.0, obs.norm()))) throw InvalidArgument("observable must be Hermitian");
  if (!is_hermitian(rho0, 1e-12) || std::abs(rho0.trace() - 1.0) > 1e-12) {
    throw InvalidArgument("initial state must be Hermitian with unit trace");
  }
  if (t_grid.size() < 2) throw InvalidArgument("observable_decay: need at least two times");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw InvalidArgument("observable_decay: time grid must be strictly increasing");
  }

  const SuperOperator l = build_superoperator(model);
  const ComplexMatrix rho_inf = steady_state(eig_biortho(l));

  DecayResult res;
  res.times = t_grid;
  ComplexVector x = propagator(l, t_grid.front()).matrix * vectorize(rho0);
  std::map<double, ComplexMatrix> cache;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (i > 0) {
      const double dt = t_grid[i] - t_grid[i - 1];
      auto it = cache.end();
      for (auto c = cache.begin(); c != cache.end(); ++c) {
        if (std::abs(c->first - dt) <= 1e-12 * dt) it = c;
      }
      if (it == cache.end()) it = cache.emplace(dt, propagator(l, dt).matrix).first;
      x = it->second * x;
    }
    const ComplexMatrix rho = unvectorize(x, n);
    res.deviations.push_back(((rho - rho_inf) * obs).trace().real());
  }

  const double t0 = t_grid.front(), t1 = t_grid.back();
  std::size_t first = 0;
  while (first < t_grid.size() && t_grid[first] < t0 + 0.05 * (t1 - t0)) ++first;
  std::size_t last = first;
  for (std::size_t i = first; i < t_grid.size(); ++i)
    if (std::abs(res.deviations[i]) > 1e-10) last = i;
  if (last <= first + 2) {
    res.method = "none";
    return res;
  }
  res.window_start = t_grid[first];
  res.window_end = t_grid[last];

  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  for (std::size_t i = first; i <= last; ++i) {
    if (std::abs(res.deviations[i]) <= 1e-10) continue;
    const double y = std::log(std::abs(res.deviations[i]));
    sx += t_grid[i];
    sy += y;
    sxx += t_grid[i] * t_grid[i];
    sxy += t_grid[i] * y;
    cnt += 1;
  }
  res.log_regression_rate = -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);

  const double dt = (t_grid[last] - t_grid[first]) / static_cast<double>(last - first);
  bool uniform = true;
  for (std::size_t i = first + 1; i <= last; ++i)
    if (std::abs(t_grid[i] - t_grid[i - 1] - dt) > 1e-9 * dt) uniform = false;
  if (!uniform) {
    res.fitted_rate = res.log_regression_rate;
    res.method = "log_regression";
    return res;
  }

  const std::size_t count = last - first + 1;
  const std::size_t stride = (count + 799) / 800;
  std::vector<double> samples;
  for (std::size_t i = first; i <= last; i += stride) samples.push_back(res.deviations[i]);
  const ExponentialFit fit = matrix_pencil_fit(samples, dt * static_cast<double>(stride));
  double wsum = 0.0, wrate = 0.0;
  for (std::size_t k = 0; k < fit.exponents.size(); ++k) {
    const double w = std::abs(fit.amplitudes[k]);
    wsum += w;
    wrate += w * -fit.exponents[k].real();
  }
  res.poles = fit.exponents;
  res.amplitudes = fit.amplitudes;
  res.fitted_rate = wsum > 0.0 ? wrate / wsum : res.log_regression_rate;
  for (std::size_t k = 0; k < fit.exponents.size(); ++k) {
    if (std::abs(fit.amplitudes[k]) >= 0.01 * wsum) {
      res.rate_spread = std::max(res.rate_spread, std::abs(-fit.exponents[k].real() - res.fitted_rate));
    }
  }
  res.method = "matrix_pencil";
  return res;
}

}  // namespace ptlindblad
