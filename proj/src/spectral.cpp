#include "ptlindblad/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ptlindblad/errors.hpp"

namespace ptlindblad {

namespace {

constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

// Sort by Re descending; runs whose real parts agree within `tol` of the run's
// first member are ordered by Im ascending.
std::vector<std::size_t> spectral_order(const ComplexVector& ev, double tol) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(ev.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() > ev(b).real();
    return ev(a).imag() < ev(b).imag();
  });
  std::size_t start = 0;
  while (start < idx.size()) {
    std::size_t end = start + 1;
    while (end < idx.size() && ev(idx[start]).real() - ev(idx[end]).real() <= tol) ++end;
    std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(start), idx.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) { return ev(a).imag() < ev(b).imag(); });
    start = end;
  }
  return idx;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Greedy one-to-one matching: candidate pairs (a, b) ordered by |ev_b - target_a|.
std::pair<std::vector<std::size_t>, double> greedy_pairing(const ComplexVector& ev, const std::vector<Complex>& target) {
  const std::size_t n = static_cast<std::size_t>(ev.size());
  const std::size_t k = std::min<std::size_t>(n, 8);
  struct Cand {
    double dist;
    std::size_t a, b;
  };
  std::vector<Cand> cands;
  cands.reserve(n * k);
  std::vector<std::pair<double, std::size_t>> row(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) row[b] = {std::abs(ev(b) - target[a]), b};
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
    for (std::size_t i = 0; i < k; ++i) cands.push_back({row[i].first, a, row[i].second});
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.dist < y.dist; });
  std::vector<std::size_t> pairing(n, kAbsent);
  std::vector<char> used(n, 0);
  for (const auto& c : cands) {
    if (pairing[c.a] != kAbsent || used[c.b]) continue;
    pairing[c.a] = c.b;
    used[c.b] = 1;
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (pairing[a] != kAbsent) continue;
    double best = std::numeric_limits<double>::infinity();
    std::size_t pick = kAbsent;
    for (std::size_t b = 0; b < n; ++b) {
      if (used[b]) continue;
      const double d = std::abs(ev(b) - target[a]);
      if (d < best) best = d, pick = b;
    }
    pairing[a] = pick;
    used[pick] = 1;
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a) worst = std::max(worst, std::abs(ev(pairing[a]) - target[a]));
  return {pairing, worst};
}

}  // namespace

std::size_t SpectralDecomposition::nearest(Complex z) const {
  if (size() == 0) throw InvalidArgument("nearest: empty decomposition");
  Eigen::Index best = 0;
  (eigenvalues.array() - z).abs().minCoeff(&best);
  return static_cast<std::size_t>(best);
}

std::optional<std::size_t> SpectralDecomposition::transpose_position(std::size_t i) const {
  if (i >= transpose_index.size() || transpose_index[i] == kAbsent) return std::nullopt;
  return transpose_index[i];
}

std::optional<ComplexVector> SpectralDecomposition::adjoint_vector(const ComplexVector& x) const {
  ComplexVector out(x.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (transpose_index[i] == kAbsent) return std::nullopt;
    out(static_cast<Eigen::Index>(i)) = std::conj(x(static_cast<Eigen::Index>(transpose_index[i])));
  }
  return out;
}

SpectralDecomposition eig_biortho(const SuperOperator& sup, double degeneracy_rel) {
  const ComplexMatrix& m = sup.matrix;
  if (m.rows() == 0 || m.rows() != m.cols()) throw DimensionMismatch("eig_biortho: need a non-empty square matrix");
  if (!all_finite(m)) throw InvalidArgument("eig_biortho: non-finite matrix entries");

  Eigen::ComplexEigenSolver<ComplexMatrix> solver;
  solver.compute(m, true);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "complex Schur QR iteration did not converge (dim " << m.rows() << ", iteration limit "
       << Eigen::ComplexSchur<ComplexMatrix>::m_maxIterationsPerRow << " per row, status "
       << static_cast<int>(solver.info()) << ")";
    throw ConvergenceFailure(os.str());
  }

  SpectralDecomposition dec;
  dec.labels = sup.labels;
  dec.hilbert_dim = sup.hilbert_dim();
  dec.matrix_norm = std::sqrt(m.cwiseAbs().colwise().sum().maxCoeff() * m.cwiseAbs().rowwise().sum().maxCoeff());

  const ComplexVector raw = solver.eigenvalues();
  dec.spectral_radius = raw.cwiseAbs().maxCoeff();
  const auto order = spectral_order(raw, 1e-10 * dec.scale());
  const std::size_t n = order.size();
  dec.eigenvalues.resize(static_cast<Eigen::Index>(n));
  dec.right.resize(m.rows(), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    dec.eigenvalues(static_cast<Eigen::Index>(i)) = raw(static_cast<Eigen::Index>(order[i]));
    dec.right.col(static_cast<Eigen::Index>(i)) = solver.eigenvectors().col(static_cast<Eigen::Index>(order[i]));
  }
  dec.left = dec.right.partialPivLu().inverse().adjoint();

  dec.right_residuals.resize(n);
  dec.left_residuals.resize(n);
  const ComplexMatrix mr = m * dec.right;
  const ComplexMatrix ml = m.adjoint() * dec.left;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    const Complex lam = dec.eigenvalues(c);
    dec.right_residuals[i] = (mr.col(c) - lam * dec.right.col(c)).norm() / dec.right.col(c).norm();
    dec.left_residuals[i] = (ml.col(c) - std::conj(lam) * dec.left.col(c)).norm() / dec.left.col(c).norm();
  }

  dec.degeneracy_tol = degeneracy_rel * dec.scale();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (std::abs(dec.eigenvalues(static_cast<Eigen::Index>(a)) - dec.eigenvalues(static_cast<Eigen::Index>(b))) <=
          dec.degeneracy_tol) {
        parent[find_root(parent, a)] = find_root(parent, b);
      }
    }
  }
  std::map<std::size_t, std::size_t> cluster_id;
  dec.cluster_of.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t root = find_root(parent, a);
    auto [it, inserted] = cluster_id.emplace(root, dec.clusters.size());
    if (inserted) dec.clusters.emplace_back();
    dec.clusters[it->second].push_back(a);
    dec.cluster_of[a] = it->second;
  }

  std::map<BasisPair, std::size_t> where;
  for (std::size_t i = 0; i < dec.labels.size(); ++i) where.emplace(dec.labels[i], i);
  dec.transpose_index.assign(dec.labels.size(), kAbsent);
  for (std::size_t i = 0; i < dec.labels.size(); ++i) {
    auto it = where.find({dec.labels[i].second, dec.labels[i].first});
    if (it != where.end()) dec.transpose_index[i] = it->second;
  }
  return dec;
}

double collinearity_error(const ComplexVector& a, const ComplexVector& b) {
  const double na = a.squaredNorm(), nb = b.squaredNorm();
  if (na == 0.0 || nb == 0.0) return 1.0;
  // residual of projecting b on a; avoids the cancellation in sqrt(1 - cos^2)
  const ComplexVector r = b - (a.dot(b) / na) * a;
  return std::min(1.0, r.norm() / std::sqrt(nb));
}

std::size_t steady_state_index(const SpectralDecomposition& dec) {
  if (dec.size() == 0) throw NoZeroMode("empty decomposition");
  const std::size_t i = dec.nearest(Complex{0.0, 0.0});
  const double mag = std::abs(dec.eigenvalues(static_cast<Eigen::Index>(i)));
  if (mag > 1e-9 * std::max(1.0, dec.matrix_norm)) {
    std::ostringstream os;
    os << "smallest |lambda| is " << mag;
    throw NoZeroMode(os.str());
  }
  return i;
}

ComplexMatrix steady_state(const SpectralDecomposition& dec) {
  const std::size_t i = steady_state_index(dec);
  ComplexMatrix rho = unvectorize(dec.right.col(static_cast<Eigen::Index>(i)), dec.labels, dec.hilbert_dim);
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-300) throw NoZeroMode("zero mode is traceless");
  return rho / tr;
}

namespace {

struct Partition {
  std::vector<std::size_t> h, v, off;
  bool operator==(const Partition& o) const { return h == o.h && v == o.v && off == o.off; }
};

Partition partition(const ComplexVector& ev, double gamma_bar, double tau) {
  Partition p;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const auto a = static_cast<std::size_t>(i);
    if (std::abs(ev(i).imag()) <= tau) {
      p.h.push_back(a);
    } else if (std::abs(ev(i).real() + gamma_bar) <= tau) {
      p.v.push_back(a);
    } else {
      p.off.push_back(a);
    }
  }
  return p;
}

}  // namespace

CrossClassification classify_cross(const SpectralDecomposition& dec, double gamma_bar, double tau_rel) {
  if (!(tau_rel > 0.0)) throw InvalidArgument("classify_cross: tau_rel must be positive");
  CrossClassification out;
  out.tau = tau_rel * dec.scale();
  Partition p = partition(dec.eigenvalues, gamma_bar, out.tau);
  out.stable = partition(dec.eigenvalues, gamma_bar, 0.9 * out.tau) == p &&
               partition(dec.eigenvalues, gamma_bar, 1.1 * out.tau) == p;
  out.on_h = std::move(p.h);
  out.on_v = std::move(p.v);
  out.off_cross = std::move(p.off);
  return out;
}

D2Report verify_d2(const SpectralDecomposition& dec, double gamma_bar) {
  const std::size_t n = dec.size();
  std::vector<Complex> v_img(n), h_img(n);
  for (std::size_t a = 0; a < n; ++a) {
    const Complex lam = dec.eigenvalues(static_cast<Eigen::Index>(a));
    v_img[a] = -std::conj(lam) - 2.0 * gamma_bar;
    h_img[a] = std::conj(lam);
  }
  D2Report rep;
  rep.scale = dec.scale();
  std::tie(rep.v_pairing, rep.max_v_error) = greedy_pairing(dec.eigenvalues, v_img);
  std::tie(rep.h_pairing, rep.max_h_error) = greedy_pairing(dec.eigenvalues, h_img);
  return rep;
}

PartnerReport pt_partner_check(const SpectralDecomposition& dec, const ParitySuperOp& parity, double gamma_bar) {
  ComplexMatrix p;
  if (parity.sup.labels == dec.labels) {
    p = parity.sup.matrix;
  } else {
    p = restrict_parity(parity, dec.labels).sup.matrix;
  }
  PartnerReport rep;
  const D2Report d2 = verify_d2(dec, gamma_bar);
  for (std::size_t a = 0; a < dec.size(); ++a) {
    const auto ca = static_cast<Eigen::Index>(a);
    if (!dec.is_simple(a)) {
      rep.skipped.push_back(a);
      continue;
    }
    const std::size_t b = d2.v_pairing[a];
    bool any = false;
    if (dec.is_simple(b)) {
      const auto cb = static_cast<Eigen::Index>(b);
      const ComplexVector pv = p * dec.left.col(ca);
      const ComplexVector pu = p * dec.right.col(ca);
      const double err = std::max(collinearity_error(dec.right.col(cb), pv), collinearity_error(dec.left.col(cb), pu));
      rep.max_v_vector_error = std::max(rep.max_v_vector_error, err);
      ++rep.checked_v;
      any = true;
    }
    const std::size_t e = d2.h_pairing[a];
    if (dec.is_simple(e)) {
      const auto ce = static_cast<Eigen::Index>(e);
      const auto ua = dec.adjoint_vector(dec.right.col(ca));
      const auto va = dec.adjoint_vector(dec.left.col(ca));
      if (ua && va) {
        const double err = std::max(collinearity_error(dec.right.col(ce), *ua), collinearity_error(dec.left.col(ce), *va));
        rep.max_h_vector_error = std::max(rep.max_h_vector_error, err);
        ++rep.checked_h;
        any = true;
      }
    }
    if (!any) rep.skipped.push_back(a);
  }
  return rep;
}

}  // namespace ptlindblad
