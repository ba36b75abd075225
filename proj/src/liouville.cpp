#include "ptlindblad/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "ptlindblad/errors.hpp"

namespace ptlindblad {

void LindbladModel::validate() const {
  if (hamiltonian.rows() == 0 || hamiltonian.rows() != hamiltonian.cols()) {
    throw DimensionMismatch("hamiltonian must be a non-empty square matrix");
  }
  if (!all_finite(hamiltonian)) throw InvalidArgument("hamiltonian has non-finite entries");
  const double h_norm = hamiltonian.norm();
  if (!is_hermitian(hamiltonian, 1e-12 * std::max(1.0, h_norm))) {
    throw InvalidArgument("hamiltonian is not Hermitian");
  }
  const std::size_t n = dim();
  if (lindblads.size() > n * n - 1 && n > 1) {
    throw InvalidArgument("more than N^2-1 Lindblad operators");
  }
  for (std::size_t m = 0; m < lindblads.size(); ++m) {
    const auto& l = lindblads[m];
    if (static_cast<std::size_t>(l.rows()) != n || static_cast<std::size_t>(l.cols()) != n) {
      throw DimensionMismatch("lindblad operator " + std::to_string(m) + " does not match hamiltonian dimension");
    }
    if (!all_finite(l)) throw InvalidArgument("lindblad operator " + std::to_string(m) + " has non-finite entries");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be finite and non-negative");
}

SuperOperator SuperOperator::full(ComplexMatrix m, BasisConvention conv) {
  SuperOperator s{std::move(m), conv, full_labels(conv.hilbert_dim)};
  return s;
}

std::vector<BasisPair> full_labels(std::size_t n) {
  std::vector<BasisPair> labels;
  labels.reserve(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) labels.emplace_back(j, k);
  return labels;
}

ComplexVector vectorize(const ComplexMatrix& rho) {
  const Eigen::Index n = rho.rows();
  ComplexVector v(n * rho.cols());
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < rho.cols(); ++k) v(j * rho.cols() + k) = rho(j, k);
  return v;
}

ComplexMatrix unvectorize(const ComplexVector& v, std::size_t n) {
  if (static_cast<std::size_t>(v.size()) != n * n) throw DimensionMismatch("unvectorize: length is not N^2");
  ComplexMatrix rho(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) rho(j, k) = v(j * n + k);
  return rho;
}

ComplexMatrix unvectorize(const ComplexVector& v, const std::vector<BasisPair>& labels, std::size_t n) {
  if (static_cast<std::size_t>(v.size()) != labels.size()) throw DimensionMismatch("unvectorize: label count mismatch");
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < labels.size(); ++i) rho(labels[i].first, labels[i].second) = v(i);
  return rho;
}

ComplexVector vectorize(const ComplexMatrix& rho, const std::vector<BasisPair>& labels) {
  ComplexVector v(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) v(i) = rho(labels[i].first, labels[i].second);
  return v;
}

ComplexMatrix sandwich_superoperator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return kron(a, b.transpose());
}

SuperOperator hamiltonian_part(const ComplexMatrix& h, const BasisConvention& conv) {
  const ComplexMatrix id = identity(conv.hilbert_dim);
  return SuperOperator::full(-kI * (kron(h, id) - kron(id, h.transpose())), conv);
}

SuperOperator dissipator(const std::vector<ComplexMatrix>& lindblads, const BasisConvention& conv) {
  const std::size_t n = conv.hilbert_dim;
  const ComplexMatrix id = identity(n);
  ComplexMatrix d = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& l : lindblads) {
    const ComplexMatrix k = l.adjoint() * l;
    d += 2.0 * kron(l, l.conjugate()) - kron(k, id) - kron(id, k.transpose());
  }
  return SuperOperator::full(std::move(d), conv);
}

double dissipator_trace(const std::vector<ComplexMatrix>& lindblads) {
  double tr = 0.0;
  for (const auto& l : lindblads) {
    const double n = static_cast<double>(l.rows());
    tr += 2.0 * std::norm(l.trace()) - 2.0 * n * l.squaredNorm();
  }
  return tr;
}

namespace {

void require_normalized(const LindbladModel& model) {
  const double n2 = static_cast<double>(model.dim() * model.dim());
  const double tr = dissipator_trace(model.lindblads);
  if (std::abs(tr + n2) > 1e-9 * n2) {
    std::ostringstream os;
    os << "dissipator trace is " << tr << ", expected -N^2 = " << -n2;
    throw DissipatorNotNormalized(os.str());
  }
}

}  // namespace

SuperOperator traceless_dissipator(const LindbladModel& model) {
  model.validate();
  require_normalized(model);
  SuperOperator d = dissipator(model.lindblads, BasisConvention::generic(model.dim()));
  d.matrix.diagonal().array() += 1.0;
  return d;
}

LindbladModel trace_normalized(const LindbladModel& model) {
  model.validate();
  const double n2 = static_cast<double>(model.dim() * model.dim());
  const double tr = dissipator_trace(model.lindblads);
  if (tr == 0.0) throw DissipatorNotNormalized("dissipator is traceless; cannot normalize");
  const double factor = -n2 / tr;  // D scales linearly in |L|^2
  LindbladModel out = model;
  for (auto& l : out.lindblads) l *= std::sqrt(factor);
  out.gamma = model.gamma / factor;
  return out;
}

SuperOperator build_superoperator(const LindbladModel& model) {
  model.validate();
  BasisConvention conv = BasisConvention::generic(model.dim());
  const std::size_t n = model.dim();
  if (n >= 2 && (n & (n - 1)) == 0) {
    int sites = 0;
    while ((std::size_t{1} << sites) < n) ++sites;
    conv.sites = sites;
  }
  SuperOperator l = hamiltonian_part(model.hamiltonian, conv);
  if (model.gamma != 0.0 && !model.lindblads.empty()) {
    l.matrix += model.gamma * dissipator(model.lindblads, conv).matrix;
  }
  return l;
}

ComplexMatrix apply_lindbladian(const LindbladModel& model, const ComplexMatrix& rho) {
  ComplexMatrix out = -kI * commutator(model.hamiltonian, rho);
  for (const auto& l : model.lindblads) {
    const ComplexMatrix k = l.adjoint() * l;
    out += model.gamma * (2.0 * l * rho * l.adjoint() - k * rho - rho * k);
  }
  return out;
}

double average_damping(const SuperOperator& sup) {
  return -sup.matrix.trace().real() / static_cast<double>(sup.dim());
}

SuperOperator traceless_part(const SuperOperator& sup) {
  SuperOperator out = sup;
  const double g = average_damping(sup);
  out.matrix.diagonal().array() += g;
  return out;
}

SuperOperator propagator(const SuperOperator& sup, double t) {
  if (!std::isfinite(t)) throw InvalidArgument("propagator: non-finite time");
  SuperOperator out = sup;
  out.matrix = mat_exp(t * sup.matrix);
  return out;
}

double hermiticity_residual(const SuperOperator& sup) {
  if (!sup.is_full()) throw InvalidArgument("hermiticity_residual needs a full-space superoperator");
  const std::size_t n = sup.hilbert_dim();
  // Column (a,b) of  M*Swap - Swap*conj(M)  is  L(E_ab^+) - (L E_ab)^+ in vectorized form.
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const auto col_ab = sup.matrix.col(static_cast<Eigen::Index>(a * n + b));
      const auto col_ba = sup.matrix.col(static_cast<Eigen::Index>(b * n + a));
      double sq = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          // L(E_ba)_{jk} - conj(L(E_ab)_{kj})
          const Complex diff = col_ba(j * n + k) - std::conj(col_ab(k * n + j));
          sq += std::norm(diff);
        }
      }
      worst = std::max(worst, std::sqrt(sq));
    }
  }
  return worst;
}

std::vector<std::size_t> label_positions(const SuperOperator& sup, const std::vector<BasisPair>& keep) {
  std::map<BasisPair, std::size_t> where;
  for (std::size_t i = 0; i < sup.labels.size(); ++i) where.emplace(sup.labels[i], i);
  std::vector<std::size_t> pos;
  pos.reserve(keep.size());
  for (const auto& p : keep) {
    auto it = where.find(p);
    if (it == where.end()) {
      throw InvalidArgument("basis pair (" + std::to_string(p.first) + "," + std::to_string(p.second) +
                            ") is not part of the superoperator basis");
    }
    pos.push_back(it->second);
  }
  return pos;
}

SuperOperator sector_restrict(const SuperOperator& sup, const std::vector<BasisPair>& keep) {
  const std::vector<std::size_t> pos = label_positions(sup, keep);
  std::vector<char> kept(sup.dim(), 0);
  for (std::size_t p : pos) {
    if (kept[p]) throw InvalidArgument("sector_restrict: duplicate basis pair");
    kept[p] = 1;
  }
  const double tol = 1e-12 * std::max(1.0, max_abs(sup.matrix));
  double leak = 0.0;
  for (std::size_t r = 0; r < sup.dim(); ++r) {
    for (std::size_t c = 0; c < sup.dim(); ++c) {
      if (kept[r] != kept[c]) leak = std::max(leak, std::abs(sup.matrix(r, c)));
    }
  }
  if (leak > tol) {
    std::ostringstream os;
    os << "sector couples to the rest of the space: max coupling " << leak << " > " << tol;
    throw SectorNotInvariant(os.str());
  }
  SuperOperator out;
  out.convention = sup.convention;
  out.labels = keep;
  out.matrix.resize(static_cast<Eigen::Index>(pos.size()), static_cast<Eigen::Index>(pos.size()));
  for (std::size_t r = 0; r < pos.size(); ++r)
    for (std::size_t c = 0; c < pos.size(); ++c) out.matrix(r, c) = sup.matrix(pos[r], pos[c]);
  return out;
}

double frobenius(const ComplexMatrix& m) { return m.norm(); }

}  // namespace ptlindblad
