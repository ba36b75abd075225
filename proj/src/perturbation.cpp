#include "ptlindblad/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ptlindblad/errors.hpp"
#include "ptlindblad/spectral.hpp"

namespace ptlindblad {

namespace {

void fix_phase(ComplexMatrix& vecs) {
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    Eigen::Index imax = 0;
    vecs.col(c).cwiseAbs().maxCoeff(&imax);
    const Complex z = vecs(imax, c);
    if (std::abs(z) > 0.0) vecs.col(c) *= std::conj(z) / std::abs(z);
  }
}

std::vector<double> block_values(const ComplexMatrix& h, const std::optional<ComplexMatrix>& conserved) {
  const auto n = static_cast<std::size_t>(h.rows());
  std::vector<double> values(n, 0.0);
  if (!conserved) return values;
  const ComplexMatrix& q = *conserved;
  if (q.rows() != h.rows() || q.cols() != h.cols()) throw DimensionMismatch("conserved quantity has wrong size");
  ComplexMatrix off = q;
  off.diagonal().setZero();
  if (max_abs(off) > 1e-12) throw InvalidArgument("conserved quantity must be diagonal in the computational basis");
  if (max_abs(commutator(h, q)) > 1e-10 * std::max(1.0, h.norm())) {
    throw InvalidArgument("conserved quantity does not commute with the Hamiltonian");
  }
  for (std::size_t i = 0; i < n; ++i) values[i] = q(i, i).real();
  return values;
}

}  // namespace

EnergyBasis energy_basis(const ComplexMatrix& h, const std::optional<ComplexMatrix>& conserved) {
  if (h.rows() == 0 || h.rows() != h.cols()) throw DimensionMismatch("energy_basis: H must be square");
  if (!is_hermitian(h, 1e-12 * std::max(1.0, h.norm()))) throw InvalidArgument("energy_basis: H is not Hermitian");
  const auto n = static_cast<std::size_t>(h.rows());
  const std::vector<double> q = block_values(h, conserved);

  std::map<long long, std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < n; ++i) blocks[std::llround(q[i] * 1e6)].push_back(i);

  std::vector<double> energies;
  std::vector<ComplexVector> vectors;
  std::vector<double> owner;
  for (const auto& [key, idx] : blocks) {
    const auto bn = static_cast<Eigen::Index>(idx.size());
    ComplexMatrix sub(bn, bn);
    for (Eigen::Index r = 0; r < bn; ++r)
      for (Eigen::Index c = 0; c < bn; ++c) sub(r, c) = h(idx[r], idx[c]);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sub);
    for (Eigen::Index a = 0; a < bn; ++a) {
      ComplexVector full = ComplexVector::Zero(static_cast<Eigen::Index>(n));
      for (Eigen::Index r = 0; r < bn; ++r) full(idx[r]) = es.eigenvectors()(r, a);
      energies.push_back(es.eigenvalues()(a));
      vectors.push_back(std::move(full));
      owner.push_back(q[idx[0]]);
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return energies[a] < energies[b]; });

  EnergyBasis eb;
  eb.energies.resize(static_cast<Eigen::Index>(n));
  eb.vectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    eb.energies(static_cast<Eigen::Index>(i)) = energies[order[i]];
    eb.vectors.col(static_cast<Eigen::Index>(i)) = vectors[order[i]];
    eb.block_value.push_back(owner[order[i]]);
  }
  fix_phase(eb.vectors);
  return eb;
}

PerturbationReport population_matrix(const LindbladModel& model, const std::optional<ComplexMatrix>& conserved) {
  model.validate();
  const double n2 = static_cast<double>(model.dim() * model.dim());
  if (std::abs(dissipator_trace(model.lindblads) + n2) > 1e-9 * n2) {
    std::ostringstream os;
    os << "population_matrix: dissipator trace " << dissipator_trace(model.lindblads) << " != -N^2";
    throw DissipatorNotNormalized(os.str());
  }

  const EnergyBasis eb = energy_basis(model.hamiltonian, conserved);
  const auto n = static_cast<Eigen::Index>(model.dim());
  std::vector<ComplexMatrix> kk;
  for (const auto& l : model.lindblads) kk.push_back(l.adjoint() * l);

  ComplexMatrix vc(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const ComplexVector psi_k = eb.vectors.col(k);
    const ComplexMatrix dk = psi_k * psi_k.adjoint();
    ComplexMatrix image = dk;  // the +1 of D'
    for (std::size_t m = 0; m < model.lindblads.size(); ++m) {
      const auto& l = model.lindblads[m];
      image += 2.0 * l * dk * l.adjoint() - kk[m] * dk - dk * kk[m];
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const ComplexVector psi_j = eb.vectors.col(j);
      vc(j, k) = psi_j.dot(image * psi_j);  // <psi_j| D'(d_k) |psi_j>
    }
  }

  PerturbationReport rep;
  rep.energies = eb.energies;
  rep.eigenvectors = eb.vectors;
  rep.v = vc.real();
  rep.reality_defect = vc.imag().cwiseAbs().maxCoeff();
  rep.symmetry_defect = (rep.v - rep.v.transpose()).cwiseAbs().maxCoeff();
  rep.column_sum_defect = (rep.v.colwise().sum().array() - 1.0).abs().maxCoeff();

  Eigen::ComplexEigenSolver<ComplexMatrix> es(rep.v.cast<Complex>());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const Complex x = es.eigenvalues()(a), y = es.eigenvalues()(b);
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() < y.imag();
  });
  rep.xi.resize(n);
  rep.hybridization.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rep.xi(i) = es.eigenvalues()(order[static_cast<std::size_t>(i)]);
    rep.hybridization.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
  }
  return rep;
}

VelocityReport velocity_check(const LindbladModel& model, const VelocityOptions& opts) {
  model.validate();
  if (!(opts.dgamma > 0.0) || opts.dgamma >= model.gamma) {
    throw InvalidArgument("velocity_check: need 0 < dgamma < gamma");
  }
  auto restrict = [&](SuperOperator s) { return opts.sector.empty() ? s : sector_restrict(s, opts.sector); };
  auto at = [&](double g) {
    LindbladModel m = model;
    m.gamma = g;
    return restrict(build_superoperator(m));
  };

  const SuperOperator l0 = at(model.gamma);
  const SuperOperator d = restrict(dissipator(model.lindblads, l0.convention));
  const SpectralDecomposition dec = eig_biortho(l0);

  auto eigenvalues_at = [&](double g) {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(at(g).matrix, false);
    if (es.info() != Eigen::Success) throw ConvergenceFailure("velocity_check: shifted spectrum did not converge");
    return ComplexVector(es.eigenvalues());
  };
  const ComplexVector up = eigenvalues_at(model.gamma + opts.dgamma);
  const ComplexVector down = eigenvalues_at(model.gamma - opts.dgamma);

  const double d_norm =
      std::sqrt(d.matrix.cwiseAbs().colwise().sum().maxCoeff() * d.matrix.cwiseAbs().rowwise().sum().maxCoeff());
  VelocityReport rep;
  rep.isolation_tol = opts.isolation > 0.0 ? opts.isolation : 100.0 * opts.dgamma * std::max(1.0, d_norm);

  const double gbar_rate = -d.matrix.trace().real() / static_cast<double>(d.dim());  // d(gamma_bar)/d(gamma)
  const double gbar = average_damping(l0);
  const double tau = opts.tau_rel * dec.scale();

  auto isolated = [&](std::size_t a) {
    const Complex lam = dec.eigenvalues(static_cast<Eigen::Index>(a));
    for (std::size_t b = 0; b < dec.size(); ++b) {
      if (b != a && std::abs(dec.eigenvalues(static_cast<Eigen::Index>(b)) - lam) <= rep.isolation_tol) return false;
    }
    return true;
  };

  std::vector<std::size_t> alphas = opts.alphas;
  const bool explicit_selection = !alphas.empty();
  if (!explicit_selection) {
    alphas.resize(dec.size());
    std::iota(alphas.begin(), alphas.end(), 0);
  }
  for (std::size_t a : alphas) {
    if (a >= dec.size()) throw InvalidArgument("velocity_check: eigenvalue index out of range");
    if (!isolated(a)) {
      if (explicit_selection) {
        throw DegenerateAtEvaluationPoint("eigenvalue " + std::to_string(a) + " is not isolated at the evaluation point");
      }
      rep.skipped.push_back(a);
      continue;
    }
    const auto c = static_cast<Eigen::Index>(a);
    VelocityEntry e;
    e.index = a;
    e.lambda = dec.eigenvalues(c);
    e.analytic = dec.left.col(c).dot(d.matrix * dec.right.col(c));  // (v, D u)
    Eigen::Index iu = 0, id = 0;
    (up.array() - e.lambda).abs().minCoeff(&iu);
    (down.array() - e.lambda).abs().minCoeff(&id);
    e.finite_difference = (up(iu) - down(id)) / (2.0 * opts.dgamma);
    e.discrepancy = std::abs(e.analytic - e.finite_difference);
    rep.max_discrepancy = std::max(rep.max_discrepancy, e.discrepancy);
    if (std::abs(e.lambda.imag()) <= tau) {
      e.line = 'h';
      rep.max_h_im_velocity = std::max(rep.max_h_im_velocity, std::abs(e.analytic.imag()));
    } else if (std::abs(e.lambda.real() + gbar) <= tau) {
      e.line = 'v';
      rep.max_v_re_velocity = std::max(rep.max_v_re_velocity, std::abs(e.analytic.real() + gbar_rate));
    }
    rep.entries.push_back(e);
  }
  return rep;
}

DegeneracyReport degeneracy_report(const ComplexMatrix& h, double tol, const std::optional<ComplexMatrix>& conserved) {
  const EnergyBasis eb = energy_basis(h, conserved);
  DegeneracyReport rep;
  rep.energies = eb.energies;
  if (tol <= 0.0) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    tol = 1e-9 * es.eigenvalues().cwiseAbs().maxCoeff();
  }
  rep.tol = tol;
  const auto n = static_cast<std::size_t>(eb.energies.size());
  auto same_block = [&](std::size_t a, std::size_t b) {
    return !conserved || std::abs(eb.block_value[a] - eb.block_value[b]) < 1e-9;
  };
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k)
      if (same_block(j, k) && std::abs(eb.energies(j) - eb.energies(k)) <= tol) rep.degenerate_energies.emplace_back(j, k);

  struct Gap {
    double value;
    std::size_t j, k;
  };
  std::vector<Gap> gaps;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (j != k && same_block(j, k)) gaps.push_back({eb.energies(j) - eb.energies(k), j, k});
  std::stable_sort(gaps.begin(), gaps.end(), [](const Gap& a, const Gap& b) { return a.value < b.value; });
  for (std::size_t a = 0; a < gaps.size(); ++a) {
    for (std::size_t b = a + 1; b < gaps.size() && gaps[b].value - gaps[a].value <= tol; ++b) {
      std::array<std::size_t, 4> t{gaps[a].j, gaps[a].k, gaps[b].j, gaps[b].k};
      if (std::make_pair(t[0], t[1]) > std::make_pair(t[2], t[3])) t = {t[2], t[3], t[0], t[1]};
      rep.degenerate_gaps.push_back(t);
    }
  }
  std::sort(rep.degenerate_gaps.begin(), rep.degenerate_gaps.end());
  return rep;
}

double heuristic_gamma_pt(const SuperOperator& traceless_dissipator, const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  const RealVector& e = es.eigenvalues();
  const double span = e.maxCoeff() - e.minCoeff();
  if (!(span > 0.0)) throw InvalidArgument("heuristic_gamma_pt: energy spectrum has zero span");
  const double density = static_cast<double>(e.size() - 1) / span;
  Eigen::BDCSVD<ComplexMatrix> svd(traceless_dissipator.matrix);
  const double op_norm = svd.singularValues()(0);
  return 1.0 / (op_norm * density * density);
}

}  // namespace ptlindblad
