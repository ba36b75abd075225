#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ptlindblad/liouville.hpp"

namespace ptlindblad {

/// Energy eigenbasis of H with ascending energies.  Each eigenvector has its
/// largest-magnitude component made real positive.  When `conserved` (a
/// diagonal operator commuting with H) is given, H is diagonalized block by
/// block so degenerate levels from different blocks are not mixed.
struct EnergyBasis {
  RealVector energies;
  ComplexMatrix vectors;  ///< columns psi_j
  std::vector<double> block_value;  ///< conserved-quantity value of each level
};
EnergyBasis energy_basis(const ComplexMatrix& h, const std::optional<ComplexMatrix>& conserved = std::nullopt);

/// First-order (in gamma) population dynamics:
/// V_jk = (d_j, D' d_k) with d_j = |psi_j><psi_j| and D' = D + 1.
struct PerturbationReport {
  RealVector energies;
  ComplexMatrix eigenvectors;
  RealMatrix v;                  ///< real part of V
  ComplexVector xi;              ///< eigenvalues of V, sorted by real part descending
  ComplexMatrix hybridization;   ///< columns a_alpha, matching xi
  double symmetry_defect = 0.0;  ///< ||V - V^T||_max
  double reality_defect = 0.0;   ///< max |Im V_jk|
  double column_sum_defect = 0.0;  ///< max_k |sum_j V_jk - 1|
};

/// Requires a trace-normalized dissipator (throws DissipatorNotNormalized).
PerturbationReport population_matrix(const LindbladModel& model,
                                     const std::optional<ComplexMatrix>& conserved = std::nullopt);

struct VelocityEntry {
  std::size_t index = 0;  ///< position in the decomposition at gamma
  Complex lambda;
  Complex analytic;           ///< (v, D u)
  Complex finite_difference;  ///< [lambda(gamma+h) - lambda(gamma-h)] / 2h
  double discrepancy = 0.0;
  char line = 'o';  ///< 'h', 'v' or 'o' (off the cross)
};

struct VelocityReport {
  std::vector<VelocityEntry> entries;
  std::vector<std::size_t> skipped;  ///< non-isolated eigenvalues
  double max_discrepancy = 0.0;
  double max_h_im_velocity = 0.0;  ///< max |Im dlambda/dgamma| over l_h members
  double max_v_re_velocity = 0.0;  ///< max |Re dlambda'/dgamma| over l_v members
  double isolation_tol = 0.0;
};

struct VelocityOptions {
  double dgamma = 1e-5;
  /// Restrict to this invariant sector (empty = full space).
  std::vector<BasisPair> sector;
  /// Eigenvalue positions to check; empty = every isolated eigenvalue.
  std::vector<std::size_t> alphas;
  double tau_rel = 1e-8;
  /// An eigenvalue is isolated when its nearest neighbour is farther than this
  /// (absolute); <= 0 selects 100 * dgamma * max(1, ||D||).
  double isolation = -1.0;
};

/// Compares first-order velocities with centred finite differences and checks
/// line confinement.  Throws DegenerateAtEvaluationPoint when an explicitly
/// requested eigenvalue is not isolated.
VelocityReport velocity_check(const LindbladModel& model, const VelocityOptions& opts = {});

struct DegeneracyReport {
  RealVector energies;
  std::vector<std::pair<std::size_t, std::size_t>> degenerate_energies;  ///< j < k
  /// (j, k, p, q): eps_j - eps_k ~ eps_p - eps_q, j != k, p != q, (j,k) < (p,q)
  std::vector<std::array<std::size_t, 4>> degenerate_gaps;
  double tol = 0.0;
};

/// tol <= 0 selects 1e-9 * ||H||_2.  With `conserved`, only levels in the same
/// block are compared (energy pairs) and only in-block gaps are considered.
DegeneracyReport degeneracy_report(const ComplexMatrix& h, double tol = -1.0,
                                   const std::optional<ComplexMatrix>& conserved = std::nullopt);

/// Order-of-magnitude estimate 1 / (||D'||_2 d^2) with d = (N-1)/(eps_max - eps_min).
double heuristic_gamma_pt(const SuperOperator& traceless_dissipator, const ComplexMatrix& h);

}  // namespace ptlindblad
