#pragma once

#include <vector>

#include "ptlindblad/liouville.hpp"

namespace ptlindblad {

/// Boundary-driven open XXZ chain.
struct XXZParams {
  int n = 2;
  double delta = 0.5;
  double mu = 0.0;     ///< driving bias, in [-1, 1]
  double gamma = 0.0;  ///< coupling strength, >= 0

  void validate() const;
};

/// H = sum_j 2 s+_j s-_{j+1} + 2 s-_j s+_{j+1} + delta sz_j sz_{j+1}
ComplexMatrix xxz_hamiltonian(int n, double delta);
/// L1 = sqrt(1+mu)/2 s+_1, L2 = sqrt(1-mu)/2 s-_1, L3 = sqrt(1-mu)/2 s+_n,
/// L4 = sqrt(1+mu)/2 s-_n.  Zero operators are kept so there are always four.
std::vector<ComplexMatrix> xxz_lindblads(int n, double mu);
LindbladModel xxz_model(const XXZParams& p);

/// J = i sum_j (s+_j s-_{j+1} - s-_j s+_{j+1})
ComplexMatrix spin_current(int n);

/// (j,k) pairs with magnetization(j) - magnetization(k) == dmz, in flat-index order.
std::vector<BasisPair> sector_basis(int n, int dmz);

/// Ladder picture: B(H) ~ H (x) H through |psi><phi| <-> |psi> (x) S|phi> with
/// S the global spin flip.  Converts an operator on the ladder space to the
/// row-major E_{j,k} superoperator convention.
ComplexMatrix ladder_to_operator_basis(const ComplexMatrix& ladder, int n);
ComplexMatrix operator_to_ladder_basis(const ComplexMatrix& sup, int n);

/// The three rows of the ladder-form Liouvillian, each converted to the
/// operator-basis convention:
///   coherent  = 1 (x) A - A (x) 1,  A = iH - (gamma mu / 4)(sz_1 - sz_n)
///   jump_bias = gamma (1+mu)/2 (s+_1 (x) s-_1 + s-_n (x) s+_n)
///   jump_anti = gamma (1-mu)/2 (s-_1 (x) s+_1 + s+_n (x) s-_n) - gamma 1 (x) 1
struct LadderRows {
  ComplexMatrix coherent;
  ComplexMatrix jump_bias;
  ComplexMatrix jump_anti;
};
LadderRows ladder_rows(const XXZParams& p);

/// Liouvillian assembled from the ladder rows, independent of build_superoperator.
SuperOperator ladder_liouvillian(const XXZParams& p);

}  // namespace ptlindblad
