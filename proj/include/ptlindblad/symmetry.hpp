#pragma once

#include <array>
#include <vector>

#include "ptlindblad/liouville.hpp"
#include "ptlindblad/xxz.hpp"

namespace ptlindblad {

/// Unitary involution P rho = A rho B on B(H).  The (A, B) pair is the source
/// of truth; `sup` is derived from it and may be restricted to a sector.
struct ParitySuperOp {
  SuperOperator sup;
  ComplexMatrix left_op;
  ComplexMatrix right_op;

  ComplexMatrix apply(const ComplexMatrix& rho) const { return left_op * rho * right_op; }
};

/// Builds P from (A, B).  Throws NotUnitary unless A and B are unitary and
/// NotInvolution unless P^2 = 1 (A^2 and B^2 reciprocal phases).
ParitySuperOp parity_from_pair(const ComplexMatrix& a, const ComplexMatrix& b);

/// Restricts P to the basis elements of `labels`; the sector must be P-invariant.
ParitySuperOp restrict_parity(const ParitySuperOp& p, const std::vector<BasisPair>& labels);

/// XXZ parity  rho -> (R prod_j sz_j) rho R.
ParitySuperOp xxz_parity(int n);
/// The same map written literally as (R prod sz) (x) R on the ladder space and
/// converted back; used to cross-check xxz_parity.
ComplexMatrix xxz_parity_ladder(int n);

struct SymmetryReport {
  double pt_residual = 0.0;      ///< ||L'^+ + P L' P||_F / max(1, ||L'||_F)
  double pt_residual_abs = 0.0;  ///< ||L'^+ + P L' P||_F
  double involution_residual = 0.0;
  double unitarity_residual = 0.0;
  double gamma_bar = 0.0;
};

/// Residual of the master-symmetry identity (L')^+ = -P L' P for L' the
/// traceless part of `liou`.  Failure is reported through the residuals.
SymmetryReport check_pt(const SuperOperator& liou, const ParitySuperOp& parity);

/// Same identity applied to the traceless part of an arbitrary superoperator matrix.
double pt_residual(const ComplexMatrix& m, const ComplexMatrix& parity);

/// PT residuals of the traceless parts of the three ladder rows separately.
std::array<double, 3> check_pt_rows(const XXZParams& p);

/// ||U(-t) - e^{2 gamma_bar t} P U(t)^+ P||_F / ||U(-t)||_F.
double check_inversion(const SuperOperator& liou, const ParitySuperOp& parity, double t);

}  // namespace ptlindblad
