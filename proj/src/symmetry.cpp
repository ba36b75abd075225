#include "ptlindblad/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptlindblad/errors.hpp"

namespace ptlindblad {

namespace {

double unitarity_residual(const ComplexMatrix& p) {
  return max_abs(p.adjoint() * p - identity(static_cast<std::size_t>(p.rows())));
}

double involution_residual(const ComplexMatrix& p) {
  return max_abs(p * p - identity(static_cast<std::size_t>(p.rows())));
}

}  // namespace

ParitySuperOp parity_from_pair(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw DimensionMismatch("parity_from_pair: A and B must be square and of equal size");
  }
  const std::size_t n = static_cast<std::size_t>(a.rows());
  if (!is_unitary(a, 1e-12) || !is_unitary(b, 1e-12)) {
    throw NotUnitary("parity_from_pair: A and B must both be unitary");
  }
  ParitySuperOp p;
  p.left_op = a;
  p.right_op = b;
  p.sup = SuperOperator::full(sandwich_superoperator(a, b), BasisConvention::generic(n));
  if (n >= 2 && (n & (n - 1)) == 0) {
    int sites = 0;
    while ((std::size_t{1} << sites) < n) ++sites;
    p.sup.convention.sites = sites;
  }
  // P^2 rho = A^2 rho B^2
  const double inv = max_abs(sandwich_superoperator(a * a, b * b) - identity(n * n));
  if (inv > 1e-12) {
    std::ostringstream os;
    os << "parity_from_pair: P^2 differs from identity by " << inv;
    throw NotInvolution(os.str());
  }
  return p;
}

ParitySuperOp restrict_parity(const ParitySuperOp& p, const std::vector<BasisPair>& labels) {
  ParitySuperOp out = p;
  out.sup = sector_restrict(p.sup, labels);
  return out;
}

ParitySuperOp xxz_parity(int n) {
  const ComplexMatrix r = reflection(n);
  return parity_from_pair(r * sz_string(n), r);
}

ComplexMatrix xxz_parity_ladder(int n) {
  const ComplexMatrix r = reflection(n);
  return ladder_to_operator_basis(kron(r * sz_string(n), r), n);
}

double pt_residual(const ComplexMatrix& m, const ComplexMatrix& parity) {
  if (m.rows() != parity.rows()) throw DimensionMismatch("pt_residual: parity and generator sizes differ");
  ComplexMatrix lp = m;
  const double g = -m.trace().real() / static_cast<double>(m.rows());
  lp.diagonal().array() += g;
  const double abs_res = (lp.adjoint() + parity * lp * parity).norm();
  return abs_res / std::max(1.0, lp.norm());
}

namespace {
// full-space parity is restricted to the Liouvillian's sector
ParitySuperOp matched(const SuperOperator& liou, const ParitySuperOp& parity) {
  if (parity.sup.dim() != liou.dim() && parity.sup.is_full() && !liou.is_full()) {
    return restrict_parity(parity, liou.labels);
  }
  return parity;
}
}  // namespace

SymmetryReport check_pt(const SuperOperator& liou, const ParitySuperOp& parity_in) {
  const ParitySuperOp parity = matched(liou, parity_in);
  const ComplexMatrix& p = parity.sup.matrix;
  if (p.rows() != liou.matrix.rows()) {
    throw DimensionMismatch("check_pt: parity and Liouvillian live on different spaces");
  }
  SymmetryReport rep;
  rep.gamma_bar = average_damping(liou);
  const ComplexMatrix lp = traceless_part(liou).matrix;
  rep.pt_residual_abs = (lp.adjoint() + p * lp * p).norm();
  rep.pt_residual = rep.pt_residual_abs / std::max(1.0, lp.norm());
  rep.involution_residual = involution_residual(p);
  rep.unitarity_residual = unitarity_residual(p);
  return rep;
}

std::array<double, 3> check_pt_rows(const XXZParams& p) {
  const LadderRows rows = ladder_rows(p);
  const ComplexMatrix parity = xxz_parity(p.n).sup.matrix;
  return {pt_residual(rows.coherent, parity), pt_residual(rows.jump_bias, parity),
          pt_residual(rows.jump_anti, parity)};
}

double check_inversion(const SuperOperator& liou, const ParitySuperOp& parity_in, double t) {
  const ParitySuperOp parity = matched(liou, parity_in);
  const ComplexMatrix& p = parity.sup.matrix;
  if (p.rows() != liou.matrix.rows()) {
    throw DimensionMismatch("check_inversion: parity and Liouvillian live on different spaces");
  }
  const double g = average_damping(liou);
  const ComplexMatrix backward = propagator(liou, -t).matrix;
  const ComplexMatrix forward = propagator(liou, t).matrix;
  const ComplexMatrix rhs = std::exp(2.0 * g * t) * (p * forward.adjoint() * p);
  return (backward - rhs).norm() / backward.norm();
}

}  // namespace ptlindblad
