#include "ptlindblad/xxz.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "ptlindblad/errors.hpp"

namespace ptlindblad {

void XXZParams::validate() const {
  if (n < 2 || n > 7) throw InvalidArgument("xxz: n must be in 2..7, got " + std::to_string(n));
  if (!std::isfinite(delta)) throw InvalidArgument("xxz: delta must be finite");
  if (!(mu >= -1.0 && mu <= 1.0)) throw InvalidArgument("xxz: mu must lie in [-1, 1]");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("xxz: gamma must be finite and >= 0");
}

ComplexMatrix xxz_hamiltonian(int n, double delta) {
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int j = 1; j < n; ++j) {
    h += 2.0 * site_operator(Pauli::Plus, j, n) * site_operator(Pauli::Minus, j + 1, n);
    h += 2.0 * site_operator(Pauli::Minus, j, n) * site_operator(Pauli::Plus, j + 1, n);
    h += delta * site_operator(Pauli::Z, j, n) * site_operator(Pauli::Z, j + 1, n);
  }
  return h;
}

std::vector<ComplexMatrix> xxz_lindblads(int n, double mu) {
  const double a = 0.5 * std::sqrt(1.0 + mu);
  const double b = 0.5 * std::sqrt(1.0 - mu);
  return {a * site_operator(Pauli::Plus, 1, n), b * site_operator(Pauli::Minus, 1, n),
          b * site_operator(Pauli::Plus, n, n), a * site_operator(Pauli::Minus, n, n)};
}

LindbladModel xxz_model(const XXZParams& p) {
  p.validate();
  return {xxz_hamiltonian(p.n, p.delta), xxz_lindblads(p.n, p.mu), p.gamma};
}

ComplexMatrix spin_current(int n) {
  if (n < 2) throw InvalidArgument("spin_current: n must be >= 2");
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix j = ComplexMatrix::Zero(dim, dim);
  for (int s = 1; s < n; ++s) {
    j += site_operator(Pauli::Plus, s, n) * site_operator(Pauli::Minus, s + 1, n) -
         site_operator(Pauli::Minus, s, n) * site_operator(Pauli::Plus, s + 1, n);
  }
  return kI * j;
}

std::vector<BasisPair> sector_basis(int n, int dmz) {
  if (n < 1 || n > 14) throw InvalidArgument("sector_basis: bad chain length");
  if (std::abs(dmz) > 2 * n) throw InvalidArgument("sector_basis: |dMz| must be <= 2n");
  const std::size_t dim = std::size_t{1} << n;
  std::vector<BasisPair> out;
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t k = 0; k < dim; ++k)
      if (magnetization(j, n) - magnetization(k, n) == dmz) out.emplace_back(j, k);
  return out;
}

ComplexMatrix ladder_to_operator_basis(const ComplexMatrix& ladder, int n) {
  const std::size_t dim = std::size_t{1} << n;
  const ComplexMatrix flip = kron(identity(dim), global_spin_flip(n));
  return flip * ladder * flip;
}

ComplexMatrix operator_to_ladder_basis(const ComplexMatrix& sup, int n) {
  // the conversion is its own inverse
  return ladder_to_operator_basis(sup, n);
}

LadderRows ladder_rows(const XXZParams& p) {
  p.validate();
  const int n = p.n;
  const std::size_t dim = std::size_t{1} << n;
  const ComplexMatrix id = identity(dim);
  const ComplexMatrix h = xxz_hamiltonian(n, p.delta);
  const ComplexMatrix zb = site_operator(Pauli::Z, 1, n) - site_operator(Pauli::Z, n, n);
  const ComplexMatrix a = kI * h - (p.gamma * p.mu / 4.0) * zb;

  const ComplexMatrix sp1 = site_operator(Pauli::Plus, 1, n), sm1 = site_operator(Pauli::Minus, 1, n);
  const ComplexMatrix spn = site_operator(Pauli::Plus, n, n), smn = site_operator(Pauli::Minus, n, n);

  const ComplexMatrix row1 = kron(id, a) - kron(a, id);
  const ComplexMatrix row2 = (p.gamma * (1.0 + p.mu) / 2.0) * (kron(sp1, sm1) + kron(smn, spn));
  ComplexMatrix row3 = (p.gamma * (1.0 - p.mu) / 2.0) * (kron(sm1, sp1) + kron(spn, smn));
  row3.diagonal().array() -= p.gamma;

  return {ladder_to_operator_basis(row1, n), ladder_to_operator_basis(row2, n),
          ladder_to_operator_basis(row3, n)};
}

SuperOperator ladder_liouvillian(const XXZParams& p) {
  LadderRows rows = ladder_rows(p);
  return SuperOperator::full(rows.coherent + rows.jump_bias + rows.jump_anti, BasisConvention::spin_chain(p.n));
}

}  // namespace ptlindblad
