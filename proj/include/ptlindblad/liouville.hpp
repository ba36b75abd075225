#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ptlindblad/operator_core.hpp"

namespace ptlindblad {

/// Generator  L rho = -i[H, rho] + gamma * sum_m (2 L_m rho L_m^+ - {L_m^+ L_m, rho}).
struct LindbladModel {
  ComplexMatrix hamiltonian;
  std::vector<ComplexMatrix> lindblads;
  double gamma = 0.0;

  std::size_t dim() const { return static_cast<std::size_t>(hamiltonian.rows()); }
  /// Throws ValidationError on non-square / mismatched / non-Hermitian input.
  void validate() const;
};

using BasisPair = std::pair<std::size_t, std::size_t>;

/// Matrix of a linear map on B(H) in the row-major E_{j,k} basis, possibly
/// restricted to an invariant subset of basis elements (`labels`).
struct SuperOperator {
  ComplexMatrix matrix;
  BasisConvention convention;
  std::vector<BasisPair> labels;  ///< (j,k) of each retained basis element, in matrix order

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
  std::size_t hilbert_dim() const { return convention.hilbert_dim; }
  bool is_full() const { return dim() == hilbert_dim() * hilbert_dim(); }

  static SuperOperator full(ComplexMatrix m, BasisConvention conv);
};

std::vector<BasisPair> full_labels(std::size_t hilbert_dim);

/// Row-major vectorization: vec(rho)[j*N + k] = rho(j, k).
ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexVector& v, std::size_t hilbert_dim);
/// Embeds a vector over `labels` into the full N x N operator (zeros elsewhere).
ComplexMatrix unvectorize(const ComplexVector& v, const std::vector<BasisPair>& labels,
                          std::size_t hilbert_dim);
/// Restricts vec(rho) to the given labels.
ComplexVector vectorize(const ComplexMatrix& rho, const std::vector<BasisPair>& labels);

/// Superoperator of rho -> A rho B, i.e. kron(A, B^T).
ComplexMatrix sandwich_superoperator(const ComplexMatrix& a, const ComplexMatrix& b);

/// -i ad H.
SuperOperator hamiltonian_part(const ComplexMatrix& h, const BasisConvention& conv);
/// D rho = sum_m 2 L_m rho L_m^+ - L_m^+ L_m rho - rho L_m^+ L_m.
SuperOperator dissipator(const std::vector<ComplexMatrix>& lindblads, const BasisConvention& conv);
/// Tr D evaluated in closed form: sum_m 2|tr L_m|^2 - 2N tr(L_m^+ L_m).
double dissipator_trace(const std::vector<ComplexMatrix>& lindblads);
/// D' = D + 1.  Requires Tr D = -N^2 (to 1e-9 N^2); throws DissipatorNotNormalized otherwise.
SuperOperator traceless_dissipator(const LindbladModel& model);
/// Rescales the Lindblad operators so that Tr D = -N^2 and compensates in gamma,
/// leaving the generator unchanged.
LindbladModel trace_normalized(const LindbladModel& model);

SuperOperator build_superoperator(const LindbladModel& model);
/// The generator applied by direct operator arithmetic (no superoperator).
ComplexMatrix apply_lindbladian(const LindbladModel& model, const ComplexMatrix& rho);

/// gamma_bar = -Tr L / dim.
double average_damping(const SuperOperator& sup);
/// L' = L + gamma_bar * 1.
SuperOperator traceless_part(const SuperOperator& sup);
/// exp(t L).
SuperOperator propagator(const SuperOperator& sup, double t);

/// Max over basis elements E of ||L(E^+) - (L E)^+||; zero for every
/// hermiticity-preserving map.  Requires a full-space superoperator.
double hermiticity_residual(const SuperOperator& sup);

/// Principal submatrix on `keep`.  Throws SectorNotInvariant when kept and
/// dropped basis elements couple by more than 1e-12 in either direction.
SuperOperator sector_restrict(const SuperOperator& sup, const std::vector<BasisPair>& keep);
/// Positions of `keep` inside sup.labels; throws InvalidArgument on unknown pairs.
std::vector<std::size_t> label_positions(const SuperOperator& sup, const std::vector<BasisPair>& keep);

double frobenius(const ComplexMatrix& m);

}  // namespace ptlindblad
