#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ptlindblad/liouville.hpp"
#include "ptlindblad/symmetry.hpp"

namespace ptlindblad {

/// Full eigendecomposition L u_a = lambda_a u_a, L^+ v_a = conj(lambda_a) v_a
/// with (u_a, v_b) = delta_ab.  Eigenvalues are sorted by real part
/// descending, then imaginary part ascending (real parts within
/// 1e-10 * scale() count as equal).  Right vectors have unit norm; left
/// vectors are the rows of the inverse eigenvector matrix.
struct SpectralDecomposition {
  ComplexVector eigenvalues;
  ComplexMatrix right;  ///< columns u_a
  ComplexMatrix left;   ///< columns v_a
  std::vector<double> right_residuals;  ///< ||L u - lambda u|| / ||u||
  std::vector<double> left_residuals;   ///< ||L^+ v - conj(lambda) v|| / ||v||
  std::vector<std::size_t> cluster_of;  ///< cluster id per eigenvalue
  std::vector<std::vector<std::size_t>> clusters;
  double spectral_radius = 0.0;
  double matrix_norm = 0.0;  ///< sqrt(||L||_1 ||L||_inf), an upper bound on ||L||_2
  double degeneracy_tol = 0.0;
  std::vector<BasisPair> labels;
  std::size_t hilbert_dim = 0;

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
  double scale() const { return spectral_radius > 1.0 ? spectral_radius : 1.0; }
  bool is_simple(std::size_t a) const { return clusters[cluster_of[a]].size() == 1; }
  /// Index of the eigenvalue closest to z.
  std::size_t nearest(Complex z) const;
  /// Position of (k,j) for the label (j,k) at position i, if present.
  std::optional<std::size_t> transpose_position(std::size_t i) const;
  /// vec(X^+) for X given as a vector over `labels`; nullopt if the label set
  /// is not closed under transposition.
  std::optional<ComplexVector> adjoint_vector(const ComplexVector& x) const;

  std::vector<std::size_t> transpose_index;  ///< SIZE_MAX when absent
};

/// Dense Schur-based decomposition.  `degeneracy_rel` sets the clustering
/// threshold degeneracy_rel * max(1, spectral radius).  Throws
/// ConvergenceFailure with the solver diagnostics when the QR iteration stalls.
SpectralDecomposition eig_biortho(const SuperOperator& sup, double degeneracy_rel = 1e-8);

/// Sine of the principal angle between a and b (0 means collinear up to phase).
double collinearity_error(const ComplexVector& a, const ComplexVector& b);

/// Steady state: the zero mode rescaled to unit trace, as an N x N operator.
/// Throws NoZeroMode when no |lambda| <= 1e-9 ||L||.
ComplexMatrix steady_state(const SpectralDecomposition& dec);
std::size_t steady_state_index(const SpectralDecomposition& dec);

/// Partition into the real axis l_h (|Im| <= tau), the vertical line
/// l_v = -gamma_bar + iR (|Re + gamma_bar| <= tau) and the remainder, with
/// tau = tau_rel * max(1, spectral radius).  Members of both lines go to l_h.
struct CrossClassification {
  std::vector<std::size_t> on_h;
  std::vector<std::size_t> on_v;
  std::vector<std::size_t> off_cross;
  double tau = 0.0;
  /// Whether the partition is unchanged with tau scaled by 0.9 and 1.1.
  bool stable = true;
};

CrossClassification classify_cross(const SpectralDecomposition& dec, double gamma_bar, double tau_rel = 1e-8);

/// Greedy one-to-one pairing of each lambda with the image of lambda under
/// reflection across l_v (-conj(lambda) - 2 gamma_bar) and across l_h (conj(lambda)).
struct D2Report {
  double max_v_error = 0.0;
  double max_h_error = 0.0;
  std::vector<std::size_t> v_pairing;  ///< v_pairing[a] = b with lambda_b ~ image_v(lambda_a)
  std::vector<std::size_t> h_pairing;
  double scale = 1.0;
};

D2Report verify_d2(const SpectralDecomposition& dec, double gamma_bar);

/// Checks u_b ~ P v_a, v_b ~ P u_a for the l_v partner b and u_e ~ u_a^+,
/// v_e ~ v_a^+ for the l_h partner e, over simple eigenvalues only.
struct PartnerReport {
  double max_v_vector_error = 0.0;
  double max_h_vector_error = 0.0;
  std::size_t checked_v = 0;
  std::size_t checked_h = 0;
  std::vector<std::size_t> skipped;  ///< eigenvalues in degenerate clusters or with degenerate partners
};

/// `parity` may be full-space; it is restricted to dec.labels when needed.
PartnerReport pt_partner_check(const SpectralDecomposition& dec, const ParitySuperOp& parity, double gamma_bar);

}  // namespace ptlindblad
