#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace ptlindblad {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Index conventions shared by every module.
///
/// A spin-chain basis state |m_1 ... m_n> has index sum_j bit(m_j) 2^(n-j) with
/// bit(up) = 0 and bit(down) = 1, so site 1 is the most significant bit and
/// sigma^z |up> = +|up>.  Operators are vectorized row-major: E_{j,k} = |j><k|
/// sits at flat index j*N + k.  With this choice the superoperator of
/// rho -> A rho B is kron(A, B^T).
struct BasisConvention {
  std::size_t hilbert_dim = 0;  ///< N
  int sites = 0;                ///< n, or 0 when the space is not a spin chain

  static BasisConvention spin_chain(int n);
  static BasisConvention generic(std::size_t dim) { return {dim, 0}; }

  std::size_t flat_index(std::size_t j, std::size_t k) const { return j * hilbert_dim + k; }
  /// spins[j] == true means site j+1 is down.
  static std::size_t state_index(const std::vector<bool>& spins_down);
};

enum class Pauli { X, Y, Z, Plus, Minus };

ComplexMatrix pauli(Pauli kind);
ComplexMatrix identity(std::size_t dim);

/// (kron(A,B))_{a*dB+b, c*dB+d} = A_{a,c} B_{b,d}
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix dagger(const ComplexMatrix& a);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hilbert-Schmidt inner product tr(A^dagger B).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// I_2^{(j-1)} (x) sigma^kind (x) I_2^{(n-j)}, sites numbered 1..n.
ComplexMatrix site_operator(Pauli kind, int site, int n);

/// Matrix exponential by Pade scaling-and-squaring.  Absolute accuracy is
/// better than 1e-10 for dim <= 1024 and spectral radius <= 50.
ComplexMatrix mat_exp(const ComplexMatrix& a);

/// Entrywise comparison: max |a_ij - b_ij| <= tol.
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);
/// Default tolerance 1e-12 * max(1, ||a||_inf).
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs(const ComplexMatrix& a);
bool all_finite(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol);
bool is_unitary(const ComplexMatrix& a, double tol);

// Spin-chain helpers.

/// Number of up spins minus number of down spins of basis state `index`.
int magnetization(std::size_t index, int n);
/// M^z = sum_j sigma^z_j.
ComplexMatrix total_magnetization(int n);
/// Site-order reversal j <-> n+1-j as a permutation matrix.
ComplexMatrix reflection(int n);
/// prod_j sigma^z_j.
ComplexMatrix sz_string(int n);
/// S = prod_j sigma^x_j.
ComplexMatrix global_spin_flip(int n);

}  // namespace ptlindblad
