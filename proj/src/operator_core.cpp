#include "ptlindblad/operator_core.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "ptlindblad/errors.hpp"

namespace ptlindblad {

namespace {

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + ", expected square");
  }
}

void require_chain(int n) {
  if (n < 1 || n > 14) throw InvalidArgument("chain length must be in 1..14, got " + std::to_string(n));
}

}  // namespace

BasisConvention BasisConvention::spin_chain(int n) {
  require_chain(n);
  return {std::size_t{1} << n, n};
}

std::size_t BasisConvention::state_index(const std::vector<bool>& spins_down) {
  std::size_t idx = 0;
  for (bool down : spins_down) idx = (idx << 1) | (down ? 1u : 0u);
  return idx;
}

ComplexMatrix pauli(Pauli kind) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (kind) {
    case Pauli::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Pauli::Y:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case Pauli::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case Pauli::Plus:  // |up><down|
      m(0, 1) = 1.0;
      break;
    case Pauli::Minus:
      m(1, 0) = 1.0;
      break;
  }
  return m;
}

ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index br = b.rows(), bc = b.cols();
  ComplexMatrix out(a.rows() * br, a.cols() * bc);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("hs_inner: operands have different shapes");
  }
  // tr(A^dagger B) = sum_ij conj(A_ij) B_ij
  return (a.array().conjugate() * b.array()).sum();
}

ComplexMatrix site_operator(Pauli kind, int site, int n) {
  require_chain(n);
  if (site < 1 || site > n) {
    throw InvalidArgument("site index " + std::to_string(site) + " outside 1.." + std::to_string(n));
  }
  const std::size_t left = std::size_t{1} << (site - 1);
  const std::size_t right = std::size_t{1} << (n - site);
  return kron(kron(identity(left), pauli(kind)), identity(right));
}

ComplexMatrix mat_exp(const ComplexMatrix& a) {
  require_square(a, "mat_exp");
  if (!all_finite(a)) throw InvalidArgument("mat_exp: non-finite input");
  if (a.isZero(0.0)) return identity(static_cast<std::size_t>(a.rows()));
  return a.exp();
}

double max_abs(const ComplexMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs(a - b) <= tol;
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double inf_norm = a.size() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff();
  return approx_equal(a, b, 1e-12 * std::max(1.0, inf_norm));
}

bool all_finite(const ComplexMatrix& a) {
  return a.real().allFinite() && a.imag().allFinite();
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& a, double tol) {
  return a.rows() == a.cols() &&
         max_abs(a.adjoint() * a - identity(static_cast<std::size_t>(a.rows()))) <= tol;
}

int magnetization(std::size_t index, int n) {
  int m = 0;
  for (int bit = 0; bit < n; ++bit) m += ((index >> bit) & 1u) ? -1 : 1;
  return m;
}

ComplexMatrix total_magnetization(int n) {
  require_chain(n);
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = magnetization(i, n);
  return m;
}

ComplexMatrix reflection(int n) {
  require_chain(n);
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix r = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t rev = 0;
    for (int bit = 0; bit < n; ++bit) rev |= ((i >> bit) & 1u) << (n - 1 - bit);
    r(rev, i) = 1.0;
  }
  return r;
}

ComplexMatrix sz_string(int n) {
  require_chain(n);
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix z = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const int downs = (n - magnetization(i, n)) / 2;
    z(i, i) = (downs % 2 == 0) ? 1.0 : -1.0;
  }
  return z;
}

ComplexMatrix global_spin_flip(int n) {
  require_chain(n);
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) s(dim - 1 - i, i) = 1.0;
  return s;
}

}  // namespace ptlindblad
