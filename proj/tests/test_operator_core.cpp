#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "ptlindblad/errors.hpp"
#include "ptlindblad/operator_core.hpp"

using namespace ptlindblad;

TEST(Pauli, Algebra) {
  const ComplexMatrix x = pauli(Pauli::X), y = pauli(Pauli::Y), z = pauli(Pauli::Z);
  EXPECT_TRUE(approx_equal(x * y, kI * z, 1e-15));
  EXPECT_TRUE(approx_equal(x * x, identity(2), 1e-15));
  ComplexMatrix plus(2, 2);
  plus << 0, 1, 0, 0;
  EXPECT_TRUE(approx_equal(pauli(Pauli::Plus), plus, 0.0));
  EXPECT_TRUE(approx_equal(pauli(Pauli::Minus), plus.adjoint(), 0.0));
  EXPECT_TRUE(approx_equal(pauli(Pauli::Plus), 0.5 * (x + kI * y), 1e-15));
}

TEST(Kron, MatchesDefinition) {
  std::mt19937_64 rng(11);
  const ComplexMatrix a = oracle::random_matrix(rng, 2), b = oracle::random_matrix(rng, 3);
  const ComplexMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 6);
  for (int ar = 0; ar < 2; ++ar)
    for (int ac = 0; ac < 2; ++ac)
      for (int br = 0; br < 3; ++br)
        for (int bc = 0; bc < 3; ++bc) EXPECT_EQ(k(ar * 3 + br, ac * 3 + bc), a(ar, ac) * b(br, bc));
}

TEST(Kron, MixedProductProperty) {
  std::mt19937_64 rng(12);
  for (int c = 0; c < 100; ++c) {
    const int da = 1 + c % 3, db = 1 + (c / 3) % 3;
    const ComplexMatrix a = oracle::random_matrix(rng, da), b = oracle::random_matrix(rng, db);
    const ComplexMatrix a2 = oracle::random_matrix(rng, da), b2 = oracle::random_matrix(rng, db);
    EXPECT_TRUE(approx_equal(kron(a, b) * kron(a2, b2), kron(a * a2, b * b2), 1e-12));
    EXPECT_TRUE(approx_equal(dagger(kron(a, b)), kron(dagger(a), dagger(b)), 0.0));
  }
}

TEST(SiteOperator, MatchesBitOracle) {
  for (int n = 1; n <= 4; ++n) {
    for (int s = 1; s <= n; ++s) {
      EXPECT_TRUE(approx_equal(site_operator(Pauli::Plus, s, n), oracle::raise(s, n), 0.0));
      EXPECT_TRUE(approx_equal(site_operator(Pauli::Minus, s, n), oracle::lower(s, n), 0.0));
    }
  }
  EXPECT_THROW(site_operator(Pauli::X, 0, 3), InvalidArgument);
  EXPECT_THROW(site_operator(Pauli::X, 4, 3), InvalidArgument);
}

TEST(BasisConvention, SiteOneIsMostSignificant) {
  EXPECT_EQ(BasisConvention::state_index({true, false, false}), 4u);
  EXPECT_EQ(BasisConvention::state_index({false, false, true}), 1u);
  EXPECT_EQ(BasisConvention::spin_chain(3).hilbert_dim, 8u);
  EXPECT_EQ(BasisConvention::spin_chain(3).flat_index(2, 5), 21u);
  // sigma^z_1 on |down up up> = index 4
  EXPECT_EQ(site_operator(Pauli::Z, 1, 3)(4, 4), Complex(-1.0));
}

TEST(SpinHelpers, MatchOracle) {
  for (int n = 2; n <= 5; ++n) {
    EXPECT_TRUE(approx_equal(reflection(n), oracle::reflection(n), 0.0));
    EXPECT_TRUE(approx_equal(sz_string(n), oracle::sz_string(n), 0.0));
    const ComplexMatrix s = global_spin_flip(n);
    EXPECT_TRUE(approx_equal(s * s, identity(std::size_t{1} << n), 0.0));
    EXPECT_TRUE(approx_equal(s * site_operator(Pauli::Z, 1, n) * s, -site_operator(Pauli::Z, 1, n), 0.0));
    const ComplexMatrix mz = total_magnetization(n);
    for (int st = 0; st < (1 << n); ++st) {
      EXPECT_EQ(magnetization(static_cast<std::size_t>(st), n), static_cast<int>(oracle::magnetization(st, n)));
      EXPECT_EQ(mz(st, st).real(), oracle::magnetization(st, n));
    }
  }
}

TEST(MatExp, KnownCases) {
  EXPECT_TRUE(approx_equal(mat_exp(ComplexMatrix::Zero(3, 3)), identity(3), 0.0));
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = Complex(0.5, 1.0);
  d(1, 1) = -2.0;
  const ComplexMatrix e = mat_exp(d);
  EXPECT_NEAR(std::abs(e(0, 0) - std::exp(Complex(0.5, 1.0))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(e(1, 1) - std::exp(-2.0)), 0.0, 1e-15);
  // Jordan block
  ComplexMatrix j(2, 2);
  j << 1, 1, 0, 1;
  ComplexMatrix ej(2, 2);
  ej << std::exp(1.0), std::exp(1.0), 0, std::exp(1.0);
  EXPECT_TRUE(approx_equal(mat_exp(j), ej, 1e-14));
}

TEST(MatExp, GroupAndUnitarityProperties) {
  std::mt19937_64 rng(13);
  for (int c = 0; c < 100; ++c) {
    const int n = 2 + c % 5;
    const ComplexMatrix h = oracle::random_hermitian(rng, n);
    const ComplexMatrix u = mat_exp(-kI * h);
    EXPECT_TRUE(is_unitary(u, 1e-12));
    const ComplexMatrix a = oracle::random_matrix(rng, n, 0.5);
    EXPECT_TRUE(approx_equal(mat_exp(a) * mat_exp(-a), identity(static_cast<std::size_t>(n)), 1e-12));
  }
}

TEST(MatExp, RejectsNonFinite) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(mat_exp(a), InvalidArgument);
}

TEST(HsInner, ValuesAndErrors) {
  std::mt19937_64 rng(14);
  const ComplexMatrix a = oracle::random_matrix(rng, 3), b = oracle::random_matrix(rng, 3);
  EXPECT_NEAR(std::abs(hs_inner(a, b) - (a.adjoint() * b).trace()), 0.0, 1e-13);
  EXPECT_THROW(hs_inner(a, identity(2)), DimensionMismatch);
}

TEST(Predicates, Hermitian) {
  ComplexMatrix a = pauli(Pauli::Y);
  EXPECT_TRUE(is_hermitian(a, 0.0));
  a(0, 1) += 1e-6;
  EXPECT_FALSE(is_hermitian(a, 1e-9));
  EXPECT_TRUE(is_unitary(pauli(Pauli::X), 0.0));
  EXPECT_FALSE(is_unitary(pauli(Pauli::Plus), 1e-3));
  EXPECT_EQ(commutator(pauli(Pauli::X), pauli(Pauli::Y)), 2.0 * kI * pauli(Pauli::Z));
}
