#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "ptlindblad/errors.hpp"
#include "ptlindblad/spectral.hpp"

using namespace ptlindblad;

namespace {

LindbladModel qubit(double omega, double gamma) {
  LindbladModel m;
  m.hamiltonian = 0.5 * omega * pauli(Pauli::Z);
  m.lindblads = {pauli(Pauli::Minus)};
  m.gamma = gamma;
  return m;
}

LindbladModel two_qubit_toy(double omega2, double gamma) {
  LindbladModel m;
  m.hamiltonian = 0.5 * site_operator(Pauli::Z, 1, 2) + 0.5 * omega2 * site_operator(Pauli::Z, 2, 2);
  for (int s = 1; s <= 2; ++s) {
    m.lindblads.push_back(0.5 * site_operator(Pauli::Plus, s, 2));
    m.lindblads.push_back(0.5 * site_operator(Pauli::Minus, s, 2));
  }
  m.gamma = gamma;
  return m;
}

}  // namespace

TEST(Eig, SingleQubitAnalyticSpectrumAndOrder) {
  const SpectralDecomposition dec = eig_biortho(build_superoperator(qubit(1.0, 0.1)));
  ASSERT_EQ(dec.size(), 4u);
  const std::vector<Complex> expect{{0, 0}, {-0.1, -1}, {-0.1, 1}, {-0.2, 0}};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(dec.eigenvalues(i) - expect[i]), 0.0, 1e-12);
}

TEST(Eig, BiorthonormalityAndResiduals) {
  std::mt19937_64 rng(51);
  for (int c = 0; c < 100; ++c) {
    LindbladModel m;
    const int n = 2 + c % 2;
    m.hamiltonian = oracle::random_hermitian(rng, n);
    m.lindblads = {oracle::random_matrix(rng, n, 0.5)};
    m.gamma = 0.5;
    const SpectralDecomposition dec = eig_biortho(build_superoperator(m));
    const ComplexMatrix overlap = dec.left.adjoint() * dec.right;
    EXPECT_LE(max_abs(overlap - ComplexMatrix::Identity(overlap.rows(), overlap.cols())), 1e-9);
    for (double r : dec.right_residuals) EXPECT_LE(r, 1e-10);
    // closed left half-plane and conjugate pairs
    EXPECT_LE(dec.eigenvalues.real().maxCoeff(), 1e-10 * dec.scale());
    std::vector<Complex> ev(dec.eigenvalues.data(), dec.eigenvalues.data() + dec.size()), conj;
    for (const Complex& z : ev) conj.push_back(std::conj(z));
    EXPECT_LE(oracle::set_distance(ev, conj), 1e-9 * dec.scale());
  }
}

TEST(Eig, SortRule) {
  const SpectralDecomposition dec = eig_biortho(build_superoperator(xxz_model({3, 0.5, 0.5, 0.3})));
  for (std::size_t i = 1; i < dec.size(); ++i) {
    const Complex a = dec.eigenvalues(i - 1), b = dec.eigenvalues(i);
    EXPECT_GE(a.real(), b.real() - 1e-10 * dec.scale());
    if (std::abs(a.real() - b.real()) <= 1e-12) EXPECT_LE(a.imag(), b.imag());
  }
}

TEST(Eig, ClustersAndRejection) {
  SuperOperator s = SuperOperator::full(ComplexMatrix::Zero(4, 4), BasisConvention::generic(2));
  s.matrix.diagonal() << 0, -1, -1, -2;
  const SpectralDecomposition dec = eig_biortho(s);
  EXPECT_EQ(dec.clusters.size(), 3u);
  EXPECT_FALSE(dec.is_simple(1));
  EXPECT_TRUE(dec.is_simple(0));
  SuperOperator bad = s;
  bad.matrix(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(eig_biortho(bad), InvalidArgument);
}

TEST(Collinearity, Basics) {
  ComplexVector a(2), b(2);
  a << 1, kI;
  b = Complex(0.3, -2.0) * a;
  EXPECT_LE(collinearity_error(a, b), 1e-15);
  b << 1, 0;
  EXPECT_NEAR(collinearity_error(a, b), std::sqrt(0.5), 1e-15);
}

TEST(SteadyState, QubitDecaysToGround) {
  const ComplexMatrix rho = steady_state(eig_biortho(build_superoperator(qubit(1.0, 0.3))));
  EXPECT_NEAR(std::abs(rho(1, 1) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(rho(0, 0)), 0.0, 1e-12);
  SuperOperator s = SuperOperator::full(-ComplexMatrix::Identity(4, 4), BasisConvention::generic(2));
  EXPECT_THROW(steady_state(eig_biortho(s)), NoZeroMode);
}

TEST(SteadyState, LeftZeroModeIsIdentity) {
  for (int n = 2; n <= 3; ++n) {
    const SpectralDecomposition dec = eig_biortho(build_superoperator(xxz_model({n, 0.5, 1.0, 0.4})));
    const std::size_t i = steady_state_index(dec);
    EXPECT_LE(std::abs(dec.eigenvalues(i)), 1e-10);
    EXPECT_LE(collinearity_error(dec.left.col(i), vectorize(identity(std::size_t{1} << n))), 1e-9);
  }
}

TEST(Cross, ChainN4SectorWeakCouplingCounts) {
  const SuperOperator l = sector_restrict(build_superoperator(xxz_model({4, 0.5, 1.0, 0.02})), sector_basis(4, 0));
  const SpectralDecomposition dec = eig_biortho(l);
  const CrossClassification c = classify_cross(dec, average_damping(l));
  EXPECT_EQ(c.on_h.size(), 16u);
  EXPECT_EQ(c.on_v.size(), 54u);
  EXPECT_TRUE(c.off_cross.empty());
  EXPECT_TRUE(c.stable);
}

TEST(D2, XXZSpectrumIsMirrorSymmetric) {
  for (double g : {0.02, 0.2, 2.0}) {
    const SuperOperator l = sector_restrict(build_superoperator(xxz_model({4, 0.5, 1.0, g})), sector_basis(4, 0));
    const SpectralDecomposition dec = eig_biortho(l);
    const D2Report r = verify_d2(dec, average_damping(l));
    EXPECT_LE(r.max_v_error, 1e-8 * dec.scale());
    EXPECT_LE(r.max_h_error, 1e-8 * dec.scale());
    // pairings are permutations
    std::vector<std::size_t> v = r.v_pairing;
    std::sort(v.begin(), v.end());
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], i);
  }
}

TEST(D2, NonSymmetricModelFailsVerticalPairing) {
  const SpectralDecomposition dec = eig_biortho(build_superoperator(qubit(1.0, 0.1)));
  // rates {0, 0.1, 0.3, 0.8}: no mirror image about -0.3
  SuperOperator s = SuperOperator::full(ComplexMatrix::Zero(4, 4), BasisConvention::generic(2));
  s.matrix.diagonal() << 0, -0.1, -0.3, -0.8;
  const D2Report r = verify_d2(eig_biortho(s), 0.3);
  EXPECT_GT(r.max_v_error, 0.1);
  EXPECT_LE(verify_d2(dec, 0.1).max_v_error, 1e-12);
}

TEST(Partners, EigenvectorRelationsForXXZ) {
  const XXZParams p{3, 0.5, 0.5, 0.3};
  const SuperOperator l = build_superoperator(xxz_model(p));
  const SpectralDecomposition dec = eig_biortho(l);
  const PartnerReport r = pt_partner_check(dec, xxz_parity(3), average_damping(l));
  EXPECT_GT(r.checked_v, 10u);
  EXPECT_GT(r.checked_h, 10u);
  EXPECT_LE(r.max_v_vector_error, 1e-8);
  EXPECT_LE(r.max_h_vector_error, 1e-8);
}

TEST(Cross, TwoQubitToyIsBrokenAtEveryCoupling) {
  for (double omega2 : {2.0, std::sqrt(2.0)}) {
    for (double g : {1e-4, 1e-2, 0.3, 5.0}) {
      const SuperOperator l = build_superoperator(two_qubit_toy(omega2, g));
      const CrossClassification c = classify_cross(eig_biortho(l), average_damping(l));
      EXPECT_EQ(c.off_cross.size(), 8u) << omega2 << " " << g;
      EXPECT_EQ(c.on_h.size(), 4u);
      EXPECT_EQ(c.on_v.size(), 4u);
    }
  }
}

TEST(Cross, SymmetricallyDrivenQubitIsNeverBroken) {
  for (double g : {1e-3, 0.1, 1.0, 20.0}) {
    LindbladModel m;
    m.hamiltonian = 0.5 * pauli(Pauli::Z);
    m.lindblads = {pauli(Pauli::Plus) / std::sqrt(2.0), pauli(Pauli::Minus) / std::sqrt(2.0)};
    m.gamma = g;
    const SuperOperator l = build_superoperator(m);
    EXPECT_LE(check_pt(l, parity_from_pair(pauli(Pauli::Z), identity(2))).pt_residual, 1e-14);
    EXPECT_TRUE(classify_cross(eig_biortho(l), average_damping(l)).off_cross.empty()) << g;
  }
}

TEST(Cross, DegenerateGapThreeLevelGenericDissipator) {
  // equally spaced levels, generic dissipation: spectrum leaves the cross
  std::mt19937_64 rng(52);
  LindbladModel m;
  m.hamiltonian = ComplexMatrix::Zero(3, 3);
  m.hamiltonian.diagonal() << 0, 1, 2;
  m.lindblads = {oracle::random_matrix(rng, 3)};
  m = trace_normalized(m);
  for (double g : {1e-3, 0.1, 1.0}) {
    m.gamma = g;
    const SuperOperator l = build_superoperator(m);
    EXPECT_FALSE(classify_cross(eig_biortho(l), average_damping(l)).off_cross.empty());
  }
}
