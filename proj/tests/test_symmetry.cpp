#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "ptlindblad/errors.hpp"
#include "ptlindblad/symmetry.hpp"

using namespace ptlindblad;

TEST(Parity, FromPairMatchesSandwich) {
  std::mt19937_64 rng(41);
  for (int c = 0; c < 20; ++c) {
    // involutive unitaries: U diag(+-1) U^+
    const ComplexMatrix u = oracle::random_unitary(rng, 3);
    ComplexMatrix d = ComplexMatrix::Identity(3, 3);
    d(c % 3, c % 3) = -1.0;
    const ComplexMatrix a = u * d * u.adjoint();
    const ParitySuperOp p = parity_from_pair(a, a);
    EXPECT_TRUE(approx_equal(p.sup.matrix, oracle::sandwich(a, a), 1e-13));
    const ComplexMatrix rho = oracle::random_matrix(rng, 3);
    EXPECT_TRUE(approx_equal(unvectorize(p.sup.matrix * vectorize(rho), 3), p.apply(rho), 1e-12));
  }
}

TEST(Parity, ValidatesUnitarityAndInvolution) {
  EXPECT_THROW(parity_from_pair(pauli(Pauli::Plus), pauli(Pauli::X)), NotUnitary);
  ComplexMatrix s(2, 2);  // sqrt of sigma_x-ish rotation: unitary but not an involution
  s << 0, -1, 1, 0;
  EXPECT_THROW(parity_from_pair(s, identity(2)), NotInvolution);
  // A^2 = -1 and B^2 = -1 still give an involution on B(H)
  EXPECT_NO_THROW(parity_from_pair(s, s));
  EXPECT_THROW(parity_from_pair(identity(2), identity(3)), DimensionMismatch);
}

TEST(Parity, XXZParityMatchesOracleAndLadderForm) {
  for (int n = 2; n <= 4; ++n) {
    const ParitySuperOp p = xxz_parity(n);
    const ComplexMatrix ref = oracle::sandwich(oracle::reflection(n) * oracle::sz_string(n), oracle::reflection(n));
    EXPECT_TRUE(approx_equal(p.sup.matrix, ref, 0.0));
    EXPECT_TRUE(approx_equal(xxz_parity_ladder(n), ref, 1e-15));
    EXPECT_TRUE(approx_equal(ref, ref.transpose(), 0.0));
    EXPECT_TRUE(approx_equal(ref * ref, ComplexMatrix::Identity(ref.rows(), ref.cols()), 0.0));
  }
}

TEST(PT, IdentityHoldsForXXZ) {
  for (int n = 2; n <= 3; ++n) {
    for (double mu : {0.0, 0.5, 1.0}) {
      for (double g : {0.01, 0.5, 2.0}) {
        const SuperOperator l = build_superoperator(xxz_model({n, 0.5, mu, g}));
        const SymmetryReport r = check_pt(l, xxz_parity(n));
        EXPECT_LE(r.pt_residual, 1e-12) << n << " " << mu << " " << g;
        EXPECT_NEAR(r.gamma_bar, g, 1e-12);
        EXPECT_LE(r.involution_residual, 1e-14);
      }
    }
  }
}

TEST(PT, IdentityHoldsInSector) {
  const SuperOperator l = sector_restrict(build_superoperator(xxz_model({4, 0.5, 1.0, 0.2})), sector_basis(4, 0));
  EXPECT_LE(check_pt(l, xxz_parity(4)).pt_residual, 1e-12);
}

TEST(PT, RowsSeparatelySymmetric) {
  const auto rows = check_pt_rows({3, 1.5, 0.5, 0.8});
  for (double r : rows) EXPECT_LE(r, 1e-12);
}

TEST(PT, BrokenByNonSymmetricDissipation) {
  // decay on site 1 only: no mirror partner
  XXZParams p{3, 0.5, 0.0, 0.5};
  LindbladModel m = xxz_model(p);
  m.lindblads = {site_operator(Pauli::Minus, 1, 3)};
  const SymmetryReport r = check_pt(build_superoperator(m), xxz_parity(3));
  EXPECT_GT(r.pt_residual, 1e-3);
}

TEST(PT, TwoQubitToyWithDegenerateGaps) {
  // Two independent symmetrically driven qubits
  const ComplexMatrix z1 = site_operator(Pauli::Z, 1, 2), z2 = site_operator(Pauli::Z, 2, 2);
  LindbladModel m;
  m.hamiltonian = 0.5 * z1 + 1.0 * z2;
  for (int s = 1; s <= 2; ++s) {
    m.lindblads.push_back(0.5 * site_operator(Pauli::Plus, s, 2));
    m.lindblads.push_back(0.5 * site_operator(Pauli::Minus, s, 2));
  }
  EXPECT_NEAR(dissipator_trace(m.lindblads), -16.0, 1e-12);
  m.gamma = 0.3;
  const ParitySuperOp p = parity_from_pair(z1 * z2, identity(4));
  EXPECT_LE(check_pt(build_superoperator(m), p).pt_residual, 1e-14);
}

TEST(Inversion, PropagatorRelation) {
  for (int n = 2; n <= 3; ++n) {
    const SuperOperator l = build_superoperator(xxz_model({n, 0.5, 0.5, 0.3}));
    for (double t : {0.1, 0.25, 1.0}) EXPECT_LE(check_inversion(l, xxz_parity(n), t), 1e-8);
  }
}

TEST(Inversion, GenericPTResidualFunction) {
  const XXZParams p{2, 0.5, 1.0, 0.4};
  const ComplexMatrix l = build_superoperator(xxz_model(p)).matrix;
  EXPECT_LE(pt_residual(l, xxz_parity(2).sup.matrix), 1e-12);
  EXPECT_THROW(pt_residual(l, identity(4)), DimensionMismatch);
}
