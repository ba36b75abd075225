#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "ptlindblad/errors.hpp"
#include "ptlindblad/perturbation.hpp"
#include "ptlindblad/spectral.hpp"
#include "ptlindblad/xxz.hpp"

using namespace ptlindblad;

namespace {

// V_jk = 2 sum_m |<j|L_m|k>|^2 - delta_jk (2 sum_m <k|L_m^+ L_m|k> - 1) for a nondegenerate H
Eigen::MatrixXd v_oracle(const ComplexMatrix& h, const std::vector<ComplexMatrix>& ls) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const ComplexMatrix& u = es.eigenvectors();
  const auto n = h.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (const auto& l : ls) {
    const ComplexMatrix le = u.adjoint() * l * u;
    const ComplexMatrix ldl = u.adjoint() * l.adjoint() * l * u;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) v(j, k) += 2.0 * std::norm(le(j, k));
      v(j, j) -= 2.0 * ldl(j, j).real();
    }
  }
  v.diagonal().array() += 1.0;
  return v;
}

}  // namespace

TEST(EnergyBasis, SortedAndPhaseFixed) {
  const ComplexMatrix h = xxz_hamiltonian(3, 0.5);
  const EnergyBasis b = energy_basis(h, total_magnetization(3));
  for (Eigen::Index i = 1; i < b.energies.size(); ++i) EXPECT_LE(b.energies(i - 1), b.energies(i));
  EXPECT_TRUE(is_unitary(b.vectors, 1e-12));
  EXPECT_TRUE(approx_equal(b.vectors.adjoint() * h * b.vectors,
                           ComplexMatrix(b.energies.cast<Complex>().asDiagonal()), 1e-12));
  // each eigenvector has a definite magnetization
  const ComplexMatrix mz = b.vectors.adjoint() * total_magnetization(3) * b.vectors;
  EXPECT_LE(max_abs(mz - ComplexMatrix(mz.diagonal().asDiagonal())), 1e-12);
  EXPECT_THROW(energy_basis(h, xxz_hamiltonian(3, 0.1)), InvalidArgument);
}

TEST(PopulationMatrix, SingleQubitExact) {
  for (double omega : {1.0, 2.5}) {
    LindbladModel m;
    m.hamiltonian = 0.5 * omega * pauli(Pauli::Z);
    m.lindblads = {pauli(Pauli::Minus)};
    m.gamma = 0.1;
    const PerturbationReport r = population_matrix(m);
    Eigen::MatrixXd expect(2, 2);
    expect << 1, 2, 0, -1;
    EXPECT_LE((r.v - expect).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(std::abs(r.xi(0) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r.xi(1) + 1.0), 0.0, 1e-12);
  }
}

TEST(PopulationMatrix, MatchesOracleOnRandomModels) {
  std::mt19937_64 rng(61);
  for (int c = 0; c < 100; ++c) {
    const int n = 2 + c % 3;
    LindbladModel m;
    m.hamiltonian = oracle::random_hermitian(rng, n);
    m.lindblads = {oracle::random_matrix(rng, n), oracle::random_matrix(rng, n)};
    m.gamma = 1.0;
    m = trace_normalized(m);
    const PerturbationReport r = population_matrix(m);
    EXPECT_LE((r.v - v_oracle(m.hamiltonian, m.lindblads)).cwiseAbs().maxCoeff(), 1e-10);
    // D is trace preserving, so every column of V sums to 1
    EXPECT_LE(r.column_sum_defect, 1e-10);
    EXPECT_LE(r.reality_defect, 1e-12);
  }
}

TEST(PopulationMatrix, RequiresNormalizedDissipator) {
  LindbladModel m;
  m.hamiltonian = pauli(Pauli::Z);
  m.lindblads = {2.0 * pauli(Pauli::Minus)};
  m.gamma = 1.0;
  EXPECT_THROW(population_matrix(m), DissipatorNotNormalized);
}

TEST(PopulationMatrix, XXZIsRealSymmetricStochastic) {
  for (int n = 2; n <= 4; ++n) {
    for (double mu : {0.0, 1.0}) {
      const PerturbationReport r = population_matrix(xxz_model({n, 0.5, mu, 0.1}), total_magnetization(n));
      EXPECT_LE(r.symmetry_defect, 1e-12);
      EXPECT_LE(r.reality_defect, 1e-12);
      EXPECT_LE(r.column_sum_defect, 1e-10);
    }
  }
}

TEST(PopulationMatrix, FirstOrderRatesMatchSpectrum) {
  const double g = 1e-4;
  const int n = 3;
  const auto model = xxz_model({n, 0.5, 1.0, g});
  const PerturbationReport r = population_matrix(model, total_magnetization(n));
  const SuperOperator l = sector_restrict(build_superoperator(model), sector_basis(n, 0));
  const SpectralDecomposition dec = eig_biortho(l);
  std::vector<Complex> near;
  for (std::size_t i = 0; i < dec.size(); ++i) near.push_back(dec.eigenvalues(i) / g + 1.0);
  std::sort(near.begin(), near.end(), [](Complex a, Complex b) { return std::abs(a - 1.0) < std::abs(b - 1.0); });
  near.resize(static_cast<std::size_t>(r.xi.size()));
  std::vector<Complex> xi(r.xi.data(), r.xi.data() + r.xi.size());
  EXPECT_LE(oracle::set_distance(near, xi), 1e-2);
}

TEST(Velocity, AnalyticMatchesFiniteDifference) {
  VelocityOptions opts;
  const VelocityReport r = velocity_check(xxz_model({3, 0.5, 0.5, 0.3}), opts);
  ASSERT_FALSE(r.entries.empty());
  EXPECT_LE(r.max_discrepancy, 1e-5);
  EXPECT_LE(r.max_h_im_velocity, 1e-8);
  EXPECT_LE(r.max_v_re_velocity, 1e-8);
}

TEST(Velocity, RejectsDegenerateSelection) {
  // the two-qubit toy has an exactly degenerate pair at -2 gamma_bar
  LindbladModel m;
  m.hamiltonian = 0.5 * site_operator(Pauli::Z, 1, 2) + site_operator(Pauli::Z, 2, 2);
  for (int s = 1; s <= 2; ++s) {
    m.lindblads.push_back(0.5 * site_operator(Pauli::Plus, s, 2));
    m.lindblads.push_back(0.5 * site_operator(Pauli::Minus, s, 2));
  }
  m.gamma = 0.2;
  const SpectralDecomposition dec = eig_biortho(build_superoperator(m));
  std::size_t pick = dec.size();
  for (std::size_t i = 0; i < dec.size(); ++i)
    if (!dec.is_simple(i)) pick = i;
  ASSERT_LT(pick, dec.size());
  VelocityOptions opts;
  opts.alphas = {pick};
  EXPECT_THROW(velocity_check(m, opts), DegenerateAtEvaluationPoint);
}

TEST(Degeneracy, FindsEqualGaps) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h.diagonal() << 0, 1, 2;
  const DegeneracyReport r = degeneracy_report(h);
  EXPECT_TRUE(r.degenerate_energies.empty());
  EXPECT_FALSE(r.degenerate_gaps.empty());
  h.diagonal() << 0, 1, 2.7;
  EXPECT_TRUE(degeneracy_report(h).degenerate_gaps.empty());
  // spin-flip symmetry of the XXZ chain makes levels coincide across M^z blocks
  EXPECT_FALSE(degeneracy_report(xxz_hamiltonian(3, 0.5)).degenerate_energies.empty());
}

TEST(Heuristic, PositiveAndValidated) {
  const auto model = xxz_model({3, 0.5, 1.0, 1.0});
  const double est = heuristic_gamma_pt(traceless_dissipator(model), model.hamiltonian);
  EXPECT_GT(est, 0.0);
  EXPECT_THROW(heuristic_gamma_pt(traceless_dissipator(model), ComplexMatrix::Identity(8, 8)), InvalidArgument);
}
