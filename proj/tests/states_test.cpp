#include "luorbit/states.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "luorbit/io.hpp"
#include "luorbit/stabilizer.hpp"
#include "test_util.hpp"

using namespace luorbit;

TEST(PartyDims, BasicsAndValidation) {
  const PartyDims d{2, 3, 4};
  EXPECT_EQ(d.parties(), 3);
  EXPECT_EQ(d.total(), 24);
  EXPECT_EQ(d.sum_squares(), 29);
  EXPECT_EQ(d.to_string(), "2x3x4");
  EXPECT_TRUE(d.sorted_ascending());
  EXPECT_FALSE((PartyDims{3, 2}.sorted_ascending()));
  EXPECT_THROW(PartyDims{}.validate(), std::invalid_argument);
  EXPECT_THROW((PartyDims{2, 1}.validate()), std::invalid_argument);
}

TEST(BuildGenerators, CanonicalTwoByTwo) {
  const GeneratorSet gs = build_generators(2, 2);
  ASSERT_EQ(gs.generators.size(), 2u);
  ComplexMatrix x1(2, 2), x2(2, 2);
  x1 << -0.5, 0, 0, 0.5;
  x2 << 0, 1, 1, 0;
  EXPECT_TRUE(gs.generators[0].isApprox(x1, 0.0));
  EXPECT_TRUE(gs.generators[1].isApprox(x2, 0.0));
}

TEST(BuildGenerators, CentralizerIsCenterFor2x3) {
  const GeneratorSet gs = build_generators(2, 3);
  EXPECT_EQ(joint_centralizer_dim(gs.generators, 3), 1);
}

TEST(BuildGenerators, GramMatrixFullRankFor3x3) {
  const GeneratorSet gs = build_generators(3, 3);
  std::vector<ComplexMatrix> ops = gs.generators;
  ops.push_back(ComplexMatrix::Identity(3, 3));
  RealMatrix gram(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      gram(i, j) = (ops[i].adjoint() * ops[j]).trace().real();
    }
  }
  EXPECT_EQ(kernel(gram).rank, 4);
}

TEST(BuildGenerators, InvariantsHoldUpToSix) {
  for (int n = 2; n <= 6; ++n) {
    for (int m = 2; m <= n; ++m) {
      const GeneratorSet gs = build_generators(m, n);
      ASSERT_EQ(gs.generators.size(), static_cast<size_t>(m));
      for (const auto& x : gs.generators) {
        EXPECT_LE(std::abs(x.trace()), 1e-12);
        EXPECT_LE((x - x.adjoint()).norm(), 1e-14);
      }
      EXPECT_EQ(joint_centralizer_dim(gs.generators, n), 1);
    }
  }
}

TEST(BuildGenerators, RejectsBadArguments) {
  EXPECT_THROW(build_generators(1, 2), std::invalid_argument);
  EXPECT_THROW(build_generators(3, 2), std::invalid_argument);
}

TEST(JointCentralizer, EmptyListEverythingCommutes) {
  EXPECT_EQ(joint_centralizer_dim({}, 3), 9);
}

TEST(JointCentralizer, DistinctDiagonalGivesTorus) {
  ComplexMatrix x = ComplexMatrix::Zero(3, 3);
  x(0, 0) = -1.0;
  x(1, 1) = 0.0;
  x(2, 2) = 1.0;
  EXPECT_EQ(joint_centralizer_dim({x}, 3), 3);
}

TEST(JointCentralizer, RejectsNonHermitian) {
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = 1.0;
  EXPECT_THROW(joint_centralizer_dim({x}, 2), std::invalid_argument);
}

TEST(BuildWitness, TraceFormula) {
  // tr W = sum_i tr X_i + |v|^2 n = (sum_{k=1}^m k^2) n
  EXPECT_NEAR(build_witness(2, 2).trace().real(), 10.0, 1e-12);
  EXPECT_NEAR(build_witness(2, 3).trace().real(), 15.0, 1e-12);
  EXPECT_NEAR(build_witness(3, 4).trace().real(), 56.0, 1e-12);
}

TEST(BuildWitness, PartyBlocksMatchDefinition) {
  const ComplexMatrix w = build_witness(2, 2);
  ComplexMatrix block11(2, 2), block12(2, 2);
  block11 << 0.5, 0, 0, 1.5;  // X_1 + (v v^dag)_{11} I = X_1 + I
  block12 << 2, 0, 0, 2;      // (v v^dag)_{12} I = 2 I
  EXPECT_TRUE(w.block(0, 0, 2, 2).isApprox(block11, 0.0));
  EXPECT_TRUE(w.block(0, 2, 2, 2).isApprox(block12, 0.0));
}

TEST(BuildWitness, StructuralReconstruction) {
  for (const auto& [m, n] : {std::pair{2, 3}, std::pair{3, 4}}) {
    const ComplexMatrix w = build_witness(m, n);
    const GeneratorSet gs = build_generators(m, n);
    ComplexMatrix rebuilt = ComplexMatrix::Zero(m * n, m * n);
    for (int i = 0; i < m; ++i) {
      ComplexMatrix p = ComplexMatrix::Zero(m, m);
      p(i, i) = 1.0;
      rebuilt += kron(p, gs.generators[i]);
    }
    ComplexVector v(m);
    for (int k = 0; k < m; ++k) v(k) = double(k + 1);
    rebuilt += kron(ComplexMatrix(v * v.adjoint()), ComplexMatrix::Identity(n, n));
    EXPECT_EQ((w - rebuilt).norm(), 0.0);
  }
}

TEST(BuildWitness, Hermitian) {
  for (const auto& [m, n] : {std::pair{2, 2}, std::pair{2, 4}, std::pair{4, 5}}) {
    EXPECT_EQ(hermiticity_residual(build_witness(m, n)), 0.0);
  }
}

TEST(MultipartiteWitness, BipartiteCaseIsTheWitness) {
  EXPECT_EQ((build_witness_multipartite(PartyDims{2, 2}) - build_witness(2, 2)).norm(), 0.0);
  EXPECT_EQ((build_witness_multipartite(PartyDims{2, 3}) - build_witness(2, 3)).norm(), 0.0);
}

TEST(MultipartiteWitness, HermitianCandidates) {
  for (const PartyDims& dims :
       {PartyDims{2, 2, 2}, PartyDims{2, 2, 3}, PartyDims{2, 2, 2, 2}}) {
    const ComplexMatrix w = build_witness_multipartite(dims);
    EXPECT_EQ(w.rows(), dims.total());
    EXPECT_LE(hermiticity_residual(w), 1e-12 * w.norm());
  }
}

TEST(MultipartiteWitness, RejectsBadDims) {
  EXPECT_THROW(build_witness_multipartite(PartyDims{2}), std::invalid_argument);
  EXPECT_THROW(build_witness_multipartite(PartyDims{3, 2, 4}), std::invalid_argument);
  EXPECT_THROW(build_witness_multipartite(PartyDims{1, 2}), std::invalid_argument);
}

TEST(ToState, ShiftRuleOnPsdInput) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 1.0;  // lambda_min = 0 -> s = 1
  const DensityMatrix rho = to_state(h, PartyDims{2});
  ComplexMatrix expected(2, 2);
  expected << 2.0 / 3.0, 0, 0, 1.0 / 3.0;
  EXPECT_LE((rho.matrix - expected).norm(), 1e-15);
  EXPECT_NO_THROW(rho.validate());
}

TEST(ToState, HandEvaluatedShift) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 1.0;
  h(1, 1) = -1.0;  // s = 2, (h + 2I)/4 = diag(3/4, 1/4)
  const DensityMatrix rho = to_state(h, PartyDims{2});
  ComplexMatrix expected(2, 2);
  expected << 0.75, 0, 0, 0.25;
  EXPECT_LE((rho.matrix - expected).norm(), 1e-15);
}

TEST(ToState, PreservesStabilizerKernel) {
  std::mt19937_64 rng(23);
  for (const PartyDims& dims : {PartyDims{2, 2}, PartyDims{2, 3}}) {
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexMatrix w =
          trial == 0 ? build_witness_multipartite(dims)
                     : ComplexMatrix(test::random_hermitian(rng, int(dims.total())));
      const StabilizerReport before = stabilize(w, dims);
      const StabilizerReport after = stabilize(to_state(w, dims));
      ASSERT_EQ(before.stabilizer_dim, after.stabilizer_dim);
      EXPECT_EQ(before.orbit_dim, after.orbit_dim);
      const double dist = test::span_distance(test::kernel_coordinate_matrix(before),
                                              test::kernel_coordinate_matrix(after));
      EXPECT_LT(dist, 1e-8);
    }
  }
}

TEST(RandomDensity, StateInvariants) {
  std::mt19937_64 seed_src(101);
  for (const PartyDims& dims : {PartyDims{2, 2}, PartyDims{2, 3}}) {
    for (int trial = 0; trial < 25; ++trial) {
      const DensityMatrix rho = random_density(dims, seed_src());
      EXPECT_NO_THROW(rho.validate());
      EXPECT_NEAR(rho.matrix.trace().real(), 1.0, 1e-12);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix, Eigen::EigenvaluesOnly);
      EXPECT_GE(es.eigenvalues()(0), -1e-12);
    }
  }
}

TEST(RandomDensity, DeterministicBitwise) {
  const DensityMatrix a = random_density(PartyDims{2, 3}, 4, 987654321u);
  const DensityMatrix b = random_density(PartyDims{2, 3}, 4, 987654321u);
  ASSERT_EQ(a.matrix.rows(), b.matrix.rows());
  for (Eigen::Index i = 0; i < a.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.matrix.cols(); ++j) {
      EXPECT_EQ(a.matrix(i, j).real(), b.matrix(i, j).real());
      EXPECT_EQ(a.matrix(i, j).imag(), b.matrix(i, j).imag());
    }
  }
}

TEST(RandomDensity, RankOneIsPure) {
  const DensityMatrix rho = random_density(PartyDims{2, 2}, 1, 55u);
  EXPECT_LE((rho.matrix * rho.matrix - rho.matrix).norm(), 1e-10);
}

TEST(RandomDensity, RejectsBadRank) {
  EXPECT_THROW(random_density(PartyDims{2, 2}, 0, 1u), std::invalid_argument);
  EXPECT_THROW(random_density(PartyDims{2, 2}, 5, 1u), std::invalid_argument);
}

TEST(SpecialState, MaximallyMixed) {
  const DensityMatrix rho = special_state(SpecialStateKind::maximally_mixed, PartyDims{2, 3});
  EXPECT_TRUE(rho.matrix.isApprox(ComplexMatrix::Identity(6, 6) / 6.0, 0.0));
}

TEST(SpecialState, BellDiagonalSpectrum) {
  const DensityMatrix rho = special_state(SpecialStateKind::bell_diagonal, PartyDims{2, 2},
                                          {0.4, 0.3, 0.2, 0.1});
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix, Eigen::EigenvaluesOnly);
  const RealVector ev = es.eigenvalues();
  EXPECT_NEAR(ev(0), 0.1, 1e-15);
  EXPECT_NEAR(ev(1), 0.2, 1e-15);
  EXPECT_NEAR(ev(2), 0.3, 1e-15);
  EXPECT_NEAR(ev(3), 0.4, 1e-15);
}

TEST(SpecialState, PureProduct) {
  const DensityMatrix rho = special_state(SpecialStateKind::pure_product, PartyDims{2, 3});
  EXPECT_NEAR(rho.matrix.trace().real(), 1.0, 1e-15);
  EXPECT_LE((rho.matrix * rho.matrix - rho.matrix).norm(), 1e-15);
  EXPECT_EQ(rho.matrix(0, 0), Complex(1.0, 0.0));
}

TEST(SpecialState, WitnessKindIsShiftedWitness) {
  const DensityMatrix rho = special_state(SpecialStateKind::witness, PartyDims{2, 2});
  EXPECT_NO_THROW(rho.validate());
}

TEST(SpecialState, RejectsBadKindAndParams) {
  EXPECT_THROW(special_state(SpecialStateKind::bell_diagonal, PartyDims{2, 3},
                             {0.25, 0.25, 0.25, 0.25}),
               std::invalid_argument);
  EXPECT_THROW(special_state(SpecialStateKind::bell_diagonal, PartyDims{2, 2}, {0.5, 0.5}),
               std::invalid_argument);
  EXPECT_THROW(special_state(SpecialStateKind::bell_diagonal, PartyDims{2, 2},
                             {0.5, 0.3, 0.1, 0.2}),
               std::invalid_argument);
  EXPECT_THROW(special_state(SpecialStateKind::maximally_mixed, PartyDims{2, 2}, {0.1}),
               std::invalid_argument);
  EXPECT_THROW(parse_state_kind("bogus"), std::invalid_argument);
}

TEST(Serialization, DensityJsonRoundTripIsExact) {
  const DensityMatrix rho = random_density(PartyDims{2, 3}, 6, 2024u);
  const std::string text = density_to_json(rho).dump();
  const DensityMatrix back = density_from_json(Json::parse(text));
  EXPECT_EQ(back.dims, rho.dims);
  for (Eigen::Index i = 0; i < rho.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.matrix.cols(); ++j) {
      EXPECT_EQ(back.matrix(i, j).real(), rho.matrix(i, j).real());
      EXPECT_EQ(back.matrix(i, j).imag(), rho.matrix(i, j).imag());
    }
  }
}
