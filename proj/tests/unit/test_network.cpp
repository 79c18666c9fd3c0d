#include <gtest/gtest.h>

#include <cmath>

#include "phasegbs/network.hpp"
#include "phasegbs/validation.hpp"

namespace phasegbs {
namespace {

Estimate mean_norm(const PhaseSpaceEnsemble& e, Eigen::Index mode) {
  std::vector<double> means;
  for (const auto& b : e.blocks()) means.push_back(b.alpha.row(mode).cwiseAbs2().mean());
  return subensemble_stats(means);
}

TEST(TransmissionMatrix, IdentityIsUnitary) {
  const auto t = TransmissionMatrix::identity(3);
  EXPECT_TRUE(t.is_unitary());
  EXPECT_EQ(t.unitarity_residual(), 0.0);
  EXPECT_DOUBLE_EQ(t.max_singular_value(), 1.0);
}

TEST(TransmissionMatrix, RejectsAmplification) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 0) = 1.01;
  EXPECT_THROW(TransmissionMatrix{m}, InputError);
}

TEST(TransmissionMatrix, RejectsFalseUnitaryClaim) {
  CMatrix m = 0.9 * CMatrix::Identity(2, 2);
  EXPECT_NO_THROW(TransmissionMatrix(m, false));
  EXPECT_THROW(TransmissionMatrix(m, true), InputError);
  CMatrix rect = CMatrix::Zero(3, 2);
  rect(0, 0) = rect(1, 1) = 1.0;
  EXPECT_THROW(TransmissionMatrix(rect, true), InputError);
}

TEST(TransmissionMatrix, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(TransmissionMatrix(CMatrix(0, 0)), InputError);
  CMatrix m = CMatrix::Identity(2, 2);
  m(1, 0) = Complex(std::nan(""), 0.0);
  EXPECT_THROW(TransmissionMatrix{m}, InputError);
}

TEST(TransmissionMatrix, RectangularLossyMatrices) {
  CMatrix m = CMatrix::Zero(3, 2);
  m(0, 0) = 0.6;
  m(2, 1) = 1.0;
  const TransmissionMatrix t(m);
  EXPECT_FALSE(t.is_unitary());
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_EQ(t.cols(), 2u);
  EXPECT_TRUE(std::isinf(t.unitarity_residual()));
}

TEST(RandomUnitary, IsUnitaryAndSeeded) {
  for (std::size_t m : {1u, 2u, 16u, 64u}) {
    const auto u = random_unitary(m, 7);
    EXPECT_TRUE(u.is_unitary());
    EXPECT_LT(u.unitarity_residual(), 1e-12);
  }
  EXPECT_EQ(random_unitary(8, 3).matrix(), random_unitary(8, 3).matrix());
  EXPECT_NE(random_unitary(8, 3).matrix(), random_unitary(8, 4).matrix());
  EXPECT_THROW(random_unitary(0, 1), InputError);
}

TEST(RandomUnitary, EntriesLookHaarDistributed) {
  // Haar: |U_00|^2 ~ Beta(1, M - 1), mean 1/M and variance (M - 1)/(M^2 (M + 1)).
  const std::size_t m = 8;
  const int trials = 400;
  RunningStats stats;
  int upper_half_plane = 0;
  for (int seed = 0; seed < trials; ++seed) {
    const Complex u00 = random_unitary(m, static_cast<std::uint64_t>(seed)).matrix()(0, 0);
    stats.add(std::norm(u00));
    if (u00.imag() > 0) ++upper_half_plane;
  }
  EXPECT_NEAR(stats.mean(), 1.0 / m, 5 * stats.std_error());
  EXPECT_NEAR(stats.variance(), (m - 1.0) / (m * m * (m + 1.0)), 0.006);
  EXPECT_NEAR(upper_half_plane / static_cast<double>(trials), 0.5, 5 * std::sqrt(0.25 / trials));
}

TEST(ScaleTransmission, ScalesEntries) {
  const auto u = random_unitary(4, 1);
  const auto s = scale_transmission(u, 0.95);
  EXPECT_FALSE(s.is_unitary());
  EXPECT_LT((s.matrix() - 0.95 * u.matrix()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(scale_transmission(u, 1.1), InputError);
  EXPECT_THROW(scale_transmission(u, 0.0), InputError);
}

TEST(DecoherenceMatrix, UniformLoss) {
  const auto t = scale_transmission(TransmissionMatrix::identity(3), 0.95);
  const CMatrix b = decoherence_matrix_sqrt(t);
  EXPECT_LT((b - 0.31225 * CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(DecoherenceMatrix, ZeroForUnitary) {
  const CMatrix b = decoherence_matrix_sqrt(random_unitary(6, 2));
  EXPECT_LT(b.cwiseAbs().maxCoeff(), 1e-5);
}

TEST(DecoherenceMatrix, SquaresBackToDeficit) {
  const auto t = scale_transmission(random_unitary(5, 9), 0.8);
  CMatrix m = t.matrix();
  m.col(0) *= 0.5;
  const TransmissionMatrix lossy(m);
  const CMatrix b = decoherence_matrix_sqrt(lossy);
  const CMatrix d = CMatrix::Identity(5, 5) - m * m.adjoint();
  EXPECT_LT((b * b - d).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((b - b.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TransformPositiveP, IsLinearWithoutNoise) {
  const auto e = sample_positive_p(SqueezerSpec::uniform(3, 2, 1.0), 4, {2, 30});
  const auto t = scale_transmission(random_unitary(3, 8), 0.7);
  const auto out = transform_positive_p(e, t);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LT((out.block(i).alpha - t.matrix() * e.block(i).alpha).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((out.block(i).beta - t.matrix().conjugate() * e.block(i).beta).cwiseAbs().maxCoeff(),
              1e-13);
  }
}

TEST(TransformPositiveP, RejectsWrongOrderingAndShape) {
  const auto e = sample_positive_p(SqueezerSpec::uniform(3, 2, 1.0), 4, {1, 3});
  EXPECT_THROW(transform_positive_p(e, TransmissionMatrix::identity(2)), InputError);
  const auto w = sample_sigma_ordered(SqueezerSpec::uniform(3, 2, 1.0), Ordering::wigner(), 4, {1, 3});
  EXPECT_THROW(transform_positive_p(w, TransmissionMatrix::identity(3)), InputError);
  EXPECT_THROW(transform_sigma_ordered(e, TransmissionMatrix::identity(3), 1), InputError);
}

TEST(TransformSigmaOrdered, UnitaryAddsNoNoise) {
  const auto e = sample_sigma_ordered(SqueezerSpec::uniform(4, 2, 1.0), Ordering::wigner(), 4,
                                      {2, 30});
  const auto u = random_unitary(4, 2);
  const auto out = transform_sigma_ordered(e, u, 99);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LT((out.block(i).alpha - u.matrix() * e.block(i).alpha).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_EQ(out.block(i).beta, out.block(i).alpha.conjugate());
  }
}

TEST(TransformSigmaOrdered, LossPreservesVacuumNoise) {
  for (double sigma : {0.5, 1.0}) {
    const auto e = sample_sigma_ordered(SqueezerSpec::uniform(2, 0, 0.0), Ordering(sigma), 4,
                                        {100, 1000});
    const auto t = scale_transmission(random_unitary(2, 1), 0.5);
    const auto out = transform_sigma_ordered(e, t, 5);
    for (Eigen::Index j = 0; j < 2; ++j) {
      const auto n = mean_norm(out, j);
      EXPECT_NEAR(n.value, sigma, 5 * n.std_error);
    }
  }
}

TEST(TransformSigmaOrdered, RectangularVacuumStaysVacuum) {
  CMatrix m = CMatrix::Zero(3, 2);
  m(0, 0) = 0.6;
  m(1, 0) = 0.8;
  m(2, 1) = 0.5;
  const TransmissionMatrix t(m);
  const NetworkSampler sampler(SqueezerSpec::uniform(2, 0, 0.0), Ordering::wigner(), t, 3);
  const auto src = sampler.source({100, 1000});
  for (Eigen::Index j = 0; j < 3; ++j) {
    std::vector<double> means;
    for (std::size_t i = 0; i < 100; ++i) means.push_back(src.block(i).alpha.row(j).cwiseAbs2().mean());
    const auto n = subensemble_stats(means);
    EXPECT_NEAR(n.value, 0.5, 5 * n.std_error);
  }
}

TEST(TransformSigmaOrdered, LossScalesPhotonNumber) {
  const auto e = sample_sigma_ordered(SqueezerSpec::uniform(1, 1, 1.0), Ordering::wigner(), 4,
                                      {100, 2000});
  const auto t = scale_transmission(TransmissionMatrix::identity(1), 0.95);
  const auto n = mean_norm(transform_sigma_ordered(e, t, 6), 0);
  EXPECT_NEAR(n.value, 0.9025 * 1.38110 + 0.5, 5 * n.std_error);
}

TEST(NetworkSampler, MatchesInMemoryTransforms) {
  const auto spec = SqueezerSpec::uniform(3, 2, 1.0);
  const auto t = scale_transmission(random_unitary(3, 2), 0.9);
  {
    const NetworkSampler sampler(spec, Ordering::positive_p(), t, 21);
    const auto e = transform_positive_p(sample_positive_p(spec, 21, {3, 10}), t);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(sampler.block(i, 10).alpha, e.block(i).alpha);
  }
  {
    const NetworkSampler sampler(spec, Ordering::wigner(), t, 21);
    const auto e = transform_sigma_ordered(
        sample_sigma_ordered(spec, Ordering::wigner(), 21, {3, 10}), t, 21);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(sampler.block(i, 10).alpha, e.block(i).alpha);
  }
}

TEST(NetworkSampler, PadsMissingInputsWithVacuum) {
  const NetworkSampler sampler(SqueezerSpec::uniform(1, 1, 1.0), Ordering::positive_p(),
                               TransmissionMatrix::identity(3), 2);
  const auto b = sampler.block(0, 20);
  EXPECT_EQ(b.alpha.rows(), 3);
  EXPECT_EQ(b.alpha.row(2).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(NetworkSampler(SqueezerSpec::uniform(4, 1, 1.0), Ordering::positive_p(),
                              TransmissionMatrix::identity(3), 2),
               InputError);
}

TEST(NetworkSampler, SourceOutlivesSampler) {
  BlockSource src = [] {
    const NetworkSampler sampler(SqueezerSpec::uniform(2, 2, 1.0), Ordering::positive_p(),
                                 random_unitary(2, 1), 8);
    return sampler.source({2, 5});
  }();
  const NetworkSampler again(SqueezerSpec::uniform(2, 2, 1.0), Ordering::positive_p(),
                             random_unitary(2, 1), 8);
  EXPECT_EQ(src.block(1).alpha, again.block(1, 5).alpha);
}

}  // namespace
}  // namespace phasegbs
