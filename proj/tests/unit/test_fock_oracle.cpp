#include <gtest/gtest.h>

#include <cmath>

#include "phasegbs/network.hpp"
#include "phasegbs/oracles.hpp"

namespace phasegbs {
namespace {

void expect_oracles_agree(const SqueezerSpec& spec, const TransmissionMatrix& t,
                          std::size_t cutoff) {
  const auto fock = fock_truncation_oracle(spec, t, cutoff);
  const auto gauss = exact_pattern_probabilities(output_gaussian_moments(spec, t));
  ASSERT_EQ(fock.pattern_probabilities.size(), gauss.size());
  for (std::size_t i = 0; i < gauss.size(); ++i) {
    EXPECT_NEAR(fock.pattern_probabilities[i], gauss[i], 1e-6) << "pattern " << i;
  }
}

CMatrix splitter() {
  const double h = std::sqrt(0.5);
  CMatrix b(2, 2);
  b << h, h, h, -h;
  return b;
}

TEST(FockOracle, VacuumNeverClicks) {
  const auto r = fock_truncation_oracle(SqueezerSpec::uniform(2, 0, 0.0), random_unitary(2, 1), 4);
  EXPECT_NEAR(r.pattern_probabilities[0], 1.0, 1e-14);
  EXPECT_NEAR(r.norm_deficit, 0.0, 1e-14);
}

TEST(FockOracle, SingleModeUnitSqueezing) {
  const auto r = fock_truncation_oracle(SqueezerSpec::uniform(1, 1, 1.0),
                                        TransmissionMatrix::identity(1), 80);
  EXPECT_NEAR(r.pattern_probabilities[1], 1.0 - 1.0 / std::cosh(1.0), 1e-8);
  EXPECT_NEAR(r.pattern_probabilities[1], 0.35195, 1e-5);
  EXPECT_LT(r.norm_deficit, 1e-8);
}

TEST(FockOracle, ThermalSingleMode) {
  const auto r = fock_truncation_oracle(SqueezerSpec::uniform(1, 1, 1.0, 1.0),
                                        TransmissionMatrix::identity(1), 80);
  const double n = std::sinh(1.0) * std::sinh(1.0);
  EXPECT_NEAR(r.pattern_probabilities[0], 1.0 / (1.0 + n), 1e-10);
}

TEST(FockOracle, InsufficientCutoffReportsDeficit) {
  try {
    fock_truncation_oracle(SqueezerSpec::uniform(1, 1, 1.0), TransmissionMatrix::identity(1), 10);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("deficit"), std::string::npos);
  }
  const auto loose = fock_truncation_oracle(SqueezerSpec::uniform(1, 1, 1.0),
                                            TransmissionMatrix::identity(1), 10, 1.0);
  EXPECT_GT(loose.norm_deficit, 1e-3);
}

TEST(FockOracle, ArgumentChecks) {
  EXPECT_THROW(fock_truncation_oracle(SqueezerSpec::uniform(4, 1, 1.0),
                                      TransmissionMatrix::identity(4), 10),
               InputError);
  CMatrix rect = CMatrix::Zero(2, 1);
  rect(0, 0) = 1.0;
  EXPECT_THROW(fock_truncation_oracle(SqueezerSpec::uniform(1, 1, 1.0), TransmissionMatrix(rect), 10),
               InputError);
}

TEST(FockOracle, AgreesWithTorontonianTwoModeSplitter) {
  expect_oracles_agree(SqueezerSpec::uniform(2, 1, 1.0), TransmissionMatrix(splitter(), true), 70);
}

TEST(FockOracle, AgreesWithTorontonianTwoSqueezersThermalized) {
  expect_oracles_agree(SqueezerSpec::uniform(2, 2, 0.7, 0.4), random_unitary(2, 11), 50);
}

TEST(FockOracle, AgreesWithTorontonianLossy) {
  CMatrix t = splitter() * 0.8;
  t(1, 0) *= 0.5;
  expect_oracles_agree(SqueezerSpec::uniform(2, 2, 0.6, 0.1), TransmissionMatrix(t), 50);
}

TEST(FockOracle, AgreesWithTorontonianThreeModes) {
  expect_oracles_agree(SqueezerSpec::uniform(3, 2, 0.4), random_unitary(3, 12), 24);
  expect_oracles_agree(SqueezerSpec::uniform(3, 3, 0.35, 0.5),
                       scale_transmission(random_unitary(3, 13), 0.85), 24);
}

TEST(FockOracle, PureLossKeepsVacuumProbabilityOfThermalLight) {
  // Thermal light through loss eta stays thermal with n' = eta n.
  const auto spec = SqueezerSpec::uniform(1, 1, 0.8, 1.0);
  const auto t = scale_transmission(TransmissionMatrix::identity(1), std::sqrt(0.3));
  const auto r = fock_truncation_oracle(spec, t, 80);
  const double n = 0.3 * std::sinh(0.8) * std::sinh(0.8);
  EXPECT_NEAR(r.pattern_probabilities[0], 1.0 / (1.0 + n), 1e-10);
}

}  // namespace
}  // namespace phasegbs
