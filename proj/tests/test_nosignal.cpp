#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "belltel/nosignal.hpp"

using namespace belltel;

namespace {

constexpr std::size_t kPinnedPairs = 27;  // planner result at defaults, alpha 0.01

// TV between G^2 cos^2(kappa x) and G^2 on the grid, evaluated directly.
double tv_oracle(const DeviceConfig& c) {
  std::vector<double> a(c.bins), b(c.bins);
  double sa = 0, sb = 0;
  for (std::size_t j = 0; j < c.bins; ++j) {
    const double x = -c.x_max * c.envelope_width + (j + 0.5) * (2 * c.x_max * c.envelope_width / c.bins);
    const double g2 = std::exp(-x * x / (2 * c.envelope_width * c.envelope_width));
    sa += a[j] = g2 * std::pow(std::cos(c.kappa * x), 2);
    sb += b[j] = g2;
  }
  double tv = 0;
  for (std::size_t j = 0; j < c.bins; ++j) tv += std::abs(a[j] / sa - b[j] / sb);
  return tv / 2;
}

}  // namespace

TEST(VerifyNoSignaling, UnitaryPasses) {
  const auto r = verify_no_signaling(DeviceConfig{}, ModelMode::unitary_qm);
  EXPECT_LT(r.tv_distance, 1e-12);
  EXPECT_LT(r.trace_distance_reduced, 1e-12);
  EXPECT_EQ(r.mutual_information_bits, 0.0);
  EXPECT_EQ(r.verdict, Verdict::pass);
}

TEST(VerifyNoSignaling, NaiveCollapseFails) {
  const DeviceConfig c;
  const auto r = verify_no_signaling(c, ModelMode::naive_collapse);
  const double oracle = tv_oracle(c);
  EXPECT_GT(oracle, 0.3);
  EXPECT_NEAR(r.tv_distance, oracle, 1e-9);
  EXPECT_GT(r.trace_distance_reduced, 0.3);
  EXPECT_GT(r.mutual_information_bits, 0.0);
  EXPECT_EQ(r.verdict, Verdict::fail);
}

TEST(VerifyNoSignaling, VacuousToleranceAlwaysPasses) {
  for (auto m : {ModelMode::naive_collapse, ModelMode::unitary_qm})
    EXPECT_EQ(verify_no_signaling(DeviceConfig{}, m, 1.0).verdict, Verdict::pass);
  EXPECT_THROW(verify_no_signaling(DeviceConfig{}, ModelMode::unitary_qm, 0.0), std::invalid_argument);
}

TEST(VerifyNoSignaling, UnitaryPassesAcrossPhasesAndGrids) {
  for (double phase : {0.0, 0.4, std::numbers::pi / 2, 2.0}) {
    DeviceConfig c;
    c.relative_phase = phase;
    c.bins = 128;
    EXPECT_EQ(verify_no_signaling(c, ModelMode::unitary_qm).verdict, Verdict::pass) << phase;
  }
}

TEST(ReducedState, TwoRoutesAgree) {
  for (double phase : {0.0, 1.3}) {
    DeviceConfig c;
    c.relative_phase = phase;
    const auto traced = reduced_screen_state(c);
    EXPECT_LT(trace_distance(traced, measured_screen_mixture(c, IdlerBasis::which_path)), 1e-12);
    EXPECT_LT(trace_distance(traced, measured_screen_mixture(c, IdlerBasis::eraser)), 1e-12);
  }
}

TEST(ReducedState, UnitaryMarginalsShareOneComputation) {
  const DeviceConfig c;
  const auto on = screen_marginal(c, DetectorState::on, ModelMode::unitary_qm);
  const auto off = screen_marginal(c, DetectorState::off, ModelMode::unitary_qm);
  const auto mixture = measured_screen_mixture(c, IdlerBasis::which_path).probabilities();
  for (std::size_t j = 0; j < c.bins; ++j) {
    EXPECT_LE(std::abs(on[j] - off[j]), 1e-15);
    EXPECT_LE(std::abs(on[j] - mixture[j]), 1e-12);
  }
}

TEST(MixtureIdentity, ConditionalsAverageToMarginal) {
  DeviceConfig c;
  c.relative_phase = 0.9;
  const auto marginal = incoherent_distribution(c);
  for (auto kind : {IdlerBasis::which_path, IdlerBasis::eraser}) {
    const auto cond = conditional_screens(c, kind);
    ASSERT_EQ(cond.screen.size(), 2u);
    EXPECT_NEAR(cond.outcome_probability[0] + cond.outcome_probability[1], 1.0, 1e-12);
    for (std::size_t j = 0; j < c.bins; ++j) {
      const double mix = cond.outcome_probability[0] * cond.screen[0][j] +
                         cond.outcome_probability[1] * cond.screen[1][j];
      EXPECT_NEAR(mix, marginal[j], 1e-12);
    }
  }
}

TEST(MixtureIdentity, EraserConditionalsMatchMeasurementRoute) {
  const DeviceConfig c;
  const auto e = eraser_conditionals(c);
  const auto cond = conditional_screens(c, IdlerBasis::eraser);
  EXPECT_NEAR(e.prob_plus, cond.outcome_probability[0], 1e-12);
  for (std::size_t j = 0; j < c.bins; ++j) {
    EXPECT_NEAR(e.plus[j], cond.screen[0][j], 1e-12);
    EXPECT_NEAR(e.minus[j], cond.screen[1][j], 1e-12);
  }
}

TEST(EraserDecomposition, CompleteAtAnyPhase) {
  DeviceConfig c;
  EXPECT_LT(eraser_decomposition_check(c), 1e-12);
  c.relative_phase = std::numbers::pi / 2;
  EXPECT_LT(eraser_decomposition_check(c), 1e-12);
}

TEST(EraserDecomposition, DetectsPerturbation) {
  const DeviceConfig c;
  const auto e = eraser_conditionals(c);
  auto bumped = e.plus.probabilities();
  bumped[100] += 1e-3;
  const double r = eraser_decomposition_residual(bumped, e.minus.probabilities(),
                                                 incoherent_distribution(c).probabilities());
  EXPECT_GE(r, 5e-4 - 1e-15);  // half the bump, up to rounding
}

TEST(PlugInMutualInformation, BasicChannels) {
  const std::vector<int> a = {0, 1, 0, 1, 1, 0, 0, 1};
  EXPECT_NEAR(plug_in_mutual_information(a, a), 1.0, 1e-15);
  const std::vector<int> b = {0, 0, 1, 1, 0, 0, 1, 1};
  const std::vector<int> c = {0, 1, 0, 1, 0, 1, 0, 1};
  EXPECT_NEAR(plug_in_mutual_information(b, c), 0.0, 1e-15);
  const std::vector<int> one = {1};
  EXPECT_EQ(plug_in_mutual_information(one, one), 0.0);
  EXPECT_THROW(plug_in_mutual_information({}, {}), std::invalid_argument);
}

TEST(ChannelMutualInformation, NaiveCarriesInformationUnitaryDoesNot) {
  const DeviceConfig c;
  const TransmissionPlan plan{kPinnedPairs, 1.0, 10};
  EXPECT_GE(channel_mutual_information(ModelMode::naive_collapse, plan, 10000, c, Rng(101)), 0.85);
  EXPECT_LE(channel_mutual_information(ModelMode::unitary_qm, plan, 10000, c, Rng(102)), 0.01);
}

TEST(ChannelMutualInformation, DegenerateSampleSizes) {
  const DeviceConfig c;
  const TransmissionPlan plan{kPinnedPairs, 1.0, 1};
  EXPECT_EQ(channel_mutual_information(ModelMode::naive_collapse, plan, 1, c, Rng(3)), 0.0);
  EXPECT_THROW(channel_mutual_information(ModelMode::naive_collapse, plan, 0, c, Rng(3)),
               std::invalid_argument);
}

TEST(ChannelMutualInformation, NaiveNonDecreasingInM) {
  // Plug-in MI sd is below 1/sqrt(K) = 0.01 here; allow 3 sigma.
  const DeviceConfig c;
  double prev = -1.0;
  for (std::size_t m : {std::size_t{1}, std::size_t{10}, kPinnedPairs}) {
    const double mi = channel_mutual_information(ModelMode::naive_collapse, {m, 1.0, 1}, 10000, c, Rng(200 + m));
    EXPECT_GE(mi + 0.03, prev) << "M = " << m;
    prev = mi;
  }
}
