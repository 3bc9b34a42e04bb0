#include <cmath>

#include <gtest/gtest.h>

#include "belltel/relativity.hpp"
#include "belltel/rng.hpp"

using namespace belltel;

namespace {

void expect_event_near(const Event& a, const Event& b, double tol) {
  EXPECT_NEAR(a.t, b.t, tol);
  EXPECT_NEAR(a.x, b.x, tol);
}

}  // namespace

TEST(FrameVelocity, RejectsLightspeed) {
  EXPECT_THROW(FrameVelocity(1.0), RelativityError);
  EXPECT_THROW(FrameVelocity(-1.5), RelativityError);
  EXPECT_THROW(FrameVelocity(std::nan("")), RelativityError);
  EXPECT_NO_THROW(FrameVelocity(0.999));
}

TEST(Boost, IdentityKnownValueAndInverse) {
  const Event e{0.3, -2.0};
  EXPECT_EQ(boost(e, FrameVelocity(0.0)), e);
  expect_event_near(boost({0.0, 1.0}, FrameVelocity(0.6)), {-0.75, 1.25}, 1e-15);
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const Event r{20 * rng.uniform() - 10, 20 * rng.uniform() - 10};
    const double b = 1.98 * rng.uniform() - 0.99;
    expect_event_near(boost(boost(r, FrameVelocity(b)), FrameVelocity(-b)), r, 1e-12);
  }
}

TEST(Interval, ValuesAndInvariance) {
  EXPECT_EQ(interval({1, 2}, {1, 2}), 0.0);
  EXPECT_EQ(interval({0, 0}, {0, 1}), -1.0);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Event a{10 * rng.uniform() - 5, 10 * rng.uniform() - 5};
    const Event b{10 * rng.uniform() - 5, 10 * rng.uniform() - 5};
    for (double beta : {0.9, -0.9}) {
      const FrameVelocity v(beta);
      EXPECT_LT(std::abs(interval(a, b) - interval(boost(a, v), boost(b, v))), 1e-10);
    }
  }
}

TEST(SignalReception, SimultaneousInItsFrame) {
  const Event em{0.0, 1.0};
  EXPECT_EQ(signal_reception(em, 0.0, FrameVelocity(0.0)), (Event{0.0, 0.0}));
  const auto rec = signal_reception(em, 0.0, FrameVelocity(0.5));
  expect_event_near(rec, {-0.5, 0.0}, 1e-15);
  EXPECT_NEAR(boost(em, FrameVelocity(0.5)).t, boost(rec, FrameVelocity(0.5)).t, 1e-12);
  EXPECT_EQ(signal_reception(em, 1.0, FrameVelocity(0.7)), em);
}

TEST(BuildParadox, StateDependentClosesLoop) {
  const auto p = build_paradox(StateDependent{FrameVelocity(0.5)}, 1.0);
  expect_event_near(p.a_emission, {0.0, 1.0}, 0);
  expect_event_near(p.a_reception, {-0.5, 0.0}, 1e-15);
  EXPECT_EQ(p.b_emission, p.a_reception);
  expect_event_near(p.b_reception, {-1.0, 1.0}, 1e-15);
  EXPECT_NEAR(p.loop_advance, 1.0, 1e-12);
  EXPECT_TRUE(p.closed_loop);
}

TEST(BuildParadox, ZeroVelocityIsLabSimultaneous) {
  const auto p = build_paradox(StateDependent{FrameVelocity(0.0)}, 1.0);
  EXPECT_EQ(p.a_reception.t, 0.0);
  EXPECT_EQ(p.b_reception.t, 0.0);
  EXPECT_EQ(p.loop_advance, 0.0);
  EXPECT_FALSE(p.closed_loop);
}

TEST(BuildParadox, PrivilegedFrameNeverLoops) {
  const auto p = build_paradox(Privileged{FrameVelocity(0.3)}, 1.0);
  expect_event_near(p.b_reception, p.a_emission, 1e-12);
  EXPECT_NEAR(p.loop_advance, 0.0, 1e-12);
  EXPECT_FALSE(p.closed_loop);
  for (double b0 : {-0.95, -0.5, 0.0, 0.2, 0.8, 0.99})
    for (double x : {0.1, 1.0, 10.0, 1000.0})
      EXPECT_NEAR(build_paradox(Privileged{FrameVelocity(b0)}, x).loop_advance, 0.0, 1e-12 * std::max(1.0, x));
}

TEST(BuildParadox, RejectsNonPositiveSeparation) {
  EXPECT_THROW(build_paradox(StateDependent{FrameVelocity(0.5)}, 0.0), RelativityError);
  EXPECT_THROW(build_paradox(StateDependent{FrameVelocity(0.5)}, -1.0), RelativityError);
}

TEST(BuildParadox, LoopFormulaAndLegProperties) {
  for (double v : {0.1, 0.5, 0.9})
    for (double x : {1.0, 10.0}) {
      const auto p = build_paradox(StateDependent{FrameVelocity(v)}, x);
      EXPECT_NEAR(p.loop_advance, 2 * v * x, 1e-12);
      EXPECT_EQ(p.closed_loop, p.loop_advance > 0);
      EXPECT_NEAR(p.b_reception.x, p.a_emission.x, 1e-12);
      EXPECT_LT(std::abs(boost(p.a_emission, p.frame_a).t - boost(p.a_reception, p.frame_a).t), 1e-12);
      EXPECT_LT(std::abs(boost(p.b_emission, p.frame_b).t - boost(p.b_reception, p.frame_b).t), 1e-12);
      EXPECT_LT(interval(p.a_emission, p.a_reception), 0.0);
      EXPECT_LT(interval(p.b_emission, p.b_reception), 0.0);
    }
}

TEST(Automaton, FixedPoints) {
  EXPECT_TRUE(automaton_fixed_points(AutomatonRule::negation()).empty());
  EXPECT_EQ(automaton_fixed_points(AutomatonRule::identity()), (std::set<Message>{Message::m1, Message::m2}));
  EXPECT_EQ(automaton_fixed_points(AutomatonRule::constant(Message::m1)), (std::set<Message>{Message::m1}));
}
