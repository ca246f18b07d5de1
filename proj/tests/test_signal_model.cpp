#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nyqmirror/sampling.hpp"
#include "nyqmirror/scenarios.hpp"
#include "nyqmirror/signal_model.hpp"

using namespace nyq;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(EvaluateImt, HarmonicAtZero) {
  const auto f1 = harmonic_signal(1.0, 2.5);
  EXPECT_EQ(evaluate_imt(f1, 0.0), 1.0);
}

TEST(EvaluateImt, HarmonicQuarterPeriod) {
  const auto f1 = harmonic_signal(1.0, 2.5);
  EXPECT_NEAR(evaluate_imt(f1, 0.1), 0.0, 1e-12);
}

TEST(EvaluateImt, Fig2AtZero) {
  const auto f2 = builtin_scenario("fig2").signal;
  EXPECT_NEAR(evaluate_imt(f2, 0.0), 0.7 * std::cos(0.4 * kPi), 1e-12);
  EXPECT_NEAR(evaluate_imt(f2, 0.0), 0.21631, 1e-5);
}

TEST(EvaluateImt, IsProductOfAmAndCosine) {
  const auto f2 = builtin_scenario("fig2").signal;
  for (double t : {0.3, 7.0, 41.5, 79.9})
    EXPECT_EQ(f2.evaluate(t), f2.am(t) * std::cos(2 * kPi * f2.phase(t)));
}

TEST(ValidateImt, HarmonicPasses) {
  const auto f1 = harmonic_signal(1.0, 2.5, 0.0, {0.5, 10.0, 0.01});
  const auto grid = linspace_step(0.0, 80.0, 0.01);
  EXPECT_TRUE(validate_imt(f1, grid).passed());
}

TEST(ValidateImt, SteepAmplitudeIsReported) {
  const ImtSignal s([](double t) { return t; }, [](double t) { return 2.0 * t; },
                    [](double) { return 2.0; }, {1e-9, 10.0, 1e-6});
  const auto grid = linspace_step(0.0, 1.0, 0.01);
  const auto report = validate_imt(s, grid);
  EXPECT_FALSE(report.passed());
  EXPECT_GT(report.count(ImtCondition::amplitude_slope), 0u);
  EXPECT_EQ(report.count(ImtCondition::frequency_slope), 0u);
}

TEST(ValidateImt, ShortGridThrows) {
  const auto f1 = harmonic_signal(1.0, 2.5);
  const std::vector<double> grid{0.0, 1.0};
  EXPECT_THROW(validate_imt(f1, grid), std::invalid_argument);
}

// The growing amplitude 0.7 + t^1.1 leaves [c1, c2] = [0.5, 10] beyond t ~ 8 and
// its slope 1.1 t^0.1 exceeds eps phi' for any eps <= 0.25, so only the
// frequency conditions hold on 1..80.
TEST(ValidateImt, Fig2FrequencyConditionsHoldAmplitudeDoesNot) {
  const auto f2 = builtin_scenario("fig2").signal.with_params({0.5, 10.0, 0.2});
  const auto grid = linspace_step(1.0, 80.0, 0.01);
  const auto report = validate_imt(f2, grid);
  EXPECT_EQ(report.count(ImtCondition::frequency_range), 0u);
  EXPECT_EQ(report.count(ImtCondition::frequency_slope), 0u);
  EXPECT_GT(report.count(ImtCondition::amplitude_range), 0u);
  EXPECT_GT(report.count(ImtCondition::amplitude_slope), 0u);

  double max_if_slope = 0;
  for (double t : grid) max_if_slope = std::max(max_if_slope, std::abs(0.2 * std::cos(t)) / f2.iff(t));
  EXPECT_LT(max_if_slope, 0.2);
}

TEST(BuiltinScenario, Fig1) {
  const auto s = builtin_scenario("fig1");
  EXPECT_EQ(s.signal.iff(13.0), 2.5);
  EXPECT_NEAR(s.scheme.rate(80.0 / kPi), 6.0, 1e-15);
  EXPECT_NEAR(s.scheme.psi(0.0), 0.0, 1e-12);
  EXPECT_EQ(s.duration_s, 80.0);
  EXPECT_EQ(s.resample_hz, 64.0);
}

TEST(BuiltinScenario, Fig2) {
  const auto s = builtin_scenario("fig2");
  EXPECT_NEAR(s.signal.iff(0.0), kPi, 1e-15);
  EXPECT_EQ(s.scheme.psi(0.0), 0.0);
  for (double t : linspace_step(0.0, 80.0, 0.01)) {
    EXPECT_GE(s.scheme.rate(t), 7.5 - 1e-12);
    EXPECT_LE(s.scheme.rate(t), 8.5 + 1e-12);
  }
}

TEST(BuiltinScenario, UnknownNameThrows) { EXPECT_THROW(builtin_scenario("fig3"), std::invalid_argument); }

TEST(BuiltinScenario, IsrExceedsInrOnMillisecondGrid) {
  const auto grid = linspace_step(0.0, 80.0, 0.001);
  for (const char* name : {"fig1", "fig2"}) {
    const auto s = builtin_scenario(name);
    double margin = 1e300;
    for (double t : grid) margin = std::min(margin, s.scheme.rate(t) - 2 * s.signal.iff(t));
    EXPECT_GT(margin, 0.0) << name;
  }
}

TEST(BuiltinScenario, PsiIsAntiderivativeOfIsr) {
  const auto grid = linspace_step(0.0, 80.0, 0.5);
  for (const char* name : {"fig1", "fig2"}) {
    const auto s = builtin_scenario(name);
    EXPECT_TRUE(validate_scheme(s.scheme, grid).passed()) << name;
  }
}

TEST(BuiltinScenario, Fig2ScaledFamilyShrinksModulation) {
  const auto half = fig2_scaled(0.5);
  EXPECT_NEAR(half.signal.iff(kPi / 2), kPi - 0.1, 1e-15);
  EXPECT_EQ(fig2_scaled(1.0).signal.iff(2.0), builtin_scenario("fig2").signal.iff(2.0));
}

TEST(CustomScenario, ConstantTone) {
  CustomScenarioParams p;
  p.if_hz = 1.5;
  p.isr_hz = 5.0;
  const auto s = custom_scenario(p);
  EXPECT_EQ(s.signal.iff(3.0), 1.5);
  EXPECT_EQ(s.scheme.rate(3.0), 5.0);
  EXPECT_EQ(s.scheme.psi(2.0), 10.0);
}

TEST(CustomScenario, ModulatedIsr) {
  CustomScenarioParams p;
  p.isr_hz = 6.0;
  p.isr_mod_depth_hz = 0.5;
  p.isr_mod_rate_hz = 0.05;
  const auto s = custom_scenario(p);
  EXPECT_TRUE(validate_scheme(s.scheme, linspace_step(0.0, 80.0, 0.25)).passed());
}

TEST(CustomScenario, RejectsBadParameters) {
  CustomScenarioParams p;
  p.if_mod_depth_hz = 3.0;
  p.if_mod_rate_hz = 0.1;
  EXPECT_THROW(custom_scenario(p), std::invalid_argument);
}
