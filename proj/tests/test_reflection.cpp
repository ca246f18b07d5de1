#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nyqmirror/reflection.hpp"
#include "nyqmirror/scenarios.hpp"
#include "nyqmirror/spline_interp.hpp"

using namespace nyq;

namespace {

std::vector<double> grid(double t0, double t1, double step) { return linspace_step(t0, t1, step); }

const PredictedComponent& component(const ReflectionPrediction& p, int k) {
  for (const auto& c : p.components)
    if (c.k == k) return c;
  throw std::logic_error("missing component");
}

}  // namespace

TEST(Predict, UniformHarmonicAmplitudesAndFrequencies) {
  const auto sig = harmonic_signal(1.0, 2.5);
  const auto scheme = uniform_scheme(6.0);
  const auto g = grid(0, 10, 0.1);
  const auto p = predict_components(sig, scheme, 3, -2, 2, g);
  ASSERT_EQ(p.components.size(), 5u);
  EXPECT_EQ(p.components[0].k, 0);
  EXPECT_EQ(p.components[1].k, 1);
  EXPECT_NEAR(component(p, 0).amp_curve(3.0), fundamental_spline_spectrum(3, -2.5 / 6), 1e-14);
  EXPECT_NEAR(component(p, 1).amp_curve(3.0), fundamental_spline_spectrum(3, 1 - 2.5 / 6), 1e-14);
  EXPECT_DOUBLE_EQ(component(p, 0).if_curve(1.0), 2.5);
  // the first reflection mirrors the IF about the INF
  EXPECT_DOUBLE_EQ(component(p, 1).if_curve(1.0), 3.5);
  EXPECT_DOUBLE_EQ(component(p, -1).if_curve(1.0), 8.5);
  EXPECT_FALSE(p.inr.warning);
  EXPECT_DOUBLE_EQ(p.inr.min_margin_hz, 1.0);
}

TEST(Predict, SortedAndDecayingInK) {
  const auto sc = builtin_scenario("fig1");
  const auto g = grid(0, 80, 0.05);
  const auto p = predict_components(sc.signal, sc.scheme, 3, -5, 5, g);
  for (std::size_t i = 1; i < p.components.size(); ++i)
    EXPECT_GE(p.components[i - 1].peak_magnitude, p.components[i].peak_magnitude);
  for (int k = 1; k < 5; ++k) {
    EXPECT_GT(component(p, k).peak_magnitude, component(p, k + 1).peak_magnitude);
    EXPECT_GT(component(p, -k).peak_magnitude, component(p, -k - 1).peak_magnitude);
  }
}

TEST(Predict, HigherOrderSuppressesReflections) {
  const auto sc = builtin_scenario("fig1");
  const auto g = grid(0, 80, 0.05);
  const auto p3 = predict_components(sc.signal, sc.scheme, 3, -1, 1, g);
  const auto p12 = predict_components(sc.signal, sc.scheme, kHighOrderMitigation, -1, 1, g);
  EXPECT_LT(component(p12, 1).peak_magnitude, component(p3, 1).peak_magnitude);
  EXPECT_GT(component(p12, 0).peak_magnitude, component(p3, 0).peak_magnitude);
}

TEST(Predict, RangeMustContainZero) {
  const auto sig = harmonic_signal(1.0, 2.5);
  const auto g = grid(0, 1, 0.1);
  EXPECT_THROW(predict_components(sig, uniform_scheme(6.0), 3, 1, 3, g), std::invalid_argument);
}

TEST(Predict, InrWarningWhenUndersampled) {
  const auto sig = harmonic_signal(1.0, 4.0);
  const auto g = grid(0, 1, 0.1);
  EXPECT_TRUE(predict_components(sig, uniform_scheme(6.0), 3, 0, 0, g).inr.warning);
}

TEST(Synthesize, SeriesMatchesSpectrumAtOneInstant) {
  const auto sig = harmonic_signal(1.0, 2.5);
  const auto scheme = uniform_scheme(6.0);
  const auto s = synthesize_prediction(sig, scheme, 3, 2, 10.0, 0.0, 1.0);
  ASSERT_EQ(s.size(), 11u);
  const double t = 0.3;
  double ref = 0;
  for (int k = -2; k <= 2; ++k)
    ref += fundamental_spline_spectrum(3, k - 2.5 / 6) * std::cos(2 * std::numbers::pi * (6.0 * k - 2.5) * t);
  EXPECT_NEAR(s.values[3], ref, 1e-12);
  EXPECT_THROW(synthesize_prediction(sig, scheme, 3, -1, 10.0, 0.0, 1.0), std::invalid_argument);
}

TEST(Synthesize, SerialAndParallelBitIdentical) {
  const auto sc = builtin_scenario("fig2");
  const auto a = synthesize_prediction(sc.signal, sc.scheme, 3, 5, 64.0, 0, 20, Exec::reference());
  const auto b = synthesize_prediction(sc.signal, sc.scheme, 3, 5, 64.0, 0, 20, Exec{4});
  EXPECT_EQ(a.values, b.values);
}

TEST(Verify, UniformHarmonicIsExactUpToTruncation) {
  const auto r = verify_reflection_theorem(harmonic_signal(1.0, 2.5), uniform_scheme(6.0), 3, 5, 64.0, 0, 40);
  EXPECT_LE(r.residual, 0.01);
  EXPECT_NEAR(r.trim_s, 4.0 / 6.0, 1e-12);
  EXPECT_GT(r.samples, 0u);
  EXPECT_LT(r.measured_eps, 1e-9);
}

TEST(Verify, Fig1WithThreeReflections) {
  const auto sc = builtin_scenario("fig1");
  const auto r = verify_reflection_theorem(sc.signal, sc.scheme, 3, 3, 64.0, 0, 80);
  EXPECT_LE(r.residual, 0.05);
  EXPECT_GT(r.measured_eps, 0.0);
}

TEST(Verify, ZeroSignalGivesZeroResidual) {
  const ImtSignal zero([](double) { return 0.0; }, [](double t) { return 2.5 * t; }, [](double) { return 2.5; });
  const auto r = verify_reflection_theorem(zero, uniform_scheme(6.0), 3, 5, 64.0, 0, 20);
  EXPECT_EQ(r.residual, 0.0);
}

TEST(AboveInf, HandComputedRatio) {
  TfRepresentation r;
  r.method = TfMethod::rm;
  r.freq_axis = {0, 1, 2, 3};
  r.time_axis = {0, 1};
  r.real_values = {1, 1,   // bin 0
                   2, 2,   // bin 1
                   3, 0,   // bin 2
                   4, 1};  // bin 3
  // inf = 1.5 in frame 0 and 2 in frame 1 (the boundary bin is not above)
  const double ratio = above_inf_energy_ratio(r, [](double t) { return t < 0.5 ? 1.5 : 2.0; });
  EXPECT_DOUBLE_EQ(ratio, (3.0 + 4.0 + 1.0) / 14.0);
  r.real_values.assign(8, 0.0);
  EXPECT_EQ(above_inf_energy_ratio(r, [](double) { return 1.0; }), 0.0);
}

TEST(ScalingTable, ResidualShrinksWithModulation) {
  std::vector<ScenarioCase> family;
  for (double s : {1.0, 0.25}) {
    const auto sc = fig2_scaled(s);
    family.push_back({s, sc.signal, sc.scheme});
  }
  const auto rows = reflection_scaling_table(family, 3, 5, 64.0, 0, 40);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_GT(rows[0].report.residual, rows[1].report.residual);
}
