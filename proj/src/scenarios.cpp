#include "nyqmirror/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nyq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDuration = 80.0;
constexpr double kResampleHz = 64.0;

SamplingScheme fig1_scheme() {
  const double center = 80.0 / kPi;
  const double anchor = center * center * center / 2400.0;
  return SamplingScheme(
      [=](double t) {
        const double u = t - center;
        return 6.0 * t + u * u * u / 2400.0 + anchor;
      },
      [=](double t) {
        const double u = t - center;
        return 6.0 + u * u / 800.0;
      },
      SchemeParams{6.0, 0.02});
}

SamplingScheme fig2_scheme() {
  return SamplingScheme([](double t) { return 8.0 * t + (5.0 / kPi) * std::sin(kPi * t / 10.0); },
                        [](double t) { return 8.0 + 0.5 * std::cos(kPi * t / 10.0); },
                        SchemeParams{7.5, 0.025});
}

ImtSignal fig2_signal(double scale) {
  const double depth = 0.2 * scale;
  return ImtSignal([](double t) { return 0.7 + std::pow(std::max(t, 0.0), 1.1); },
                   [depth](double t) { return kPi * t + depth * std::cos(t); },
                   [depth](double t) { return kPi - depth * std::sin(t); },
                   ModelParams{0.5, 200.0, 0.25});
}

}  // namespace

Scenario builtin_scenario(const std::string& name) {
  if (name == "fig1")
    return {"fig1", harmonic_signal(1.0, 2.5, 0.0, ModelParams{0.5, 10.0, 0.01}), fig1_scheme(),
            kDuration, kResampleHz};
  if (name == "fig2") return fig2_scaled(1.0);
  throw std::invalid_argument("unknown scenario '" + name + "' (expected fig1, fig2 or custom)");
}

Scenario fig2_scaled(double if_mod_scale) {
  if (!(if_mod_scale >= 0)) throw std::invalid_argument("fig2: if_mod_scale must be >= 0");
  return {"fig2", fig2_signal(if_mod_scale), fig2_scheme(), kDuration, kResampleHz};
}

Scenario custom_scenario(const CustomScenarioParams& p) {
  if (!(p.amplitude > 0)) throw std::invalid_argument("custom scenario: amplitude must be positive");
  if (!(p.if_hz > std::abs(p.if_mod_depth_hz)))
    throw std::invalid_argument("custom scenario: if_hz must exceed |if_mod_depth_hz|");
  if (!(p.isr_hz > std::abs(p.isr_mod_depth_hz)))
    throw std::invalid_argument("custom scenario: isr_hz must exceed |isr_mod_depth_hz|");
  if (!(p.duration_s > 0) || !(p.resample_hz > 0))
    throw std::invalid_argument("custom scenario: duration_s and resample_hz must be positive");
  if (p.if_mod_rate_hz < 0 || p.isr_mod_rate_hz < 0)
    throw std::invalid_argument("custom scenario: modulation rates must be >= 0");

  const double w_if = 2 * kPi * p.if_mod_rate_hz;
  const double w_isr = 2 * kPi * p.isr_mod_rate_hz;
  TimeFn phase = [p](double t) { return p.if_hz * t; };
  TimeFn iff = [p](double) { return p.if_hz; };
  if (w_if > 0) {
    phase = [p, w_if](double t) {
      return p.if_hz * t + p.if_mod_depth_hz * (1 - std::cos(w_if * t)) / w_if;
    };
    iff = [p, w_if](double t) { return p.if_hz + p.if_mod_depth_hz * std::sin(w_if * t); };
  }
  TimeFn psi = [p, w_isr](double t) {
    return w_isr == 0 ? p.isr_hz * t
                      : p.isr_hz * t + p.isr_mod_depth_hz * std::sin(w_isr * t) / w_isr;
  };
  TimeFn rate = [p, w_isr](double t) {
    return w_isr == 0 ? p.isr_hz
                      : p.isr_hz + p.isr_mod_depth_hz * std::cos(w_isr * t);
  };

  // A zero modulation rate disables the corresponding modulation.
  const double if_depth = w_if > 0 ? std::abs(p.if_mod_depth_hz) : 0.0;
  const double isr_depth = w_isr > 0 ? std::abs(p.isr_mod_depth_hz) : 0.0;
  const double if_min = p.if_hz - if_depth;
  const double if_max = p.if_hz + if_depth;
  const double eps_if = if_depth * w_if / if_min;
  const double isr_min = p.isr_hz - isr_depth;
  const double eps_isr = isr_depth * w_isr / isr_min;

  ImtSignal signal([a = p.amplitude](double) { return a; }, phase, iff,
                   ModelParams{std::min(p.amplitude, if_min), std::max(p.amplitude, if_max),
                               std::max(eps_if, 1e-6)});
  SamplingScheme scheme(psi, rate, SchemeParams{isr_min, std::max(eps_isr, 1e-6)});
  return {"custom", std::move(signal), std::move(scheme), p.duration_s, p.resample_hz};
}

Scenario make_scenario(const ScenarioSpec& spec) {
  if (spec.name == "custom") return custom_scenario(spec.custom);
  if (spec.name == "fig2") return fig2_scaled(spec.if_mod_scale);
  return builtin_scenario(spec.name);
}

}  // namespace nyq
