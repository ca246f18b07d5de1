#pragma once

#include <string>

#include "nyqmirror/sampling.hpp"
#include "nyqmirror/signal_model.hpp"

namespace nyq {

// Parameters of a user-defined scenario: a sinusoidally modulated IF sampled
// with a sinusoidally modulated ISR.
//   phi'(t) = if_hz + if_mod_depth_hz sin(2 pi if_mod_rate_hz t)
//   psi'(t) = isr_hz + isr_mod_depth_hz cos(2 pi isr_mod_rate_hz t)
struct CustomScenarioParams {
  double amplitude = 1.0;
  double if_hz = 2.5;
  double if_mod_depth_hz = 0.0;
  double if_mod_rate_hz = 0.0;
  double isr_hz = 6.0;
  double isr_mod_depth_hz = 0.0;
  double isr_mod_rate_hz = 0.0;
  double duration_s = 80.0;
  double resample_hz = 64.0;
};

struct ScenarioSpec {
  std::string name = "fig1";  // fig1 | fig2 | custom
  double if_mod_scale = 1.0;  // fig2 only: scales the 0.2 cos(t) phase modulation
  CustomScenarioParams custom;
};

struct Scenario {
  std::string name;
  ImtSignal signal;
  SamplingScheme scheme;
  double duration_s;
  double resample_hz;
};

// fig1: cos(2 pi 2.5 t) with psi_1'(t) = 6 + (t - 80/pi)^2 / 800.
// fig2: (0.7 + t^1.1) cos(2 pi (pi t + 0.2 cos t)) with psi_2'(t) = 8 + 0.5 cos(pi t / 10).
// Both over 80 s, resampled at 64 Hz, with psi(0) = 0.
Scenario builtin_scenario(const std::string& name);

Scenario fig2_scaled(double if_mod_scale);
Scenario custom_scenario(const CustomScenarioParams& p);
Scenario make_scenario(const ScenarioSpec& spec);

}  // namespace nyq
