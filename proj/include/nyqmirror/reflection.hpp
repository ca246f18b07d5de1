#pragma once

#include <span>
#include <vector>

#include "nyqmirror/parallel.hpp"
#include "nyqmirror/sampling.hpp"
#include "nyqmirror/signal_model.hpp"
#include "nyqmirror/tf_analysis.hpp"
#include "nyqmirror/uniform_signal.hpp"

namespace nyq {

// Component k of the interpolated signal
//   a(t) eta_n(k - beta(t)) cos(2 pi (k psi(t) - phi(t))),  beta = phi' / psi'.
// amp(t) is signed; ranking uses its magnitude.
struct PredictedComponent {
  int k = 0;
  TimeFn if_curve;   // |k psi'(t) - phi'(t)|
  TimeFn amp_curve;  // a(t) eta_n(k - beta(t))
  double peak_magnitude = 0;  // max |amp_curve| over the prediction grid
};

struct ReflectionPrediction {
  std::vector<PredictedComponent> components;  // sorted by peak_magnitude, descending
  InrReport inr;
};

ReflectionPrediction predict_components(const ImtSignal& signal, const SamplingScheme& scheme,
                                        int order, int k_min, int k_max,
                                        std::span<const double> grid);

// Truncated series sum_{|k| <= k_max} on the grid t_start + i / rate.
UniformSignal synthesize_prediction(const ImtSignal& signal, const SamplingScheme& scheme,
                                    int order, int k_max, double rate_hz, double t_start,
                                    double t_end, Exec exec = {});

struct ResidualReport {
  double residual = 0;     // relative L2 distance over the interior
  double trim_s = 0;       // seconds removed from each end
  double interior_start = 0;
  double interior_end = 0;
  std::size_t samples = 0;
  double measured_eps = 0;  // max of the IF, AM and ISR slope ratios on the interior
};

// Compares sample -> interpolate_nonuniform -> resample against the predicted
// series over the interior (trimming (order + 1) / min ISR seconds per side).
ResidualReport verify_reflection_theorem(const ImtSignal& signal, const SamplingScheme& scheme,
                                         int order, int k_max, double rate_hz, double t_start,
                                         double t_end, Exec exec = {});

struct ScenarioCase {
  double scale;
  ImtSignal signal;
  SamplingScheme scheme;
};

struct ScalingRow {
  double scale;
  ResidualReport report;
};

std::vector<ScalingRow> reflection_scaling_table(std::span<const ScenarioCase> family, int order,
                                                 int k_max, double rate_hz, double t_start,
                                                 double t_end, Exec exec = {});

// Share of |R| mass strictly above inf(t) in each frame; 0 for an empty matrix.
double above_inf_energy_ratio(const TfRepresentation& tfr, const TimeFn& inf_curve);

}  // namespace nyq
