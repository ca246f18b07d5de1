#include "nyqmirror/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nyqmirror/spline_interp.hpp"

namespace nyq {

ReflectionPrediction predict_components(const ImtSignal& signal, const SamplingScheme& scheme,
                                        int order, int k_min, int k_max,
                                        std::span<const double> grid) {
  if (k_min > 0 || k_max < 0) throw std::invalid_argument("predict_components: k range must contain 0");
  const KernelSpectrum spectrum(order);
  ReflectionPrediction out;
  out.inr = check_inr(signal, scheme, grid);

  for (int k = k_min; k <= k_max; ++k) {
    PredictedComponent c;
    c.k = k;
    c.if_curve = [signal, scheme, k](double t) { return std::abs(k * scheme.rate(t) - signal.iff(t)); };
    c.amp_curve = [signal, scheme, spectrum, k](double t) {
      return signal.am(t) * spectrum(k - signal.iff(t) / scheme.rate(t));
    };
    for (double t : grid) c.peak_magnitude = std::max(c.peak_magnitude, std::abs(c.amp_curve(t)));
    out.components.push_back(std::move(c));
  }
  std::stable_sort(out.components.begin(), out.components.end(),
                   [](const auto& a, const auto& b) { return a.peak_magnitude > b.peak_magnitude; });
  return out;
}

UniformSignal synthesize_prediction(const ImtSignal& signal, const SamplingScheme& scheme,
                                    int order, int k_max, double rate_hz, double t_start,
                                    double t_end, Exec exec) {
  if (k_max < 0) throw std::invalid_argument("synthesize_prediction: k_max must be >= 0");
  const KernelSpectrum spectrum(order);
  const std::size_t count = uniform_count(rate_hz, t_start, t_end);
  std::vector<double> values(count);
  parallel_for(count, exec, [&](std::size_t i) {
    const double t = t_start + static_cast<double>(i) / rate_hz;
    const double a = signal.am(t);
    if (a == 0.0) {
      values[i] = 0.0;
      return;
    }
    const double beta = signal.iff(t) / scheme.rate(t);
    const double psi = scheme.psi(t), phi = signal.phase(t);
    double sum = 0.0;
    for (int k = -k_max; k <= k_max; ++k)
      sum += spectrum(k - beta) * std::cos(2.0 * std::numbers::pi * (k * psi - phi));
    values[i] = a * sum;
  });
  return UniformSignal(std::move(values), rate_hz, t_start);
}

namespace {

double slope_ratio(const TimeFn& f, const TimeFn& base, double t, double h) {
  return std::abs((f(t + h) - f(t - h)) / (2 * h)) / std::abs(base(t));
}

}  // namespace

ResidualReport verify_reflection_theorem(const ImtSignal& signal, const SamplingScheme& scheme,
                                         int order, int k_max, double rate_hz, double t_start,
                                         double t_end, Exec exec) {
  const auto samples = sample_signal(signal, scheme, t_start, t_end);
  const auto interp = interpolate_nonuniform(samples, order);
  const double first = samples.times().front(), last = samples.times().back();
  const auto pipeline = resample_uniform(interp, rate_hz, first, last, exec);
  const auto predicted = synthesize_prediction(signal, scheme, order, k_max, rate_hz, first, last, exec);

  double min_rate = std::numeric_limits<double>::infinity();
  for (double t : linspace_step(first, last, (last - first) / 1000.0)) min_rate = std::min(min_rate, scheme.rate(t));

  ResidualReport r;
  r.trim_s = (order + 1) / min_rate;
  r.interior_start = first + r.trim_s;
  r.interior_end = last - r.trim_s;

  double diff = 0, norm = 0;
  const TimeFn am = [&](double t) { return signal.am(t); };
  const TimeFn iff = [&](double t) { return signal.iff(t); };
  const TimeFn rate = scheme.rate_fn();
  const double h = 1.0 / rate_hz;
  for (std::size_t i = 0; i < pipeline.size(); ++i) {
    const double t = pipeline.time(i);
    if (t < r.interior_start || t > r.interior_end) continue;
    const double d = pipeline.values[i] - predicted.values[i];
    diff += d * d;
    norm += pipeline.values[i] * pipeline.values[i];
    ++r.samples;
    r.measured_eps = std::max({r.measured_eps, slope_ratio(am, iff, t, h), slope_ratio(iff, iff, t, h),
                               slope_ratio(rate, rate, t, h)});
  }
  r.residual = norm > 0 ? std::sqrt(diff / norm) : (diff > 0 ? 1.0 : 0.0);
  return r;
}

std::vector<ScalingRow> reflection_scaling_table(std::span<const ScenarioCase> family, int order,
                                                 int k_max, double rate_hz, double t_start,
                                                 double t_end, Exec exec) {
  std::vector<ScalingRow> rows;
  for (const auto& c : family)
    rows.push_back({c.scale, verify_reflection_theorem(c.signal, c.scheme, order, k_max, rate_hz,
                                                       t_start, t_end, exec)});
  return rows;
}

double above_inf_energy_ratio(const TfRepresentation& tfr, const TimeFn& inf_curve) {
  double above = 0, total = 0;
  for (std::size_t j = 0; j < tfr.frames(); ++j) {
    const double limit = inf_curve(tfr.time_axis[j]);
    for (std::size_t b = 0; b < tfr.bins(); ++b) {
      const double m = tfr.magnitude(b, j);
      total += m;
      if (tfr.freq_axis[b] > limit) above += m;
    }
  }
  return total > 0 ? above / total : 0.0;
}

}  // namespace nyq
