#include "nyqmirror/mitigation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace nyq {

MaskedTfr inf_hard_threshold(const TfRepresentation& tfr, const TimeFn& inf_curve) {
  MaskedTfr out{tfr, inf_curve};
  auto& r = out.tfr;
  for (std::size_t j = 0; j < r.frames(); ++j) {
    const double limit = inf_curve(r.time_axis[j]);
    for (std::size_t b = 0; b < r.bins(); ++b) {
      if (r.freq_axis[b] <= limit) continue;
      if (r.is_complex())
        r.complex_values[r.index(b, j)] = {0.0, 0.0};
      else
        r.real_values[r.index(b, j)] = 0.0;
    }
  }
  return out;
}

LowpassDesign design_lowpass(double rate_hz, double cutoff_hz, double transition_hz,
                             double attenuation_db) {
  if (!(rate_hz > 0) || !(cutoff_hz > 0) || !(transition_hz > 0) ||
      !(cutoff_hz + transition_hz < 0.5 * rate_hz)) {
    std::ostringstream msg;
    msg << "lowpass: need 0 < cutoff, 0 < transition and cutoff + transition < rate/2 (cutoff="
        << cutoff_hz << ", transition=" << transition_hz << ", rate=" << rate_hz << ")";
    throw std::invalid_argument(msg.str());
  }
  const double a = attenuation_db;
  LowpassDesign d;
  d.attenuation_db = a;
  d.beta = a > 50 ? 0.1102 * (a - 8.7) : (a >= 21 ? 0.5842 * std::pow(a - 21, 0.4) + 0.07886 * (a - 21) : 0.0);
  const double dw = 2 * std::numbers::pi * transition_hz / rate_hz;
  auto taps = static_cast<std::size_t>(std::ceil((a - 8) / (2.285 * dw))) + 1;
  if (taps % 2 == 0) ++taps;

  const double fc = (cutoff_hz + 0.5 * transition_hz) / rate_hz;  // cycles per sample
  const double half = 0.5 * static_cast<double>(taps - 1);
  const double norm = std::cyl_bessel_i(0.0, d.beta);
  d.taps.resize(taps);
  double sum = 0;
  for (std::size_t k = 0; k < taps; ++k) {
    const double m = static_cast<double>(k) - half;
    const double sinc = m == 0 ? 2 * fc : std::sin(2 * std::numbers::pi * fc * m) / (std::numbers::pi * m);
    const double r = m / half;
    const double w = std::cyl_bessel_i(0.0, d.beta * std::sqrt(std::max(0.0, 1 - r * r))) / norm;
    d.taps[k] = sinc * w;
    sum += d.taps[k];
  }
  for (double& h : d.taps) h /= sum;
  return d;
}

namespace {

std::vector<double> convolve_same(const std::vector<double>& x, const std::vector<double>& h,
                                  Exec exec) {
  const std::size_t half = h.size() / 2;
  std::vector<double> y(x.size(), 0.0);
  parallel_for(x.size(), exec, [&](std::size_t i) {
    double s = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      const auto idx = static_cast<std::ptrdiff_t>(i + half) - static_cast<std::ptrdiff_t>(k);
      if (idx >= 0 && idx < static_cast<std::ptrdiff_t>(x.size())) s += h[k] * x[static_cast<std::size_t>(idx)];
    }
    y[i] = s;
  });
  return y;
}

}  // namespace

UniformSignal lowpass_prefilter(const UniformSignal& sig, double cutoff_hz, double transition_hz,
                                Exec exec) {
  const auto design = design_lowpass(sig.rate, cutoff_hz, transition_hz);
  const std::size_t n = sig.size();
  const std::size_t pad = 3 * design.taps.size();
  if (n <= pad)
    throw std::invalid_argument("lowpass: signal of " + std::to_string(n) +
                                " samples is too short for a " + std::to_string(design.taps.size()) +
                                "-tap filter (needs more than " + std::to_string(pad) + ")");

  const auto& v = sig.values;
  std::vector<double> x(n + 2 * pad);
  for (std::size_t k = 0; k < pad; ++k) {
    x[pad - 1 - k] = 2 * v.front() - v[k + 1];
    x[pad + n + k] = 2 * v.back() - v[n - 2 - k];
  }
  std::copy(v.begin(), v.end(), x.begin() + static_cast<std::ptrdiff_t>(pad));

  // The taps are symmetric, so the backward pass is the same centred convolution.
  auto y = convolve_same(convolve_same(x, design.taps, exec), design.taps, exec);
  std::vector<double> out(y.begin() + static_cast<std::ptrdiff_t>(pad),
                          y.begin() + static_cast<std::ptrdiff_t>(pad + n));
  return UniformSignal(std::move(out), sig.rate, sig.t_start);
}

}  // namespace nyq
