#include "nyqmirror/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nyq {

ImtSignal::ImtSignal(TimeFn am, TimeFn phase, TimeFn iff, ModelParams params)
    : am_(std::move(am)), phase_(std::move(phase)), iff_(std::move(iff)), params_(params) {
  if (!am_ || !phase_ || !iff_) throw std::invalid_argument("ImtSignal: empty function");
}

double ImtSignal::evaluate(double t) const {
  return am_(t) * std::cos(2.0 * std::numbers::pi * phase_(t));
}

ImtSignal ImtSignal::with_params(ModelParams params) const {
  ImtSignal copy = *this;
  copy.params_ = params;
  return copy;
}

double evaluate_imt(const ImtSignal& signal, double t) { return signal.evaluate(t); }

ImtSignal harmonic_signal(double amplitude, double freq_hz, double phase0, ModelParams params) {
  return ImtSignal([amplitude](double) { return amplitude; },
                   [freq_hz, phase0](double t) { return freq_hz * t + phase0; },
                   [freq_hz](double) { return freq_hz; }, params);
}

const char* to_string(ImtCondition c) {
  switch (c) {
    case ImtCondition::amplitude_range: return "amplitude_range";
    case ImtCondition::frequency_range: return "frequency_range";
    case ImtCondition::amplitude_slope: return "amplitude_slope";
    case ImtCondition::frequency_slope: return "frequency_slope";
  }
  return "unknown";
}

std::size_t ImtValidationReport::count(ImtCondition c) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [c](const ImtViolation& v) { return v.condition == c; }));
}

namespace {

struct DerivativeEstimate {
  double value;
  double tolerance;
};

// Central difference plus 10x the leading truncation term h^2/6 |f'''|.
DerivativeEstimate central_derivative(const TimeFn& f, double t, double h) {
  const double fp1 = f(t + h), fm1 = f(t - h);
  const double fp2 = f(t + 2 * h), fm2 = f(t - 2 * h);
  const double d1 = (fp1 - fm1) / (2 * h);
  const double d3 = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * h * h * h);
  const double scale = std::max({std::abs(fp1), std::abs(fm1), 1.0});
  const double roundoff = 1e-13 * scale / h;
  return {d1, 10.0 * (h * h / 6.0 * std::abs(d3) + roundoff)};
}

}  // namespace

ImtValidationReport validate_imt(const ImtSignal& signal, std::span<const double> grid) {
  if (grid.size() < 3) throw std::invalid_argument("validate_imt: grid needs at least 3 points");
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double d = grid[i] - grid[i - 1];
    if (!(d > 0)) throw std::invalid_argument("validate_imt: grid must be strictly increasing");
    h = std::min(h, d);
  }

  const auto& p = signal.params();
  const TimeFn am = [&](double t) { return signal.am(t); };
  const TimeFn iff = [&](double t) { return signal.iff(t); };
  ImtValidationReport report;
  for (double t : grid) {
    const double a = signal.am(t);
    const double f = signal.iff(t);
    if (a < p.c1 || a > p.c2)
      report.violations.push_back({t, ImtCondition::amplitude_range, a, a < p.c1 ? p.c1 : p.c2});
    if (f < p.c1 || f > p.c2)
      report.violations.push_back({t, ImtCondition::frequency_range, f, f < p.c1 ? p.c1 : p.c2});

    const auto da = central_derivative(am, t, h);
    const double a_bound = p.eps * f + da.tolerance;
    if (std::abs(da.value) > a_bound)
      report.violations.push_back({t, ImtCondition::amplitude_slope, std::abs(da.value), a_bound});

    const auto df = central_derivative(iff, t, h);
    const double f_bound = p.eps * f + df.tolerance;
    if (std::abs(df.value) > f_bound)
      report.violations.push_back({t, ImtCondition::frequency_slope, std::abs(df.value), f_bound});
  }
  return report;
}

}  // namespace nyq
