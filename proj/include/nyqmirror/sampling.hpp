#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "nyqmirror/signal_model.hpp"

namespace nyq {

class SplineInterpolant;

struct SchemeParams {
  double c = 1.0;     // lower bound on the ISR
  double eps = 0.01;  // |psi''| <= eps psi'
};

// Non-uniform sampling scheme t_m = psi^{-1}(m). psi' is the instantaneous
// sampling rate (ISR) and psi'/2 the instantaneous Nyquist frequency (INF).
class SamplingScheme {
 public:
  SamplingScheme(TimeFn psi, TimeFn psi_prime, SchemeParams params = {});

  double psi(double t) const { return psi_(t); }
  double rate(double t) const { return psi_prime_(t); }
  double nyquist(double t) const { return 0.5 * psi_prime_(t); }
  const SchemeParams& params() const { return params_; }

  TimeFn rate_fn() const { return psi_prime_; }
  TimeFn nyquist_fn() const;

 private:
  TimeFn psi_;
  TimeFn psi_prime_;
  SchemeParams params_;
};

// psi(t) = rate * t + offset.
SamplingScheme uniform_scheme(double rate_hz, double offset = 0.0);

// Discrete observation {(t_m, f(t_m))}.
class SampleSet {
 public:
  SampleSet(std::vector<double> times, std::vector<double> values);

  std::span<const double> times() const { return times_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return times_.size(); }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

struct SchemeValidationReport {
  double min_rate = 0;
  double max_slope_ratio = 0;       // max |psi''| / psi' (central differences)
  double max_antiderivative_error = 0;  // max |psi(t) - psi(t0) - int psi'|
  bool rate_ok = false;
  bool slope_ok = false;
  bool antiderivative_ok = false;
  bool passed() const { return rate_ok && slope_ok && antiderivative_ok; }
};

SchemeValidationReport validate_scheme(const SamplingScheme& scheme, std::span<const double> grid);

// All t in [t_start, t_end] with psi(t) integer, in increasing order.
std::vector<double> sampling_times(const SamplingScheme& scheme, double t_start, double t_end);

SampleSet sample_signal(const ImtSignal& signal, const SamplingScheme& scheme, double t_start,
                        double t_end);

// ISR estimated from observed sample times by cubic-spline interpolation of
// (t_i, 1/(t_{i+1} - t_i)). Defined on [t_1, t_{N-1}] only.
class IsrEstimate {
 public:
  explicit IsrEstimate(std::shared_ptr<const SplineInterpolant> spline);

  double isr(double t) const;
  double inf(double t) const { return 0.5 * isr(t); }
  std::pair<double, double> domain() const;

  // Evaluates with t clamped into the domain; used to overlay curves on TF
  // axes that extend slightly past the last knot.
  TimeFn isr_clamped() const;
  TimeFn inf_clamped() const;

 private:
  std::shared_ptr<const SplineInterpolant> spline_;
};

IsrEstimate estimate_isr(std::span<const double> times);

struct IdentifiabilityReport {
  double max_rate_deviation = 0;  // max |psi_a' - psi_b'|
  double max_psi_deviation = 0;   // max |psi_a - psi_b|
};

IdentifiabilityReport check_isr_identifiability(const SamplingScheme& a, const SamplingScheme& b,
                                                std::span<const double> grid);

struct InrReport {
  double min_margin_hz = 0;  // min (psi' - 2 phi')
  double t_at_min = 0;
  bool warning = false;  // margin <= 0 somewhere: the component is undersampled
};

InrReport check_inr(const ImtSignal& signal, const SamplingScheme& scheme,
                    std::span<const double> grid);

// Antiderivative F(t) = int_{origin}^{t} f, tabulated with 8-point
// Gauss-Legendre on a uniform cell grid. Exact to rounding for smooth f.
class Antiderivative {
 public:
  Antiderivative(TimeFn f, double t_lo, double t_hi, double cell = 0.05, double origin = 0.0);
  double operator()(double t) const;

 private:
  double integrate_cell(double a, double b) const;

  TimeFn f_;
  double t_lo_;
  double cell_;
  std::vector<double> cumulative_;
  double origin_offset_ = 0;
};

std::vector<double> linspace_step(double t_start, double t_end, double step);

}  // namespace nyq
