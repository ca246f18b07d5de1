#include "nyqmirror/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "nyqmirror/spline_interp.hpp"

namespace nyq {

SamplingScheme::SamplingScheme(TimeFn psi, TimeFn psi_prime, SchemeParams params)
    : psi_(std::move(psi)), psi_prime_(std::move(psi_prime)), params_(params) {
  if (!psi_ || !psi_prime_) throw std::invalid_argument("SamplingScheme: empty function");
}

TimeFn SamplingScheme::nyquist_fn() const {
  return [rate = psi_prime_](double t) { return 0.5 * rate(t); };
}

SamplingScheme uniform_scheme(double rate_hz, double offset) {
  if (!(rate_hz > 0)) throw std::invalid_argument("uniform_scheme: rate must be positive");
  return SamplingScheme([rate_hz, offset](double t) { return rate_hz * t + offset; },
                        [rate_hz](double) { return rate_hz; }, SchemeParams{rate_hz, 0.0});
}

SampleSet::SampleSet(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size())
    throw std::invalid_argument("SampleSet: times and values differ in length");
  if (times_.size() < 2) throw std::invalid_argument("SampleSet: need at least 2 samples");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1]))
      throw std::invalid_argument("SampleSet: times not strictly increasing at index " +
                                  std::to_string(i));
}

std::vector<double> linspace_step(double t_start, double t_end, double step) {
  if (!(step > 0) || !(t_end >= t_start)) throw std::invalid_argument("linspace_step: bad range");
  const auto n = static_cast<std::size_t>(std::floor((t_end - t_start) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = t_start + static_cast<double>(i) * step;
  return out;
}

// ---------------------------------------------------------------------------
// Antiderivative

namespace {

constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

}  // namespace

Antiderivative::Antiderivative(TimeFn f, double t_lo, double t_hi, double cell, double origin)
    : f_(std::move(f)), t_lo_(t_lo), cell_(cell) {
  if (!(t_hi > t_lo) || !(cell > 0)) throw std::invalid_argument("Antiderivative: bad range");
  const auto cells = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / cell));
  cumulative_.resize(cells + 1, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = t_lo + static_cast<double>(i) * cell;
    cumulative_[i + 1] = cumulative_[i] + integrate_cell(a, a + cell);
  }
  origin_offset_ = 0.0;
  origin_offset_ = (*this)(origin);
}

double Antiderivative::integrate_cell(double a, double b) const {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0;
  for (std::size_t k = 0; k < kGaussNodes.size(); ++k) s += kGaussWeights[k] * f_(mid + half * kGaussNodes[k]);
  return s * half;
}

double Antiderivative::operator()(double t) const {
  const auto last = static_cast<std::ptrdiff_t>(cumulative_.size()) - 1;
  auto i = static_cast<std::ptrdiff_t>(std::floor((t - t_lo_) / cell_));
  i = std::clamp<std::ptrdiff_t>(i, 0, last);
  const double a = t_lo_ + static_cast<double>(i) * cell_;
  const double partial = (t == a) ? 0.0 : integrate_cell(a, t);
  return cumulative_[static_cast<std::size_t>(i)] + partial - origin_offset_;
}

// ---------------------------------------------------------------------------
// Scheme validation

SchemeValidationReport validate_scheme(const SamplingScheme& scheme, std::span<const double> grid) {
  if (grid.size() < 3) throw std::invalid_argument("validate_scheme: grid needs at least 3 points");
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < grid.size(); ++i) h = std::min(h, grid[i] - grid[i - 1]);
  if (!(h > 0)) throw std::invalid_argument("validate_scheme: grid must be strictly increasing");

  SchemeValidationReport r;
  r.min_rate = std::numeric_limits<double>::infinity();
  bool slope_ok = true;
  for (double t : grid) {
    const double rate = scheme.rate(t);
    r.min_rate = std::min(r.min_rate, rate);
    const double p1 = scheme.rate(t + h), m1 = scheme.rate(t - h);
    const double p2 = scheme.rate(t + 2 * h), m2 = scheme.rate(t - 2 * h);
    const double d1 = (p1 - m1) / (2 * h);
    const double d3 = (p2 - 2 * p1 + 2 * m1 - m2) / (2 * h * h * h);
    const double tol = 10.0 * (h * h / 6.0 * std::abs(d3) + 1e-13 * std::abs(rate) / h);
    if (rate > 0) r.max_slope_ratio = std::max(r.max_slope_ratio, std::abs(d1) / rate);
    if (std::abs(d1) > scheme.params().eps * rate + tol) slope_ok = false;
  }
  r.rate_ok = r.min_rate >= scheme.params().c;
  r.slope_ok = slope_ok;

  // psi(t) - psi(t0) against the integral of psi' along the grid.
  const double psi0 = scheme.psi(grid.front());
  double integral = 0;
  double scale = 1.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double a = grid[i - 1], b = grid[i];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0;
    for (std::size_t k = 0; k < kGaussNodes.size(); ++k)
      s += kGaussWeights[k] * scheme.rate(mid + half * kGaussNodes[k]);
    integral += s * half;
    const double psi = scheme.psi(b);
    scale = std::max(scale, std::abs(psi));
    r.max_antiderivative_error =
        std::max(r.max_antiderivative_error, std::abs(psi - psi0 - integral));
  }
  r.antiderivative_ok = r.max_antiderivative_error <= 1e-8 * scale;
  return r;
}

// ---------------------------------------------------------------------------
// Sample times

namespace {

double solve_crossing(const SamplingScheme& scheme, double m, double lo, double hi) {
  // Invariant: psi(lo) <= m <= psi(hi).
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (scheme.psi(mid) < m) lo = mid; else hi = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double r = scheme.psi(t) - m;
    if (r == 0.0) break;
    const double rate = scheme.rate(t);
    if (!(rate > 0)) break;
    const double next = t - r / rate;
    if (!(next >= lo - 1e-8 && next <= hi + 1e-8)) break;
    t = next;
  }
  return t;
}

}  // namespace

std::vector<double> sampling_times(const SamplingScheme& scheme, double t_start, double t_end) {
  if (!(t_start < t_end)) throw std::invalid_argument("sampling_times: need t_start < t_end");

  constexpr int kProbes = 1024;
  double max_rate = 0;
  for (int i = 0; i <= kProbes; ++i) {
    const double t = t_start + (t_end - t_start) * i / kProbes;
    const double rate = scheme.rate(t);
    if (!(rate > 0))
      throw std::domain_error("sampling_times: psi is not increasing (psi' <= 0 at t=" +
                              std::to_string(t) + ")");
    max_rate = std::max(max_rate, rate);
  }

  const double step = 0.5 / max_rate;
  std::vector<double> times;
  double a = t_start;
  double psi_a = scheme.psi(a);
  if (psi_a == std::floor(psi_a)) times.push_back(a);
  while (a < t_end) {
    const double b = std::min(a + step, t_end);
    const double psi_b = scheme.psi(b);
    if (!(scheme.rate(b) > 0) || !(psi_b > psi_a))
      throw std::domain_error("sampling_times: psi is not increasing near t=" + std::to_string(b));
    // integers m with psi_a < m <= psi_b
    for (double m = std::floor(psi_a) + 1; m <= psi_b; m += 1.0) {
      times.push_back(m == psi_b ? b : solve_crossing(scheme, m, a, b));
    }
    a = b;
    psi_a = psi_b;
  }
  return times;
}

SampleSet sample_signal(const ImtSignal& signal, const SamplingScheme& scheme, double t_start,
                        double t_end) {
  auto times = sampling_times(scheme, t_start, t_end);
  std::vector<double> values(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) values[i] = signal.evaluate(times[i]);
  return SampleSet(std::move(times), std::move(values));
}

// ---------------------------------------------------------------------------
// ISR estimate

IsrEstimate::IsrEstimate(std::shared_ptr<const SplineInterpolant> spline)
    : spline_(std::move(spline)) {}

double IsrEstimate::isr(double t) const { return (*spline_)(t); }

std::pair<double, double> IsrEstimate::domain() const { return spline_->domain(); }

TimeFn IsrEstimate::isr_clamped() const {
  return [s = spline_](double t) {
    const auto [lo, hi] = s->domain();
    return (*s)(std::clamp(t, lo, hi));
  };
}

TimeFn IsrEstimate::inf_clamped() const {
  return [f = isr_clamped()](double t) { return 0.5 * f(t); };
}

IsrEstimate estimate_isr(std::span<const double> times) {
  if (times.size() < 5) throw std::invalid_argument("estimate_isr: need at least 5 sample times");
  std::vector<double> knots(times.size() - 1), rates(times.size() - 1);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double dt = times[i + 1] - times[i];
    if (!(dt > 0))
      throw std::invalid_argument("estimate_isr: times not strictly increasing at index " +
                                  std::to_string(i + 1));
    knots[i] = times[i];
    rates[i] = 1.0 / dt;
  }
  // Cubic needs 5 knots; with only 4 the quadratic spline is used.
  const int order = knots.size() >= 5 ? 3 : 2;
  SampleSet rate_samples(std::move(knots), std::move(rates));
  return IsrEstimate(
      std::make_shared<const SplineInterpolant>(interpolate_nonuniform(rate_samples, order)));
}

// ---------------------------------------------------------------------------
// Identifiability and INR

IdentifiabilityReport check_isr_identifiability(const SamplingScheme& a, const SamplingScheme& b,
                                                std::span<const double> grid) {
  if (grid.size() < 2) throw std::invalid_argument("check_isr_identifiability: grid too short");
  const auto ta = sampling_times(a, grid.front(), grid.back());
  const auto tb = sampling_times(b, grid.front(), grid.back());
  if (ta.size() != tb.size())
    throw std::invalid_argument("check_isr_identifiability: schemes generate " +
                                std::to_string(ta.size()) + " vs " + std::to_string(tb.size()) +
                                " sample times");
  for (std::size_t i = 0; i < ta.size(); ++i)
    if (std::abs(ta[i] - tb[i]) > 1e-8)
      throw std::invalid_argument("check_isr_identifiability: sample time " + std::to_string(i) +
                                  " differs");

  IdentifiabilityReport r;
  for (double t : grid) {
    r.max_rate_deviation = std::max(r.max_rate_deviation, std::abs(a.rate(t) - b.rate(t)));
    r.max_psi_deviation = std::max(r.max_psi_deviation, std::abs(a.psi(t) - b.psi(t)));
  }
  return r;
}

InrReport check_inr(const ImtSignal& signal, const SamplingScheme& scheme,
                    std::span<const double> grid) {
  InrReport r;
  r.min_margin_hz = std::numeric_limits<double>::infinity();
  for (double t : grid) {
    const double margin = scheme.rate(t) - 2.0 * signal.iff(t);
    if (margin < r.min_margin_hz) {
      r.min_margin_hz = margin;
      r.t_at_min = t;
    }
  }
  r.warning = !(r.min_margin_hz > 0);
  return r;
}

}  // namespace nyq
