#pragma once

#include <stdexcept>
#include <vector>

namespace nyq {

// Uniformly sampled real signal: values[k] is the value at t_start + k / rate.
struct UniformSignal {
  std::vector<double> values;
  double rate = 1.0;
  double t_start = 0.0;

  UniformSignal() = default;
  UniformSignal(std::vector<double> v, double rate_hz, double t0)
      : values(std::move(v)), rate(rate_hz), t_start(t0) {
    if (!(rate > 0)) throw std::invalid_argument("UniformSignal: rate must be positive");
    if (values.size() < 2) throw std::invalid_argument("UniformSignal: need at least 2 samples");
  }

  std::size_t size() const { return values.size(); }
  double time(std::size_t k) const { return t_start + static_cast<double>(k) / rate; }
  double t_end() const { return time(values.size() - 1); }
};

}  // namespace nyq
