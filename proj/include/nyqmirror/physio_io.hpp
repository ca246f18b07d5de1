#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nyqmirror/parallel.hpp"
#include "nyqmirror/sampling.hpp"
#include "nyqmirror/signal_model.hpp"
#include "nyqmirror/uniform_signal.hpp"

namespace nyq {

// R-peak instants t_i and, optionally, the R-peak amplitudes E(t_i).
struct RPeakRecord {
  std::vector<double> times;
  std::optional<std::vector<double>> amplitudes;

  std::size_t size() const { return times.size(); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t row, const std::string& what);
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// CSV with header "time_s" or "time_s,amplitude", one row per peak.
// Rows are numbered from 1 at the header line.
RPeakRecord parse_rpeaks(std::string_view csv);

// {(t_i, t_{i+1} - t_i)}, i = 1..N-1, anchored at the earlier peak.
SampleSet rri_series(const RPeakRecord& rec);

// Cubic-spline interpolation of the RRI series (seconds, not 1/RRI),
// resampled at rate over [t_1, t_{N-1}].
UniformSignal ihr_signal(const RPeakRecord& rec, double rate_hz = 8.0, Exec exec = {});

enum class EdrScheme { cubic, pchip, order_n };

struct EdrInterpolation {
  EdrScheme scheme = EdrScheme::cubic;
  int order = 3;  // used by order_n
};

// Interpolated R-peak amplitudes resampled at rate over [t_1, t_N], mean removed.
UniformSignal edr_signal(const RPeakRecord& rec, double rate_hz, EdrInterpolation scheme,
                         Exec exec = {});

// Peaks at the integer crossings of int_0^t ihr; amplitudes
// 1 + depth cos(2 pi int_0^t resp_if).
RPeakRecord synth_rpeaks(const TimeFn& ihr_hz, const TimeFn& resp_if_hz, double duration_s,
                         double modulation_depth);

}  // namespace nyq
