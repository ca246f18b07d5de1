#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nyqmirror/parallel.hpp"
#include "nyqmirror/signal_model.hpp"
#include "nyqmirror/uniform_signal.hpp"

namespace nyq {

enum class WindowFamily { gaussian, hermite };
enum class TfMethod { stft, sst, rm, mt_sst, mt_rm };

const char* to_string(WindowFamily f);
const char* to_string(TfMethod m);
WindowFamily parse_window_family(const std::string& s);
TfMethod parse_tf_method(const std::string& s);

// One analysis taper sampled at u_k = (k - (L-1)/2) / rate seconds, with the
// companions needed for reassignment: its time derivative (per second) and
// the time-weighted taper u g(u).
struct Taper {
  std::vector<double> g;
  std::vector<double> dg;
  std::vector<double> tg;
};

struct WindowSet {
  WindowFamily family = WindowFamily::gaussian;
  double duration_s = 0;
  double rate = 0;
  std::vector<Taper> tapers;

  std::size_t length() const { return tapers.empty() ? 0 : tapers.front().g.size(); }
};

inline constexpr int kMaxTapers = 10;

// gaussian: g(u) ~ exp(-pi u^2 / sigma^2) with sigma^2 = 2 pi s^2 and
// s = duration / 8, truncated to the duration, unit L2 norm.
// hermite: the first J Hermite functions at the same scale, orthonormalised
// on the sample grid (the first taper is exactly the gaussian window).
WindowSet make_windows(WindowFamily family, double duration_s, double rate_hz, int taper_count);

struct StftParams {
  std::size_t hop = 1;   // samples between frames
  std::size_t nfft = 0;  // transform length, >= window length
};

// Figure-reproduction defaults: 8 frames per second, nfft = next power of
// two >= 16 x window length, 3 tapers, relative threshold 1e-8.
struct AnalysisDefaults {
  static constexpr double window_s = 10.0;
  static constexpr int tapers = 3;
  static constexpr double threshold = 1e-8;
  static std::size_t hop(double rate_hz);
  static std::size_t nfft(std::size_t window_length);
};

struct WindowMeta {
  WindowFamily family = WindowFamily::gaussian;
  double duration_s = 0;
  std::size_t hop = 0;
  std::size_t nfft = 0;
  int tapers = 1;
  double threshold = 0;
};

// Time-frequency matrix, bins x frames, row-major (index bin * frames + frame).
// stft and sst carry complex values; rm, mt_sst and mt_rm carry real
// nonnegative values.
struct TfRepresentation {
  TfMethod method = TfMethod::stft;
  WindowMeta window;
  std::vector<double> freq_axis;
  std::vector<double> time_axis;
  std::vector<std::complex<double>> complex_values;
  std::vector<double> real_values;

  bool is_complex() const { return method == TfMethod::stft || method == TfMethod::sst; }
  std::size_t bins() const { return freq_axis.size(); }
  std::size_t frames() const { return time_axis.size(); }
  std::size_t index(std::size_t bin, std::size_t frame) const { return bin * frames() + frame; }
  double magnitude(std::size_t bin, std::size_t frame) const;
  std::vector<double> magnitudes() const;
  double bin_width() const { return freq_axis.size() > 1 ? freq_axis[1] - freq_axis[0] : 0.0; }
};

// Keeps only bins with frequency <= max_hz.
TfRepresentation crop_frequency(const TfRepresentation& tfr, double max_hz);

class TfError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

TfRepresentation stft(const UniformSignal& sig, const Taper& window, StftParams params,
                      Exec exec = {});

// Frequency reassignment of the STFT: each coefficient with
// |V| > threshold * max|V| moves within its column to the bin nearest
// xi - Im(V_dg / V_g) / (2 pi). Estimates off the grid clip to the edge bins.
TfRepresentation synchrosqueeze(const UniformSignal& sig, const Taper& window, StftParams params,
                                double threshold, Exec exec = {});

// Time-frequency reassignment of the spectrogram: |V|^2 moves to
// (tau + Re(V_tg / V_g), omega-hat), clipped to the grid.
TfRepresentation reassign(const UniformSignal& sig, const Taper& window, StftParams params,
                          double threshold, Exec exec = {});

// Mean over the tapers of |sst| (method sst) or of the reassigned mass
// (method rm). Needs at least two tapers.
TfRepresentation multitaper(const UniformSignal& sig, const WindowSet& tapers, StftParams params,
                            TfMethod method, double threshold, Exec exec = {});

// Convenience dispatcher used by the pipelines.
struct AnalysisConfig {
  TfMethod method = TfMethod::sst;
  WindowFamily family = WindowFamily::gaussian;
  double window_s = AnalysisDefaults::window_s;
  std::size_t hop = 0;   // 0 selects the default
  std::size_t nfft = 0;  // 0 selects the default
  int tapers = AnalysisDefaults::tapers;
  double threshold = AnalysisDefaults::threshold;
};

TfRepresentation analyze(const UniformSignal& sig, const AnalysisConfig& config, Exec exec = {});

struct DisplayMatrix {
  std::vector<double> values;  // bins x frames, row-major
  std::size_t bins = 0;
  std::size_t frames = 0;
  double quantile_q = 0;
  double max_value() const;
};

// R~ = max(1e-2, log(1 + min(|R|, q))), q the 99.8% quantile of |R| over all
// entries (linear interpolation between order statistics).
DisplayMatrix log_display(const TfRepresentation& tfr);

double quantile(std::vector<double> values, double p);

// Ridge maximising sum |R| - jump_penalty * sum |delta bins| by dynamic
// programming over the band; ties go to the lower frequency. Returns Hz per frame.
std::vector<double> ridge_extract(const TfRepresentation& tfr, double freq_min, double freq_max,
                                  double jump_penalty);

// Same with a time-varying band: bins with lower(t) < f < upper(t).
// Frames whose band is empty fall back to the nearest bin above lower(t).
std::vector<double> ridge_extract_between(const TfRepresentation& tfr, const TimeFn& lower,
                                          const TimeFn& upper, double jump_penalty);

}  // namespace nyq
