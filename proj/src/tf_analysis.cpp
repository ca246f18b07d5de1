#include "nyqmirror/tf_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numbers>

#include <fftw3.h>

namespace nyq {

const char* to_string(WindowFamily f) {
  return f == WindowFamily::gaussian ? "gaussian" : "hermite";
}

const char* to_string(TfMethod m) {
  switch (m) {
    case TfMethod::stft: return "stft";
    case TfMethod::sst: return "sst";
    case TfMethod::rm: return "rm";
    case TfMethod::mt_sst: return "mt_sst";
    case TfMethod::mt_rm: return "mt_rm";
  }
  return "unknown";
}

WindowFamily parse_window_family(const std::string& s) {
  if (s == "gaussian") return WindowFamily::gaussian;
  if (s == "hermite") return WindowFamily::hermite;
  throw std::invalid_argument("unknown window family '" + s + "'");
}

TfMethod parse_tf_method(const std::string& s) {
  for (auto m : {TfMethod::stft, TfMethod::sst, TfMethod::rm, TfMethod::mt_sst, TfMethod::mt_rm})
    if (s == to_string(m)) return m;
  throw std::invalid_argument("unknown TF method '" + s + "'");
}

double TfRepresentation::magnitude(std::size_t bin, std::size_t frame) const {
  const auto i = index(bin, frame);
  return is_complex() ? std::abs(complex_values[i]) : real_values[i];
}

std::vector<double> TfRepresentation::magnitudes() const {
  if (!is_complex()) return real_values;
  std::vector<double> out(complex_values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(complex_values[i]);
  return out;
}

TfRepresentation crop_frequency(const TfRepresentation& tfr, double max_hz) {
  std::size_t keep = 0;
  while (keep < tfr.bins() && tfr.freq_axis[keep] <= max_hz) ++keep;
  if (keep == 0) throw TfError("crop_frequency: no bins below " + std::to_string(max_hz) + " Hz");
  TfRepresentation out;
  out.method = tfr.method;
  out.window = tfr.window;
  out.time_axis = tfr.time_axis;
  out.freq_axis.assign(tfr.freq_axis.begin(), tfr.freq_axis.begin() + static_cast<std::ptrdiff_t>(keep));
  const std::size_t n = keep * tfr.frames();
  if (tfr.is_complex())
    out.complex_values.assign(tfr.complex_values.begin(), tfr.complex_values.begin() + static_cast<std::ptrdiff_t>(n));
  else
    out.real_values.assign(tfr.real_values.begin(), tfr.real_values.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

// ---------------------------------------------------------------------------
// Windows

WindowSet make_windows(WindowFamily family, double duration_s, double rate_hz, int taper_count) {
  if (!(rate_hz > 0) || !(duration_s > 0)) throw TfError("make_windows: duration and rate must be positive");
  if (duration_s * rate_hz < 16.0) throw TfError("make_windows: window shorter than 16 samples");
  if (taper_count < 1) throw TfError("make_windows: need at least one taper");
  if (taper_count > kMaxTapers) throw TfError("make_windows: more than 10 tapers requested");
  if (family == WindowFamily::gaussian && taper_count != 1)
    throw TfError("make_windows: the gaussian family has a single taper");

  const auto half = static_cast<std::size_t>(std::floor(duration_s * rate_hz / 2.0));
  const std::size_t len = 2 * half + 1;
  const double scale = duration_s / 8.0;
  const auto count = static_cast<std::size_t>(taper_count);

  // Hermite functions h_0 .. h_count (one extra for the derivative identity).
  std::vector<std::vector<double>> h(count + 1, std::vector<double>(len));
  std::vector<double> u(len);
  for (std::size_t k = 0; k < len; ++k) {
    u[k] = (static_cast<double>(k) - static_cast<double>(half)) / rate_hz;
    const double x = u[k] / scale;
    h[0][k] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (count >= 1) h[1][k] = std::numbers::sqrt2 * x * h[0][k];
    for (std::size_t m = 1; m < count; ++m) {
      const double md = static_cast<double>(m);
      h[m + 1][k] = std::sqrt(2.0 / (md + 1)) * x * h[m][k] - std::sqrt(md / (md + 1)) * h[m - 1][k];
    }
  }

  WindowSet set;
  set.family = family;
  set.duration_s = duration_s;
  set.rate = rate_hz;
  for (std::size_t m = 0; m < count; ++m) {
    Taper t{h[m], std::vector<double>(len), std::vector<double>(len)};
    const double md = static_cast<double>(m);
    for (std::size_t k = 0; k < len; ++k) {
      const double lower = m > 0 ? std::sqrt(md / 2.0) * h[m - 1][k] : 0.0;
      t.dg[k] = (lower - std::sqrt((md + 1) / 2.0) * h[m + 1][k]) / scale;
      t.tg[k] = u[k] * h[m][k];
    }
    // Modified Gram-Schmidt on the sample grid; derivative and time-weighted
    // companions follow the same linear combination.
    for (const auto& q : set.tapers) {
      double r = 0;
      for (std::size_t k = 0; k < len; ++k) r += t.g[k] * q.g[k];
      for (std::size_t k = 0; k < len; ++k) {
        t.g[k] -= r * q.g[k];
        t.dg[k] -= r * q.dg[k];
        t.tg[k] -= r * q.tg[k];
      }
    }
    double norm = 0;
    for (double v : t.g) norm += v * v;
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < len; ++k) {
      t.g[k] /= norm;
      t.dg[k] /= norm;
      t.tg[k] /= norm;
    }
    set.tapers.push_back(std::move(t));
  }
  return set;
}

std::size_t AnalysisDefaults::hop(double rate_hz) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(rate_hz / 8.0)));
}

std::size_t AnalysisDefaults::nfft(std::size_t window_length) {
  std::size_t n = 1;
  while (n < 16 * window_length) n <<= 1;
  return n;
}

// ---------------------------------------------------------------------------
// Frame transforms

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// r2c plan of fixed length. Plans are created under a lock (the FFTW planner
// is not thread-safe) and executed concurrently on per-thread buffers.
class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    auto* in = fftw_alloc_real(n);
    auto* out = fftw_alloc_complex(n / 2 + 1);
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    if (!plan_) throw std::runtime_error("FFTW planning failed");
  }
  ~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  void execute(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(plan_, in, out); }

 private:
  std::size_t n_;
  fftw_plan plan_ = nullptr;
};

struct FftBuffers {
  explicit FftBuffers(std::size_t n)
      : in(fftw_alloc_real(n)), out(fftw_alloc_complex(n / 2 + 1)), n(n) {}
  ~FftBuffers() {
    fftw_free(in);
    fftw_free(out);
  }
  FftBuffers(FftBuffers&& o) noexcept : in(o.in), out(o.out), n(o.n) {
    o.in = nullptr;
    o.out = nullptr;
  }
  FftBuffers(const FftBuffers&) = delete;
  FftBuffers& operator=(const FftBuffers&) = delete;

  double* in;
  fftw_complex* out;
  std::size_t n;
};

struct FrameLayout {
  std::size_t samples = 0;
  std::size_t window = 0;
  std::size_t half = 0;
  std::size_t hop = 1;
  std::size_t nfft = 0;
  std::size_t bins = 0;
  std::size_t frames = 0;
  double rate = 1;
  double t_start = 0;

  double frame_time(std::size_t j) const { return t_start + static_cast<double>(j * hop) / rate; }
  double bin_freq(std::size_t b) const { return static_cast<double>(b) * rate / static_cast<double>(nfft); }
};

FrameLayout make_layout(const UniformSignal& sig, std::size_t window_len, StftParams params) {
  if (window_len < 2 || window_len % 2 == 0) throw TfError("stft: window length must be odd and >= 3");
  if (params.hop < 1) throw TfError("stft: hop must be >= 1");
  if (params.nfft < window_len) throw TfError("stft: nfft shorter than the window");
  if (sig.size() < window_len) throw TfError("stft: signal shorter than the window");
  FrameLayout l;
  l.samples = sig.size();
  l.window = window_len;
  l.half = window_len / 2;
  l.hop = params.hop;
  l.nfft = params.nfft;
  l.bins = params.nfft / 2 + 1;
  l.frames = (sig.size() - 1) / params.hop + 1;
  l.rate = sig.rate;
  l.t_start = sig.t_start;
  return l;
}

// Spectrum of frame j under window w, phase referenced to the frame centre.
void transform_frame(const FrameLayout& l, std::span<const double> x, std::span<const double> w,
                     std::size_t j, const RealFft& fft, FftBuffers& buf,
                     std::span<std::complex<double>> out) {
  std::fill(buf.in, buf.in + l.nfft, 0.0);
  const auto centre = static_cast<std::ptrdiff_t>(j * l.hop);
  const auto half = static_cast<std::ptrdiff_t>(l.half);
  const auto n = static_cast<std::ptrdiff_t>(l.samples);
  const auto nfft = static_cast<std::ptrdiff_t>(l.nfft);
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(l.window); ++k) {
    const std::ptrdiff_t idx = centre + k - half;
    if (idx < 0 || idx >= n) continue;
    const std::ptrdiff_t slot = ((k - half) % nfft + nfft) % nfft;
    buf.in[slot] = x[static_cast<std::size_t>(idx)] * w[static_cast<std::size_t>(k)];
  }
  fft.execute(buf.in, buf.out);
  for (std::size_t b = 0; b < l.bins; ++b) out[b] = {buf.out[b][0], buf.out[b][1]};
}

TfRepresentation empty_representation(const FrameLayout& l, TfMethod method) {
  TfRepresentation r;
  r.method = method;
  r.freq_axis.resize(l.bins);
  r.time_axis.resize(l.frames);
  for (std::size_t b = 0; b < l.bins; ++b) r.freq_axis[b] = l.bin_freq(b);
  for (std::size_t j = 0; j < l.frames; ++j) r.time_axis[j] = l.frame_time(j);
  if (r.is_complex())
    r.complex_values.assign(l.bins * l.frames, {0.0, 0.0});
  else
    r.real_values.assign(l.bins * l.frames, 0.0);
  return r;
}

struct FrameWork {
  FftBuffers buf;
  std::vector<std::complex<double>> vg, vdg, vtg;
  FrameWork(std::size_t nfft, std::size_t bins) : buf(nfft), vg(bins), vdg(bins), vtg(bins) {}
};

// max_j,b |V_g|; max is exact, so the parallel reduction is order-independent.
double max_magnitude(const FrameLayout& l, std::span<const double> x, const Taper& w,
                     const RealFft& fft, Exec exec) {
  std::vector<double> frame_max(l.frames, 0.0);
  parallel_for_with_state(
      l.frames, exec, [&] { return FrameWork(l.nfft, l.bins); },
      [&](FrameWork& ws, std::size_t j) {
        transform_frame(l, x, w.g, j, fft, ws.buf, ws.vg);
        double m = 0;
        for (const auto& v : ws.vg) m = std::max(m, std::abs(v));
        frame_max[j] = m;
      });
  return frame_max.empty() ? 0.0 : *std::max_element(frame_max.begin(), frame_max.end());
}

std::size_t nearest_bin(double freq, const FrameLayout& l, std::size_t fallback) {
  if (std::isnan(freq)) return fallback;
  const double pos = freq * static_cast<double>(l.nfft) / l.rate;
  if (!(pos > 0)) return 0;
  if (pos >= static_cast<double>(l.bins - 1)) return l.bins - 1;
  return static_cast<std::size_t>(std::lround(pos));
}

std::size_t nearest_frame(double t, const FrameLayout& l, std::size_t fallback) {
  if (std::isnan(t)) return fallback;
  const double pos = (t - l.t_start) * l.rate / static_cast<double>(l.hop);
  if (!(pos > 0)) return 0;
  if (pos >= static_cast<double>(l.frames - 1)) return l.frames - 1;
  return static_cast<std::size_t>(std::lround(pos));
}

double inst_frequency(const FrameLayout& l, std::size_t b, std::complex<double> vg,
                      std::complex<double> vdg) {
  return l.bin_freq(b) - std::imag(vdg / vg) / (2.0 * std::numbers::pi);
}

}  // namespace

TfRepresentation stft(const UniformSignal& sig, const Taper& window, StftParams params, Exec exec) {
  const auto l = make_layout(sig, window.g.size(), params);
  const RealFft fft(l.nfft);
  auto r = empty_representation(l, TfMethod::stft);
  parallel_for_with_state(
      l.frames, exec, [&] { return FrameWork(l.nfft, l.bins); },
      [&](FrameWork& ws, std::size_t j) {
        transform_frame(l, sig.values, window.g, j, fft, ws.buf, ws.vg);
        for (std::size_t b = 0; b < l.bins; ++b) r.complex_values[r.index(b, j)] = ws.vg[b];
      });
  r.window = {WindowFamily::gaussian, static_cast<double>(l.window) / l.rate, l.hop, l.nfft, 1, 0.0};
  return r;
}

TfRepresentation synchrosqueeze(const UniformSignal& sig, const Taper& window, StftParams params,
                                double threshold, Exec exec) {
  if (!(threshold >= 0)) throw TfError("synchrosqueeze: threshold must be >= 0");
  const auto l = make_layout(sig, window.g.size(), params);
  const RealFft fft(l.nfft);
  const double cut = threshold > 0 ? threshold * max_magnitude(l, sig.values, window, fft, exec) : 0.0;
  auto r = empty_representation(l, TfMethod::sst);
  parallel_for_with_state(
      l.frames, exec, [&] { return FrameWork(l.nfft, l.bins); },
      [&](FrameWork& ws, std::size_t j) {
        transform_frame(l, sig.values, window.g, j, fft, ws.buf, ws.vg);
        transform_frame(l, sig.values, window.dg, j, fft, ws.buf, ws.vdg);
        for (std::size_t b = 0; b < l.bins; ++b) {
          const auto v = ws.vg[b];
          if (!(std::abs(v) > cut)) continue;
          const std::size_t target = nearest_bin(inst_frequency(l, b, v, ws.vdg[b]), l, b);
          r.complex_values[r.index(target, j)] += v;
        }
      });
  r.window = {WindowFamily::gaussian, static_cast<double>(l.window) / l.rate, l.hop, l.nfft, 1, threshold};
  return r;
}

namespace {

struct MassMove {
  std::uint32_t frame;
  std::uint32_t bin;
  double mass;
};

}  // namespace

TfRepresentation reassign(const UniformSignal& sig, const Taper& window, StftParams params,
                          double threshold, Exec exec) {
  if (!(threshold >= 0)) throw TfError("reassign: threshold must be >= 0");
  const auto l = make_layout(sig, window.g.size(), params);
  const RealFft fft(l.nfft);
  const double cut = threshold > 0 ? threshold * max_magnitude(l, sig.values, window, fft, exec) : 0.0;

  // Moves are collected per source frame and merged in frame order, so the
  // accumulation order does not depend on the thread count.
  std::vector<std::vector<MassMove>> moves(l.frames);
  parallel_for_with_state(
      l.frames, exec, [&] { return FrameWork(l.nfft, l.bins); },
      [&](FrameWork& ws, std::size_t j) {
        transform_frame(l, sig.values, window.g, j, fft, ws.buf, ws.vg);
        transform_frame(l, sig.values, window.dg, j, fft, ws.buf, ws.vdg);
        transform_frame(l, sig.values, window.tg, j, fft, ws.buf, ws.vtg);
        auto& out = moves[j];
        const double tau = l.frame_time(j);
        for (std::size_t b = 0; b < l.bins; ++b) {
          const auto v = ws.vg[b];
          if (!(std::abs(v) > cut)) continue;
          const std::size_t fb = nearest_bin(inst_frequency(l, b, v, ws.vdg[b]), l, b);
          const std::size_t tf = nearest_frame(tau + std::real(ws.vtg[b] / v), l, j);
          out.push_back({static_cast<std::uint32_t>(tf), static_cast<std::uint32_t>(fb), std::norm(v)});
        }
      });

  auto r = empty_representation(l, TfMethod::rm);
  for (const auto& frame_moves : moves)
    for (const auto& mv : frame_moves) r.real_values[r.index(mv.bin, mv.frame)] += mv.mass;
  r.window = {WindowFamily::gaussian, static_cast<double>(l.window) / l.rate, l.hop, l.nfft, 1, threshold};
  return r;
}

TfRepresentation multitaper(const UniformSignal& sig, const WindowSet& tapers, StftParams params,
                            TfMethod method, double threshold, Exec exec) {
  if (tapers.tapers.size() < 2) throw TfError("multitaper: needs at least 2 tapers");
  if (method != TfMethod::sst && method != TfMethod::rm)
    throw TfError("multitaper: method must be sst or rm");

  TfRepresentation acc;
  for (std::size_t k = 0; k < tapers.tapers.size(); ++k) {
    auto single = method == TfMethod::sst
                      ? synchrosqueeze(sig, tapers.tapers[k], params, threshold, exec)
                      : reassign(sig, tapers.tapers[k], params, threshold, exec);
    auto mags = single.magnitudes();
    if (k == 0) {
      acc = std::move(single);
      acc.method = method == TfMethod::sst ? TfMethod::mt_sst : TfMethod::mt_rm;
      acc.complex_values.clear();
      acc.real_values = std::move(mags);
    } else {
      for (std::size_t i = 0; i < mags.size(); ++i) acc.real_values[i] += mags[i];
    }
  }
  const double inv = 1.0 / static_cast<double>(tapers.tapers.size());
  for (auto& v : acc.real_values) v *= inv;
  acc.window.family = tapers.family;
  acc.window.tapers = static_cast<int>(tapers.tapers.size());
  return acc;
}

TfRepresentation analyze(const UniformSignal& sig, const AnalysisConfig& config, Exec exec) {
  const bool multi = config.method == TfMethod::mt_sst || config.method == TfMethod::mt_rm;
  const auto family = multi ? WindowFamily::hermite : config.family;
  const int count = multi ? config.tapers : 1;
  const auto windows = make_windows(family, config.window_s, sig.rate, count);
  StftParams params;
  params.hop = config.hop ? config.hop : AnalysisDefaults::hop(sig.rate);
  params.nfft = config.nfft ? config.nfft : AnalysisDefaults::nfft(windows.length());
  const auto& first = windows.tapers.front();

  TfRepresentation r;
  switch (config.method) {
    case TfMethod::stft: r = stft(sig, first, params, exec); break;
    case TfMethod::sst: r = synchrosqueeze(sig, first, params, config.threshold, exec); break;
    case TfMethod::rm: r = reassign(sig, first, params, config.threshold, exec); break;
    case TfMethod::mt_sst: r = multitaper(sig, windows, params, TfMethod::sst, config.threshold, exec); break;
    case TfMethod::mt_rm: r = multitaper(sig, windows, params, TfMethod::rm, config.threshold, exec); break;
  }
  r.window.family = family;
  r.window.duration_s = config.window_s;
  r.window.tapers = count;
  r.window.threshold = config.method == TfMethod::stft ? 0.0 : config.threshold;
  return r;
}

// ---------------------------------------------------------------------------
// Display

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile: empty input");
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
  const double a = values[lo];
  if (frac == 0.0 || lo + 1 >= values.size()) return a;
  const double b = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo + 1), values.end());
  return a + frac * (b - a);
}

double DisplayMatrix::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

DisplayMatrix log_display(const TfRepresentation& tfr) {
  auto mags = tfr.magnitudes();
  if (mags.empty()) throw TfError("log_display: empty matrix");
  DisplayMatrix d;
  d.bins = tfr.bins();
  d.frames = tfr.frames();
  d.quantile_q = quantile(mags, 0.998);
  d.values.resize(mags.size());
  for (std::size_t i = 0; i < mags.size(); ++i)
    d.values[i] = std::max(1e-2, std::log1p(std::min(mags[i], d.quantile_q)));
  return d;
}

// ---------------------------------------------------------------------------
// Ridges

namespace {

struct BandIndex {
  std::size_t lo;  // inclusive
  std::size_t hi;  // inclusive
};

std::vector<double> ridge_dp(const TfRepresentation& tfr, const std::vector<BandIndex>& bands,
                             double penalty) {
  const std::size_t nb = tfr.bins(), nf = tfr.frames();
  constexpr double kNeg = -std::numeric_limits<double>::infinity();
  std::vector<double> score(nb), next(nb), fwd(nb), bwd(nb);
  std::vector<std::uint32_t> fwd_arg(nb), bwd_arg(nb);
  std::vector<std::vector<std::uint32_t>> from(nf);

  std::fill(score.begin(), score.end(), kNeg);
  for (std::size_t b = bands[0].lo; b <= bands[0].hi; ++b) score[b] = tfr.magnitude(b, 0);

  for (std::size_t j = 1; j < nf; ++j) {
    // best predecessor for every bin under an L1 jump cost (two sweeps)
    for (std::size_t b = 0; b < nb; ++b) {
      fwd[b] = score[b];
      fwd_arg[b] = static_cast<std::uint32_t>(b);
      if (b > 0 && fwd[b - 1] - penalty >= fwd[b]) {
        fwd[b] = fwd[b - 1] - penalty;
        fwd_arg[b] = fwd_arg[b - 1];
      }
    }
    for (std::size_t bb = nb; bb-- > 0;) {
      bwd[bb] = score[bb];
      bwd_arg[bb] = static_cast<std::uint32_t>(bb);
      if (bb + 1 < nb && bwd[bb + 1] - penalty > bwd[bb]) {
        bwd[bb] = bwd[bb + 1] - penalty;
        bwd_arg[bb] = bwd_arg[bb + 1];
      }
    }
    auto& link = from[j];
    link.assign(nb, 0);
    std::fill(next.begin(), next.end(), kNeg);
    for (std::size_t b = bands[j].lo; b <= bands[j].hi; ++b) {
      const bool left = fwd[b] >= bwd[b];
      next[b] = (left ? fwd[b] : bwd[b]) + tfr.magnitude(b, j);
      link[b] = left ? fwd_arg[b] : bwd_arg[b];
    }
    std::swap(score, next);
  }

  std::size_t best = bands[nf - 1].lo;
  for (std::size_t b = bands[nf - 1].lo; b <= bands[nf - 1].hi; ++b)
    if (score[b] > score[best]) best = b;
  std::vector<double> ridge(nf);
  for (std::size_t j = nf; j-- > 0;) {
    ridge[j] = tfr.freq_axis[best];
    if (j > 0) best = from[j][best];
  }
  return ridge;
}

}  // namespace

std::vector<double> ridge_extract(const TfRepresentation& tfr, double freq_min, double freq_max,
                                  double jump_penalty) {
  if (tfr.bins() == 0 || tfr.frames() == 0) throw TfError("ridge_extract: empty matrix");
  std::size_t lo = 0;
  while (lo < tfr.bins() && tfr.freq_axis[lo] < freq_min) ++lo;
  std::size_t hi = lo;
  if (lo >= tfr.bins() || tfr.freq_axis[lo] > freq_max) throw TfError("ridge_extract: empty band");
  while (hi + 1 < tfr.bins() && tfr.freq_axis[hi + 1] <= freq_max) ++hi;
  return ridge_dp(tfr, std::vector<BandIndex>(tfr.frames(), {lo, hi}), jump_penalty);
}

std::vector<double> ridge_extract_between(const TfRepresentation& tfr, const TimeFn& lower,
                                          const TimeFn& upper, double jump_penalty) {
  if (tfr.bins() == 0 || tfr.frames() == 0) throw TfError("ridge_extract: empty matrix");
  std::vector<BandIndex> bands(tfr.frames());
  for (std::size_t j = 0; j < tfr.frames(); ++j) {
    const double t = tfr.time_axis[j];
    const double flo = lower(t), fhi = upper(t);
    std::size_t lo = 0;
    while (lo + 1 < tfr.bins() && !(tfr.freq_axis[lo] > flo)) ++lo;
    std::size_t hi = lo;
    while (hi + 1 < tfr.bins() && tfr.freq_axis[hi + 1] < fhi) ++hi;
    bands[j] = {lo, hi};
  }
  return ridge_dp(tfr, bands, jump_penalty);
}

}  // namespace nyq
