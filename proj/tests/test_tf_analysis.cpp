#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nyqmirror/tf_analysis.hpp"

using namespace nyq;

namespace {

constexpr double kPi = std::numbers::pi;

UniformSignal tone(double freq, double rate, double duration, double amp = 1.0) {
  std::vector<double> v(static_cast<std::size_t>(duration * rate) + 1);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = amp * std::cos(2 * kPi * freq * static_cast<double>(i) / rate);
  return UniformSignal(std::move(v), rate, 0.0);
}

UniformSignal noise(std::uint64_t seed, std::size_t n, double rate) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return UniformSignal(std::move(v), rate, 0.0);
}

// Direct DFT of frame j with the window centred on sample j * hop.
std::complex<double> naive_stft(const UniformSignal& s, const std::vector<double>& w, std::size_t hop,
                                std::size_t nfft, std::size_t j, std::size_t b) {
  const auto half = static_cast<long>(w.size() / 2);
  std::complex<double> acc{0, 0};
  for (long k = -half; k <= half; ++k) {
    const long idx = static_cast<long>(j * hop) + k;
    if (idx < 0 || idx >= static_cast<long>(s.size())) continue;
    const double ang = -2 * kPi * static_cast<double>(k) * static_cast<double>(b) / static_cast<double>(nfft);
    acc += s.values[static_cast<std::size_t>(idx)] * w[static_cast<std::size_t>(k + half)] *
           std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return acc;
}

}  // namespace

TEST(Windows, GaussianSymmetricUnitNorm) {
  const auto w = make_windows(WindowFamily::gaussian, 4.0, 32.0, 1);
  ASSERT_EQ(w.tapers.size(), 1u);
  const auto& g = w.tapers[0].g;
  EXPECT_EQ(g.size() % 2, 1u);
  double norm = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_NEAR(g[k], g[g.size() - 1 - k], 1e-15);
    norm += g[k] * g[k];
  }
  EXPECT_NEAR(norm, 1.0, 1e-12);
  EXPECT_EQ(std::max_element(g.begin(), g.end()) - g.begin(), static_cast<long>(g.size() / 2));
}

TEST(Windows, DerivativeCompanionMatchesFiniteDifference) {
  const double rate = 256.0;
  const auto w = make_windows(WindowFamily::hermite, 4.0, rate, 3);
  for (const auto& t : w.tapers)
    for (std::size_t k = 100; k + 100 < t.g.size(); k += 37)
      EXPECT_NEAR(t.dg[k], (t.g[k + 1] - t.g[k - 1]) * rate / 2, 2e-3 * (1 + std::abs(t.dg[k])));
}

TEST(Windows, HermiteOrthonormalAndFirstIsGaussian) {
  const auto h = make_windows(WindowFamily::hermite, 6.0, 32.0, 6);
  const auto g = make_windows(WindowFamily::gaussian, 6.0, 32.0, 1);
  for (std::size_t a = 0; a < h.tapers.size(); ++a)
    for (std::size_t b = 0; b < h.tapers.size(); ++b) {
      double dot = 0;
      for (std::size_t k = 0; k < h.length(); ++k) dot += h.tapers[a].g[k] * h.tapers[b].g[k];
      EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-12);
    }
  for (std::size_t k = 0; k < h.length(); ++k) EXPECT_NEAR(h.tapers[0].g[k], g.tapers[0].g[k], 1e-15);
}

TEST(Windows, InvalidRequests) {
  EXPECT_THROW(make_windows(WindowFamily::gaussian, 0.1, 32.0, 1), TfError);
  EXPECT_THROW(make_windows(WindowFamily::hermite, 4.0, 32.0, 11), TfError);
  EXPECT_THROW(make_windows(WindowFamily::gaussian, 4.0, 32.0, 3), TfError);
  EXPECT_THROW(make_windows(WindowFamily::hermite, 4.0, 32.0, 0), TfError);
}

TEST(Stft, MatchesDirectDft) {
  const auto s = noise(3, 300, 16.0);
  const auto w = make_windows(WindowFamily::gaussian, 2.0, 16.0, 1).tapers[0];
  const StftParams p{5, 64};
  const auto r = stft(s, w, p);
  ASSERT_EQ(r.bins(), 33u);
  ASSERT_EQ(r.frames(), 60u);
  for (std::size_t j = 0; j < r.frames(); j += 7)
    for (std::size_t b = 0; b < r.bins(); b += 3) {
      const auto ref = naive_stft(s, w.g, p.hop, p.nfft, j, b);
      EXPECT_NEAR(std::abs(r.complex_values[r.index(b, j)] - ref), 0.0, 1e-11);
    }
  EXPECT_DOUBLE_EQ(r.time_axis[2], 10.0 / 16.0);
  EXPECT_DOUBLE_EQ(r.freq_axis[4], 1.0);
}

TEST(Stft, Linear) {
  const auto a = noise(1, 400, 16.0), b = noise(2, 400, 16.0);
  std::vector<double> sum(400);
  for (std::size_t i = 0; i < 400; ++i) sum[i] = 2 * a.values[i] - 0.5 * b.values[i];
  const auto w = make_windows(WindowFamily::gaussian, 2.0, 16.0, 1).tapers[0];
  const StftParams p{4, 128};
  const auto ra = stft(a, w, p), rb = stft(b, w, p), rs = stft(UniformSignal(sum, 16.0, 0.0), w, p);
  for (std::size_t i = 0; i < rs.complex_values.size(); ++i)
    EXPECT_NEAR(std::abs(rs.complex_values[i] - (2.0 * ra.complex_values[i] - 0.5 * rb.complex_values[i])), 0.0, 1e-11);
}

TEST(Stft, InvalidLayout) {
  const auto s = noise(1, 20, 16.0);
  const auto w = make_windows(WindowFamily::gaussian, 2.0, 16.0, 1).tapers[0];
  EXPECT_THROW(stft(s, w, {1, 64}), TfError);  // signal shorter than the window
  const auto longer = noise(1, 200, 16.0);
  EXPECT_THROW(stft(longer, w, {1, 16}), TfError);
  EXPECT_THROW(stft(longer, w, {0, 64}), TfError);
}

TEST(Synchrosqueeze, ConservesEachColumnAtZeroThreshold) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = noise(seed, 640, 32.0);
    const auto w = make_windows(WindowFamily::gaussian, 4.0, 32.0, 1).tapers[0];
    const StftParams p{4, 512};
    const auto v = stft(s, w, p);
    const auto q = synchrosqueeze(s, w, p, 0.0);
    for (std::size_t j = 0; j < v.frames(); ++j) {
      std::complex<double> a{0, 0}, b{0, 0};
      double scale = 0;
      for (std::size_t k = 0; k < v.bins(); ++k) {
        a += v.complex_values[v.index(k, j)];
        b += q.complex_values[q.index(k, j)];
        scale += std::abs(v.complex_values[v.index(k, j)]);
      }
      EXPECT_LE(std::abs(a - b), 1e-12 * scale);
    }
  }
}

TEST(Reassignment, ConservesTotalEnergyAtZeroThreshold) {
  const auto s = noise(7, 640, 32.0);
  const auto w = make_windows(WindowFamily::gaussian, 4.0, 32.0, 1).tapers[0];
  const StftParams p{4, 512};
  const auto v = stft(s, w, p);
  const auto r = reassign(s, w, p, 0.0);
  double ev = 0, er = 0;
  for (const auto& c : v.complex_values) ev += std::norm(c);
  for (double m : r.real_values) {
    EXPECT_GE(m, 0.0);
    er += m;
  }
  EXPECT_NEAR(er, ev, 1e-10 * ev);
}

TEST(Synchrosqueeze, ConcentratesPureTone) {
  const auto s = tone(3.0, 32.0, 60.0);
  AnalysisConfig cfg;
  cfg.window_s = 4.0;
  const auto r = analyze(s, cfg);
  double near = 0, total = 0;
  for (std::size_t j = 0; j < r.frames(); ++j) {
    if (r.time_axis[j] < 5 || r.time_axis[j] > 55) continue;
    for (std::size_t b = 0; b < r.bins(); ++b) {
      const double m = r.magnitude(b, j);
      total += m;
      if (std::abs(r.freq_axis[b] - 3.0) <= 2.5 * r.bin_width()) near += m;
    }
  }
  EXPECT_GT(near / total, 0.95);
}

TEST(Reassignment, LocalisesImpulseInTime) {
  std::vector<double> v(32 * 30, 0.0);
  v[32 * 15] = 1.0;
  AnalysisConfig cfg;
  cfg.method = TfMethod::rm;
  cfg.window_s = 4.0;
  const auto r = analyze(UniformSignal(v, 32.0, 0.0), cfg);
  double near = 0, total = 0;
  for (std::size_t j = 0; j < r.frames(); ++j)
    for (std::size_t b = 0; b < r.bins(); ++b) {
      total += r.real_values[r.index(b, j)];
      if (std::abs(r.time_axis[j] - 15.0) <= 0.125 + 1e-9) near += r.real_values[r.index(b, j)];
    }
  EXPECT_GT(near / total, 0.9);
}

TEST(Multitaper, ReducesVarianceOnWhiteNoise) {
  // var/mean^2 of one spectrogram cell over 50 realisations: about 1 for a
  // single taper and about 1/J for J orthonormal tapers.
  const auto tapers = make_windows(WindowFamily::hermite, 4.0, 32.0, 4);
  const StftParams p{8, 512};
  const std::size_t frame = 40, bin = 150;
  std::vector<double> single, multi;
  for (std::uint64_t seed = 100; seed < 150; ++seed) {
    const auto s = noise(seed, 32 * 20, 32.0);
    double avg = 0;
    for (std::size_t k = 0; k < tapers.tapers.size(); ++k) {
      const auto v = stft(s, tapers.tapers[k], p);
      const double e = std::norm(v.complex_values[v.index(bin, frame)]);
      if (k == 0) single.push_back(e);
      avg += e / static_cast<double>(tapers.tapers.size());
    }
    multi.push_back(avg);
  }
  auto cv2 = [](const std::vector<double>& x) {
    double m = 0, q = 0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    for (double v : x) q += (v - m) * (v - m);
    return q / static_cast<double>(x.size() - 1) / (m * m);
  };
  EXPECT_LT(cv2(multi), 0.6 * cv2(single));
}

TEST(Multitaper, MeanOfSingleTaperResults) {
  const auto s = noise(9, 32 * 20, 32.0);
  const auto tapers = make_windows(WindowFamily::hermite, 4.0, 32.0, 3);
  const StftParams p{4, 512};
  const auto mt = multitaper(s, tapers, p, TfMethod::sst, 1e-8);
  EXPECT_EQ(mt.method, TfMethod::mt_sst);
  EXPECT_EQ(mt.window.tapers, 3);
  std::vector<double> ref(mt.real_values.size(), 0.0);
  for (const auto& t : tapers.tapers) {
    const auto m = synchrosqueeze(s, t, p, 1e-8).magnitudes();
    for (std::size_t i = 0; i < ref.size(); ++i) ref[i] += m[i];
  }
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(mt.real_values[i], ref[i] / 3.0, 1e-12);
  EXPECT_THROW(multitaper(s, make_windows(WindowFamily::hermite, 4.0, 32.0, 1), p, TfMethod::sst, 0), TfError);
  EXPECT_THROW(multitaper(s, tapers, p, TfMethod::stft, 0), TfError);
}

TEST(Analyze, DefaultsAndMetadata) {
  const auto s = tone(2.0, 64.0, 30.0);
  AnalysisConfig cfg;
  const auto r = analyze(s, cfg);
  EXPECT_EQ(r.method, TfMethod::sst);
  EXPECT_EQ(r.window.hop, 8u);
  EXPECT_EQ(r.window.nfft, 16384u);  // window 641 samples
  EXPECT_EQ(r.window.duration_s, 10.0);
  EXPECT_EQ(r.window.threshold, 1e-8);
  cfg.method = TfMethod::mt_rm;
  const auto m = analyze(s, cfg);
  EXPECT_EQ(m.window.family, WindowFamily::hermite);
  EXPECT_EQ(m.window.tapers, 3);
}

TEST(Analyze, SerialAndParallelBitIdentical) {
  const auto s = noise(4, 32 * 30, 32.0);
  for (auto method : {TfMethod::stft, TfMethod::sst, TfMethod::rm, TfMethod::mt_sst, TfMethod::mt_rm}) {
    AnalysisConfig cfg;
    cfg.method = method;
    cfg.window_s = 4.0;
    const auto a = analyze(s, cfg, Exec::reference());
    const auto b = analyze(s, cfg, Exec{4});
    EXPECT_EQ(a.complex_values, b.complex_values) << to_string(method);
    EXPECT_EQ(a.real_values, b.real_values) << to_string(method);
  }
}

TEST(Analyze, ParseNames) {
  EXPECT_EQ(parse_tf_method("mt_rm"), TfMethod::mt_rm);
  EXPECT_EQ(parse_window_family("hermite"), WindowFamily::hermite);
  EXPECT_THROW(parse_tf_method("wigner"), std::invalid_argument);
}

TEST(CropFrequency, KeepsBinsAtOrBelowLimit) {
  const auto r = analyze(tone(2.0, 16.0, 30.0), AnalysisConfig{TfMethod::stft, WindowFamily::gaussian, 4.0});
  const auto c = crop_frequency(r, 3.0);
  EXPECT_LE(c.freq_axis.back(), 3.0);
  EXPECT_GT(r.freq_axis[c.bins()], 3.0);
  EXPECT_EQ(c.complex_values.size(), c.bins() * c.frames());
  EXPECT_EQ(c.complex_values[c.index(5, 3)], r.complex_values[r.index(5, 3)]);
}

TEST(Display, QuantileInterpolates) {
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.0), 1.0);
  EXPECT_THROW(quantile({}, 0.5), std::invalid_argument);
}

TEST(Display, ClampsAndFloors) {
  const auto r = analyze(tone(2.0, 16.0, 30.0, 5.0), AnalysisConfig{TfMethod::rm, WindowFamily::gaussian, 4.0});
  const auto d = log_display(r);
  const double cap = std::log1p(d.quantile_q);
  for (double v : d.values) {
    EXPECT_GE(v, 1e-2);
    EXPECT_LE(v, cap);
  }
  EXPECT_EQ(d.bins, r.bins());
  EXPECT_EQ(d.frames, r.frames());
}

TEST(Ridge, FollowsLinearChirp) {
  const double rate = 32.0;
  std::vector<double> v(static_cast<std::size_t>(40 * rate) + 1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = static_cast<double>(i) / rate;
    v[i] = std::cos(2 * kPi * (2.0 * t + 0.025 * t * t));
  }
  AnalysisConfig cfg;
  cfg.window_s = 4.0;
  const auto r = crop_frequency(analyze(UniformSignal(v, rate, 0.0), cfg), 8.0);
  const auto mags = r.magnitudes();
  const double peak = *std::max_element(mags.begin(), mags.end());
  const auto ridge = ridge_extract(r, 0.5, 7.5, 1e-4 * peak);
  for (std::size_t j = 0; j < r.frames(); ++j) {
    const double t = r.time_axis[j];
    if (t < 4 || t > 36) continue;
    EXPECT_NEAR(ridge[j], 2.0 + 0.05 * t, 0.05) << t;
  }
}

TEST(Ridge, ZeroMatrixTakesLowestBin) {
  auto r = analyze(UniformSignal(std::vector<double>(32 * 20, 0.0), 32.0, 0.0),
                   AnalysisConfig{TfMethod::rm, WindowFamily::gaussian, 4.0});
  const auto ridge = ridge_extract(r, 1.0, 3.0, 0.1);
  std::size_t lo = 0;
  while (r.freq_axis[lo] < 1.0) ++lo;
  for (double f : ridge) EXPECT_EQ(f, r.freq_axis[lo]);
  EXPECT_THROW(ridge_extract(r, 100.0, 200.0, 0.1), TfError);
}

TEST(Ridge, StrictTimeVaryingBand) {
  TfRepresentation r;
  r.method = TfMethod::rm;
  r.freq_axis = {0, 1, 2, 3, 4};
  r.time_axis = {0, 1};
  r.real_values.assign(10, 0.0);
  r.real_values[r.index(2, 0)] = 5;  // on the lower edge: excluded
  r.real_values[r.index(3, 0)] = 1;
  r.real_values[r.index(3, 1)] = 1;
  const auto ridge = ridge_extract_between(r, [](double) { return 2.0; }, [](double) { return 4.0; }, 0.0);
  EXPECT_EQ(ridge[0], 3.0);
  EXPECT_EQ(ridge[1], 3.0);
}
