#include "nyqmirror/physio_io.hpp"

#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>

#include "nyqmirror/spline_interp.hpp"

namespace nyq {

ParseError::ParseError(std::size_t row, const std::string& what)
    : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view field, std::size_t row, const char* column) {
  if (field.size() >= 2 && field.front() == '"' && field.back() == '"') field = field.substr(1, field.size() - 2);
  double value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
    throw ParseError(row, std::string("invalid ") + column + " value '" + std::string(field) + "'");
  return value;
}

}  // namespace

RPeakRecord parse_rpeaks(std::string_view csv) {
  if (csv.size() >= 3 && csv.substr(0, 3) == "\xEF\xBB\xBF") csv.remove_prefix(3);
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < csv.size();) {
    const auto nl = csv.find('\n', start);
    lines.push_back(csv.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  if (lines.empty() || trim(lines.front()).empty()) throw ParseError(1, "empty file (expected header time_s[,amplitude])");

  const auto header = split_fields(trim(lines.front()));
  bool with_amplitude = false;
  if (header.size() == 2 && header[0] == "time_s" && header[1] == "amplitude")
    with_amplitude = true;
  else if (!(header.size() == 1 && header[0] == "time_s"))
    throw ParseError(1, "expected header 'time_s' or 'time_s,amplitude', got '" +
                            std::string(trim(lines.front())) + "'");

  RPeakRecord rec;
  std::vector<double> amplitudes;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t row = i + 1;
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw ParseError(row, "expected " + std::to_string(header.size()) + " field(s), got " +
                                std::to_string(fields.size()));
    const double t = parse_number(fields[0], row, "time_s");
    if (!rec.times.empty() && !(t > rec.times.back()))
      throw ParseError(row, "time_s must be strictly increasing");
    rec.times.push_back(t);
    if (with_amplitude) amplitudes.push_back(parse_number(fields[1], row, "amplitude"));
  }
  if (rec.times.empty()) throw ParseError(1, "no R peaks after the header");
  if (with_amplitude) rec.amplitudes = std::move(amplitudes);
  return rec;
}

SampleSet rri_series(const RPeakRecord& rec) {
  if (rec.size() < 3)
    throw std::invalid_argument("rri_series: need at least 3 R peaks, got " + std::to_string(rec.size()));
  std::vector<double> t(rec.times.begin(), rec.times.end() - 1), v(rec.size() - 1);
  for (std::size_t i = 0; i + 1 < rec.size(); ++i) v[i] = rec.times[i + 1] - rec.times[i];
  return SampleSet(std::move(t), std::move(v));
}

UniformSignal ihr_signal(const RPeakRecord& rec, double rate_hz, Exec exec) {
  if (rec.size() < 6)
    throw std::invalid_argument("ihr_signal: need at least 6 R peaks, got " + std::to_string(rec.size()));
  const auto rri = rri_series(rec);
  const auto spline = interpolate_nonuniform(rri, 3);
  return resample_uniform(spline, rate_hz, rri.times().front(), rri.times().back(), exec);
}

UniformSignal edr_signal(const RPeakRecord& rec, double rate_hz, EdrInterpolation scheme, Exec exec) {
  if (!rec.amplitudes) throw std::invalid_argument("edr_signal: record has no amplitude column");
  const SampleSet samples(rec.times, *rec.amplitudes);
  const double t0 = rec.times.front(), t1 = rec.times.back();

  UniformSignal out;
  switch (scheme.scheme) {
    case EdrScheme::pchip:
      out = resample_uniform(interpolate_pchip(samples), rate_hz, t0, t1, exec);
      break;
    case EdrScheme::cubic:
    case EdrScheme::order_n: {
      const int n = scheme.scheme == EdrScheme::cubic ? 3 : scheme.order;
      if (rec.size() < static_cast<std::size_t>(n) + 2)
        throw std::invalid_argument("edr_signal: order " + std::to_string(n) + " needs at least " +
                                    std::to_string(n + 2) + " R peaks, got " + std::to_string(rec.size()));
      out = resample_uniform(interpolate_nonuniform(samples, n), rate_hz, t0, t1, exec);
      break;
    }
  }
  const double mean = std::accumulate(out.values.begin(), out.values.end(), 0.0) /
                      static_cast<double>(out.size());
  for (double& v : out.values) v -= mean;
  return out;
}

RPeakRecord synth_rpeaks(const TimeFn& ihr_hz, const TimeFn& resp_if_hz, double duration_s,
                         double modulation_depth) {
  if (!(duration_s > 0)) throw std::invalid_argument("synth_rpeaks: duration must be positive");
  for (int i = 0; i <= 4096; ++i) {
    const double t = duration_s * i / 4096.0;
    if (!(ihr_hz(t) > 0))
      throw std::domain_error("synth_rpeaks: IHR must be positive (got " + std::to_string(ihr_hz(t)) +
                              " Hz at t=" + std::to_string(t) + ")");
  }
  auto beats = std::make_shared<const Antiderivative>(ihr_hz, 0.0, duration_s);
  const SamplingScheme scheme([beats](double t) { return (*beats)(t); }, ihr_hz);

  RPeakRecord rec;
  rec.times = sampling_times(scheme, 0.0, duration_s);
  const Antiderivative resp_phase(resp_if_hz, 0.0, duration_s);
  std::vector<double> amps(rec.size());
  for (std::size_t i = 0; i < rec.size(); ++i)
    amps[i] = 1.0 + modulation_depth * std::cos(2 * std::numbers::pi * resp_phase(rec.times[i]));
  rec.amplitudes = std::move(amps);
  return rec;
}

}  // namespace nyq
