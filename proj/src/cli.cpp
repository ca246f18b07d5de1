#include "nyqmirror/cli.hpp"

#include <algorithm>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "nyqmirror/formats.hpp"
#include "nyqmirror/mitigation.hpp"
#include "nyqmirror/physio_io.hpp"
#include "nyqmirror/reflection.hpp"
#include "nyqmirror/spline_interp.hpp"

#ifndef NYQ_VERSION
#define NYQ_VERSION "0.0.0"
#endif

namespace nyq {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config

namespace {

json to_json(const RunConfig& c) {
  const auto& cs = c.scenario.custom;
  const auto& tf = c.analysis.tf;
  return {
      {"scenario",
       {{"name", c.scenario.name},
        {"if_mod_scale", c.scenario.if_mod_scale},
        {"custom",
         {{"amplitude", cs.amplitude},
          {"if_hz", cs.if_hz},
          {"if_mod_depth_hz", cs.if_mod_depth_hz},
          {"if_mod_rate_hz", cs.if_mod_rate_hz},
          {"isr_hz", cs.isr_hz},
          {"isr_mod_depth_hz", cs.isr_mod_depth_hz},
          {"isr_mod_rate_hz", cs.isr_mod_rate_hz},
          {"duration_s", cs.duration_s},
          {"resample_hz", cs.resample_hz}}}}},
      {"input",
       {{"signal_csv", c.input.signal_csv.generic_string()},
        {"sample_times_csv", c.input.sample_times_csv.generic_string()}}},
      {"interpolation", {{"scheme", c.interpolation.scheme}, {"order", c.interpolation.order}}},
      {"analysis",
       {{"method", to_string(tf.method)},
        {"window", to_string(tf.family)},
        {"window_s", tf.window_s},
        {"hop", tf.hop},
        {"nfft", tf.nfft},
        {"tapers", tf.tapers},
        {"threshold", tf.threshold},
        {"max_freq_hz", c.analysis.max_freq_hz},
        {"ridge_penalty", c.analysis.ridge_penalty}}},
      {"mitigation",
       {{"hard_threshold", c.mitigation.hard_threshold},
        {"lowpass", c.mitigation.lowpass},
        {"cutoff_hz", c.mitigation.cutoff_hz},
        {"transition_hz", c.mitigation.transition_hz}}},
      {"predict", {{"k_max", c.predict.k_max}}},
      {"physio",
       {{"rpeaks_csv", c.physio.rpeaks_csv.generic_string()},
        {"ihr_hz", c.physio.ihr_hz},
        {"resp_hz", c.physio.resp_hz},
        {"duration_s", c.physio.duration_s},
        {"depth", c.physio.depth},
        {"signal", c.physio.signal},
        {"rate_hz", c.physio.rate_hz}}},
      {"output", {{"directory", c.output.directory.generic_string()}, {"formats", c.output.formats}}},
      {"threads", c.threads},
  };
}

const char* type_label(const json& j) {
  if (j.is_boolean()) return "boolean";
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "array";
  if (j.is_object()) return "object";
  return "null";
}

void assign_checked(json& target, const json& value, const std::string& key) {
  const bool ok = (target.is_boolean() && value.is_boolean()) ||
                  (target.is_number_integer() && value.is_number_integer()) ||
                  (target.is_number_float() && value.is_number()) ||
                  (target.is_string() && value.is_string()) ||
                  (target.is_array() && value.is_array() &&
                   std::all_of(value.begin(), value.end(), [](const json& e) { return e.is_string(); }));
  if (!ok)
    throw ConfigError("config key '" + key + "': expected " + type_label(target) + ", got " +
                      type_label(value));
  target = target.is_number_float() ? json(value.get<double>()) : value;
}

void merge(json& base, const json& user, const std::string& prefix) {
  if (!user.is_object()) throw ConfigError("config" + (prefix.empty() ? std::string() : " key '" + prefix + "'") + ": expected an object");
  for (const auto& [key, value] : user.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown config key '" + path + "'");
    auto& slot = base[key];
    if (slot.is_object())
      merge(slot, value, path);
    else
      assign_checked(slot, value, path);
  }
}

void apply_override(json& base, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + spec + "'");
  const std::string key = spec.substr(0, eq), raw = spec.substr(eq + 1);
  json* slot = &base;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (!slot->is_object() || !slot->contains(part)) throw ConfigError("unknown config key '" + key + "' in --set");
    slot = &(*slot)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (slot->is_object()) throw ConfigError("--set " + key + ": cannot replace a whole section");
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  assign_checked(*slot, value, key);
}

template <class T>
T get(const json& j, const char* section, const char* key) {
  return j.at(section).at(key).get<T>();
}

void require(bool cond, const std::string& key, const std::string& what) {
  if (!cond) throw ConfigError("config key '" + key + "': " + what);
}

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

RunConfig from_json(const json& j, const fs::path& base_dir) {
  RunConfig c;
  const auto& s = j.at("scenario");
  c.scenario.name = s.at("name").get<std::string>();
  require(c.scenario.name == "fig1" || c.scenario.name == "fig2" || c.scenario.name == "custom",
          "scenario.name", "unknown scenario '" + c.scenario.name + "' (expected fig1, fig2 or custom)");
  c.scenario.if_mod_scale = s.at("if_mod_scale").get<double>();
  require(c.scenario.if_mod_scale >= 0, "scenario.if_mod_scale", "must be >= 0");
  const auto& cu = s.at("custom");
  auto& p = c.scenario.custom;
  p.amplitude = cu.at("amplitude").get<double>();
  p.if_hz = cu.at("if_hz").get<double>();
  p.if_mod_depth_hz = cu.at("if_mod_depth_hz").get<double>();
  p.if_mod_rate_hz = cu.at("if_mod_rate_hz").get<double>();
  p.isr_hz = cu.at("isr_hz").get<double>();
  p.isr_mod_depth_hz = cu.at("isr_mod_depth_hz").get<double>();
  p.isr_mod_rate_hz = cu.at("isr_mod_rate_hz").get<double>();
  p.duration_s = cu.at("duration_s").get<double>();
  p.resample_hz = cu.at("resample_hz").get<double>();
  if (c.scenario.name == "custom") {
    try {
      custom_scenario(p);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config section 'scenario.custom': ") + e.what());
    }
  }

  c.input.signal_csv = resolve(base_dir, get<std::string>(j, "input", "signal_csv"));
  c.input.sample_times_csv = resolve(base_dir, get<std::string>(j, "input", "sample_times_csv"));

  c.interpolation.scheme = get<std::string>(j, "interpolation", "scheme");
  require(c.interpolation.scheme == "spline" || c.interpolation.scheme == "pchip", "interpolation.scheme",
          "expected spline or pchip, got '" + c.interpolation.scheme + "'");
  c.interpolation.order = get<int>(j, "interpolation", "order");
  require(c.interpolation.order >= 1 && c.interpolation.order <= 31, "interpolation.order", "must be in [1, 31]");

  auto& tf = c.analysis.tf;
  try {
    tf.method = parse_tf_method(get<std::string>(j, "analysis", "method"));
    tf.family = parse_window_family(get<std::string>(j, "analysis", "window"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config section 'analysis': ") + e.what());
  }
  tf.window_s = get<double>(j, "analysis", "window_s");
  require(tf.window_s > 0, "analysis.window_s", "must be positive");
  const auto hop = get<long long>(j, "analysis", "hop");
  const auto nfft = get<long long>(j, "analysis", "nfft");
  require(hop >= 0, "analysis.hop", "must be >= 0 (0 selects the default)");
  require(nfft >= 0, "analysis.nfft", "must be >= 0 (0 selects the default)");
  tf.hop = static_cast<std::size_t>(hop);
  tf.nfft = static_cast<std::size_t>(nfft);
  tf.tapers = get<int>(j, "analysis", "tapers");
  require(tf.tapers >= 1 && tf.tapers <= 10, "analysis.tapers", "must be in [1, 10]");
  const bool multi = tf.method == TfMethod::mt_sst || tf.method == TfMethod::mt_rm;
  require(!multi || tf.tapers >= 2, "analysis.tapers", "multitaper methods need at least 2 tapers");
  tf.threshold = get<double>(j, "analysis", "threshold");
  require(tf.threshold >= 0 && tf.threshold < 1, "analysis.threshold", "must be in [0, 1)");
  c.analysis.max_freq_hz = get<double>(j, "analysis", "max_freq_hz");
  require(c.analysis.max_freq_hz >= 0, "analysis.max_freq_hz", "must be >= 0");
  c.analysis.ridge_penalty = get<double>(j, "analysis", "ridge_penalty");
  require(c.analysis.ridge_penalty >= 0, "analysis.ridge_penalty", "must be >= 0");

  c.mitigation.hard_threshold = get<bool>(j, "mitigation", "hard_threshold");
  c.mitigation.lowpass = get<bool>(j, "mitigation", "lowpass");
  c.mitigation.cutoff_hz = get<double>(j, "mitigation", "cutoff_hz");
  c.mitigation.transition_hz = get<double>(j, "mitigation", "transition_hz");
  require(c.mitigation.cutoff_hz > 0, "mitigation.cutoff_hz", "must be positive");
  require(c.mitigation.transition_hz > 0, "mitigation.transition_hz", "must be positive");

  c.predict.k_max = get<int>(j, "predict", "k_max");
  require(c.predict.k_max >= 0 && c.predict.k_max <= 64, "predict.k_max", "must be in [0, 64]");

  auto& ph = c.physio;
  ph.rpeaks_csv = resolve(base_dir, get<std::string>(j, "physio", "rpeaks_csv"));
  ph.ihr_hz = get<double>(j, "physio", "ihr_hz");
  ph.resp_hz = get<double>(j, "physio", "resp_hz");
  ph.duration_s = get<double>(j, "physio", "duration_s");
  ph.depth = get<double>(j, "physio", "depth");
  ph.signal = get<std::string>(j, "physio", "signal");
  ph.rate_hz = get<double>(j, "physio", "rate_hz");
  require(ph.ihr_hz > 0, "physio.ihr_hz", "must be positive");
  require(ph.resp_hz >= 0, "physio.resp_hz", "must be >= 0");
  require(ph.duration_s > 0, "physio.duration_s", "must be positive");
  require(ph.signal == "edr" || ph.signal == "ihr", "physio.signal", "expected edr or ihr, got '" + ph.signal + "'");
  require(ph.rate_hz > 0, "physio.rate_hz", "must be positive");

  c.output.directory = get<std::string>(j, "output", "directory");
  c.output.formats = j.at("output").at("formats").get<std::vector<std::string>>();
  for (const auto& f : c.output.formats)
    require(f == "csv" || f == "tfr1" || f == "pgm", "output.formats", "unknown format '" + f + "' (expected csv, tfr1, pgm)");

  c.threads = j.at("threads").get<int>();
  require(c.threads >= 0, "threads", "must be >= 0 (0 uses the OpenMP default)");
  return c;
}

}  // namespace

std::string default_config_json() { return to_json(RunConfig{}).dump(2) + "\n"; }

std::string config_to_json(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

RunConfig parse_config(std::string_view text, const fs::path& base_dir, std::span<const std::string> overrides) {
  json merged = to_json(RunConfig{});
  json user;
  try {
    user = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  merge(merged, user, "");
  for (const auto& o : overrides) apply_override(merged, o);
  return from_json(merged, base_dir);
}

RunConfig load_config(const fs::path& path, std::span<const std::string> overrides) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  try {
    return parse_config(text, path.parent_path(), overrides);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Shared pipeline pieces

namespace {

Exec exec_of(const RunConfig& c) { return Exec{c.threads}; }

bool wants(const RunConfig& c, const char* format) {
  return std::find(c.output.formats.begin(), c.output.formats.end(), format) != c.output.formats.end();
}

Metadata base_meta(const char* command) {
  return {{"tool", "nyqmirror"}, {"version", NYQ_VERSION}, {"command", command}};
}

Metadata analysis_meta(const TfRepresentation& tfr, const RunConfig& c) {
  return {{"method", to_string(tfr.method)},
          {"window", to_string(tfr.window.family)},
          {"window_s", format_double(tfr.window.duration_s)},
          {"hop", std::to_string(tfr.window.hop)},
          {"nfft", std::to_string(tfr.window.nfft)},
          {"tapers", std::to_string(tfr.window.tapers)},
          {"threshold", format_double(tfr.window.threshold)},
          {"max_freq_hz", format_double(c.analysis.max_freq_hz)},
          {"hard_threshold", c.mitigation.hard_threshold ? "true" : "false"},
          {"lowpass", c.mitigation.lowpass ? "true" : "false"}};
}

Metadata join(Metadata a, const Metadata& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

class OutputDir {
 public:
  explicit OutputDir(const fs::path& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw DataError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }
  void write(const std::string& name, std::string_view bytes) {
    try {
      write_atomic(dir_ / name, bytes);
    } catch (const std::runtime_error& e) {
      throw DataError(e.what());
    }
    files_.push_back(dir_ / name);
  }
  const std::vector<fs::path>& files() const { return files_; }
  std::vector<fs::path> finish(const std::string& command, const RunConfig& c, json extra = json::object()) {
    json run = {{"tool", "nyqmirror"}, {"version", NYQ_VERSION}, {"command", command}, {"config", to_json(c)}};
    for (auto& [k, v] : extra.items()) run[k] = v;
    json names = json::array();
    for (const auto& f : files_) names.push_back(f.filename().string());
    names.push_back("run.json");
    run["files"] = names;
    write("run.json", run.dump(2) + "\n");
    return files_;
  }

 private:
  fs::path dir_;
  std::vector<fs::path> files_;
};

struct Simulation {
  Scenario scenario;
  std::optional<SampleSet> samples;
  std::shared_ptr<const Interpolant> interpolant;
  UniformSignal uniform;
};

std::shared_ptr<const Interpolant> make_interpolant(const SampleSet& samples, const RunConfig& c) {
  if (c.interpolation.scheme == "pchip") return std::make_shared<PchipInterpolant>(interpolate_pchip(samples));
  return std::make_shared<SplineInterpolant>(interpolate_nonuniform(samples, c.interpolation.order));
}

UniformSignal maybe_lowpass(UniformSignal sig, const RunConfig& c) {
  if (!c.mitigation.lowpass) return sig;
  try {
    return lowpass_prefilter(sig, c.mitigation.cutoff_hz, c.mitigation.transition_hz, exec_of(c));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("mitigation.lowpass: ") + e.what());
  }
}

Simulation simulate(const RunConfig& c) {
  Simulation s{make_scenario(c.scenario), std::nullopt, nullptr, {}};
  s.samples = sample_signal(s.scenario.signal, s.scenario.scheme, 0.0, s.scenario.duration_s);
  s.interpolant = make_interpolant(*s.samples, c);
  const auto [t0, t1] = s.interpolant->domain();
  s.uniform = maybe_lowpass(resample_uniform(*s.interpolant, s.scenario.resample_hz, t0, t1, exec_of(c)), c);
  return s;
}

std::string matrix_csv(const Metadata& meta, const std::vector<double>& freq, const std::vector<double>& time,
                       const std::vector<double>& values) {
  CsvWriter w(meta);
  std::vector<std::string> cols{"freq_hz"};
  for (double t : time) cols.push_back(format_double(t));
  w.header(cols);
  std::vector<double> row(time.size() + 1);
  for (std::size_t b = 0; b < freq.size(); ++b) {
    row[0] = freq[b];
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(b * time.size()), time.size(), row.begin() + 1);
    w.row(row);
  }
  return w.str();
}

// Curves needed to place the INF on the TF plane; absent for bare signal input.
struct RateCurves {
  TimeFn isr;
  TimeFn inf;
};

json write_tf_outputs(OutputDir& out, const RunConfig& c, const UniformSignal& sig,
                      const std::optional<RateCurves>& rates, Metadata meta) {
  TfRepresentation tfr;
  try {
    tfr = analyze(sig, c.analysis.tf, exec_of(c));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("analysis failed: ") + e.what());
  }
  if (c.analysis.max_freq_hz > 0) tfr = crop_frequency(tfr, c.analysis.max_freq_hz);
  if (c.mitigation.hard_threshold) {
    if (!rates) throw ConfigError("mitigation.hard_threshold needs an INF curve (scenario or input.sample_times_csv)");
    tfr = inf_hard_threshold(tfr, rates->inf).tfr;
  }
  meta = join(std::move(meta), analysis_meta(tfr, c));

  json summary = {{"bins", tfr.bins()}, {"frames", tfr.frames()}, {"bin_width_hz", tfr.bin_width()}};
  if (rates) summary["above_inf_energy_ratio"] = above_inf_energy_ratio(tfr, rates->inf);

  if (wants(c, "tfr1")) {
    out.write("tfr.bin", encode_tfr1(tfr));
    json side = json::object();
    for (const auto& [k, v] : meta) side[k] = v;
    side["layout"] = "TFR1 u64le bins, u64le frames, f64le freq_axis[bins], time_axis[frames], magnitude[bins*frames] row-major";
    out.write("tfr.bin.json", side.dump(2) + "\n");
  }
  const auto display = log_display(tfr);
  if (wants(c, "csv")) {
    out.write("tfr.csv", matrix_csv(join(meta, {{"quantity", "magnitude"}}), tfr.freq_axis, tfr.time_axis, tfr.magnitudes()));
    out.write("display.csv", matrix_csv(join(meta, {{"quantity", "log_display"}, {"q", format_double(display.quantile_q)}}),
                                        tfr.freq_axis, tfr.time_axis, display.values));
  }
  if (wants(c, "pgm")) out.write("display.pgm", encode_pgm(display, meta));

  const double penalty = c.analysis.ridge_penalty * [&] {
    double m = 0;
    for (double v : tfr.magnitudes()) m = std::max(m, v);
    return m;
  }();
  if (rates) {
    CsvWriter overlay(meta);
    overlay.header({"t_s", "inf_hz", "isr_hz"});
    for (double t : tfr.time_axis) overlay.row({t, rates->inf(t), rates->isr(t)});
    out.write("inf_overlay.csv", overlay.str());

    const auto base = ridge_extract_between(tfr, [](double) { return 0.0; },
                                            [&](double t) { return std::nextafter(rates->inf(t), 1e300); }, penalty);
    const auto reflected = ridge_extract_between(tfr, rates->inf, rates->isr, penalty);
    CsvWriter ridges(meta);
    ridges.header({"t_s", "base_hz", "reflected_hz"});
    for (std::size_t j = 0; j < tfr.frames(); ++j) ridges.row({tfr.time_axis[j], base[j], reflected[j]});
    out.write("ridges.csv", ridges.str());
  } else {
    const auto ridge = ridge_extract(tfr, tfr.freq_axis.front(), tfr.freq_axis.back(), penalty);
    CsvWriter ridges(meta);
    ridges.header({"t_s", "ridge_hz"});
    for (std::size_t j = 0; j < tfr.frames(); ++j) ridges.row({tfr.time_axis[j], ridge[j]});
    out.write("ridges.csv", ridges.str());
  }
  return summary;
}

Metadata scenario_meta(const RunConfig& c) {
  Metadata m{{"scenario", c.scenario.name},
             {"interpolation", c.interpolation.scheme}};
  if (c.interpolation.scheme == "spline") m.emplace_back("order", std::to_string(c.interpolation.order));
  if (c.scenario.name == "fig2") m.emplace_back("if_mod_scale", format_double(c.scenario.if_mod_scale));
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Commands

std::vector<fs::path> cmd_simulate(const RunConfig& c) {
  const auto sim = simulate(c);
  const auto meta = join(base_meta("simulate"), scenario_meta(c));
  OutputDir out(c.output.directory);

  CsvWriter samples(meta);
  samples.header({"t_s", "value"});
  for (std::size_t i = 0; i < sim.samples->size(); ++i) samples.row({sim.samples->times()[i], sim.samples->values()[i]});
  out.write("samples.csv", samples.str());

  CsvWriter uniform(join(meta, {{"rate_hz", format_double(sim.uniform.rate)}, {"lowpass", c.mitigation.lowpass ? "true" : "false"}}));
  uniform.header({"t_s", "value"});
  for (std::size_t i = 0; i < sim.uniform.size(); ++i) uniform.row({sim.uniform.time(i), sim.uniform.values[i]});
  out.write("interpolated.csv", uniform.str());

  const auto& sc = sim.scenario;
  CsvWriter truth(meta);
  truth.header({"t_s", "amplitude", "if_hz", "isr_hz", "inf_hz", "reflected_if_hz"});
  for (std::size_t i = 0; i < sim.uniform.size(); ++i) {
    const double t = sim.uniform.time(i);
    truth.row({t, sc.signal.am(t), sc.signal.iff(t), sc.scheme.rate(t), sc.scheme.nyquist(t),
               sc.scheme.rate(t) - sc.signal.iff(t)});
  }
  out.write("truth_curves.csv", truth.str());

  if (const auto* spline = dynamic_cast<const SplineInterpolant*>(sim.interpolant.get())) {
    CsvWriter dump(join(meta, {{"kind", "bspline"}, {"coefficients", std::to_string(spline->coefficients().size())}}));
    dump.header({"knot", "coefficient"});
    for (std::size_t i = 0; i < spline->knots().size(); ++i)
      dump.row({spline->knots()[i], i < spline->coefficients().size() ? spline->coefficients()[i] : 0.0});
    out.write("interpolant.csv", dump.str());
  } else {
    const auto& pchip = dynamic_cast<const PchipInterpolant&>(*sim.interpolant);
    CsvWriter dump(join(meta, {{"kind", "pchip"}}));
    dump.header({"t_s", "value", "slope"});
    for (std::size_t i = 0; i < pchip.times().size(); ++i) dump.row({pchip.times()[i], pchip.values()[i], pchip.slopes()[i]});
    out.write("interpolant.csv", dump.str());
  }
  return out.finish("simulate", c, {{"samples", sim.samples->size()}, {"uniform_samples", sim.uniform.size()}});
}

std::vector<fs::path> cmd_tfr(const RunConfig& c) {
  OutputDir out(c.output.directory);
  Metadata meta = base_meta("tfr");
  std::optional<RateCurves> rates;
  UniformSignal sig;
  if (!c.input.signal_csv.empty()) {
    try {
      sig = maybe_lowpass(read_uniform_csv(read_file(c.input.signal_csv)), c);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw DataError(c.input.signal_csv.string() + ": " + e.what());
    }
    meta.emplace_back("input", c.input.signal_csv.filename().string());
    if (!c.input.sample_times_csv.empty()) {
      try {
        const auto isr = estimate_isr(read_first_column(read_file(c.input.sample_times_csv)));
        rates = RateCurves{isr.isr_clamped(), isr.inf_clamped()};
      } catch (const std::exception& e) {
        throw DataError(c.input.sample_times_csv.string() + ": " + e.what());
      }
    }
  } else {
    const auto sim = simulate(c);
    sig = sim.uniform;
    rates = RateCurves{sim.scenario.scheme.rate_fn(), sim.scenario.scheme.nyquist_fn()};
    meta = join(std::move(meta), scenario_meta(c));
  }
  const auto summary = write_tf_outputs(out, c, sig, rates, meta);
  return out.finish("tfr", c, {{"tfr", summary}});
}

std::vector<fs::path> cmd_predict(const RunConfig& c) {
  const auto sc = make_scenario(c.scenario);
  if (c.interpolation.scheme != "spline")
    throw ConfigError("config key 'interpolation.scheme': predict needs a spline (the series is stated for B-splines)");
  const int n = c.interpolation.order;
  const auto grid = linspace_step(0.0, sc.duration_s, 1.0 / sc.resample_hz);
  const auto prediction = predict_components(sc.signal, sc.scheme, n, -c.predict.k_max, c.predict.k_max, grid);
  const auto meta = join(base_meta("predict"), join(scenario_meta(c), {{"k_max", std::to_string(c.predict.k_max)}}));
  OutputDir out(c.output.directory);

  CsvWriter summary(meta);
  summary.header({"k", "peak_amplitude"});
  for (const auto& comp : prediction.components) summary.row({static_cast<double>(comp.k), comp.peak_magnitude});
  out.write("component_summary.csv", summary.str());

  CsvWriter curves(meta);
  curves.header({"k", "t_s", "if_hz", "amplitude"});
  auto by_k = prediction.components;
  std::sort(by_k.begin(), by_k.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
  for (const auto& comp : by_k)
    for (double t : grid) curves.row({static_cast<double>(comp.k), t, comp.if_curve(t), comp.amp_curve(t)});
  out.write("components.csv", curves.str());

  const auto r = verify_reflection_theorem(sc.signal, sc.scheme, n, c.predict.k_max, sc.resample_hz, 0.0,
                                           sc.duration_s, exec_of(c));
  CsvWriter report(meta);
  report.header({"residual", "trim_s", "interior_start_s", "interior_end_s", "samples", "measured_eps",
                 "inr_min_margin_hz", "inr_t_at_min_s", "inr_warning"});
  report.row({r.residual, r.trim_s, r.interior_start, r.interior_end, static_cast<double>(r.samples), r.measured_eps,
              prediction.inr.min_margin_hz, prediction.inr.t_at_min, prediction.inr.warning ? 1.0 : 0.0});
  out.write("residual_report.csv", report.str());
  return out.finish("predict", c, {{"residual", r.residual}, {"inr_warning", prediction.inr.warning}});
}

std::vector<fs::path> cmd_physio(const RunConfig& c) {
  const auto& ph = c.physio;
  RPeakRecord rec;
  Metadata meta = base_meta("physio");
  if (!ph.rpeaks_csv.empty()) {
    std::string text;
    try {
      text = read_file(ph.rpeaks_csv);
    } catch (const std::runtime_error& e) {
      throw DataError(e.what());
    }
    try {
      rec = parse_rpeaks(text);
    } catch (const ParseError& e) {
      throw DataError(ph.rpeaks_csv.string() + ": " + e.what());
    }
    meta.emplace_back("rpeaks", ph.rpeaks_csv.filename().string());
  } else {
    const double ihr = ph.ihr_hz, resp = ph.resp_hz;
    rec = synth_rpeaks([ihr](double) { return ihr; }, [resp](double) { return resp; }, ph.duration_s, ph.depth);
    meta.insert(meta.end(), {{"rpeaks", "synthetic"},
                             {"ihr_hz", format_double(ihr)},
                             {"resp_hz", format_double(resp)},
                             {"depth", format_double(ph.depth)}});
  }
  meta.emplace_back("signal", ph.signal);

  UniformSignal sig;
  try {
    if (ph.signal == "ihr") {
      sig = ihr_signal(rec, ph.rate_hz, exec_of(c));
      meta.emplace_back("interpolation", "spline");
      meta.emplace_back("order", "3");
    } else {
      EdrInterpolation scheme;
      if (c.interpolation.scheme == "pchip")
        scheme.scheme = EdrScheme::pchip;
      else if (c.interpolation.order != 3)
        scheme = {EdrScheme::order_n, c.interpolation.order};
      sig = edr_signal(rec, ph.rate_hz, scheme, exec_of(c));
      meta.emplace_back("interpolation", c.interpolation.scheme);
      if (c.interpolation.scheme == "spline") meta.emplace_back("order", std::to_string(c.interpolation.order));
    }
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  sig = maybe_lowpass(std::move(sig), c);

  std::optional<IsrEstimate> isr;
  try {
    isr = estimate_isr(rec.times);
  } catch (const std::exception& e) {
    throw DataError(std::string("ISR estimate: ") + e.what());
  }

  OutputDir out(c.output.directory);
  CsvWriter peaks(meta);
  if (rec.amplitudes) {
    peaks.header({"time_s", "amplitude"});
    for (std::size_t i = 0; i < rec.size(); ++i) peaks.row({rec.times[i], (*rec.amplitudes)[i]});
  } else {
    peaks.header({"time_s"});
    for (double t : rec.times) peaks.row({t});
  }
  out.write("rpeaks.csv", peaks.str());

  CsvWriter signal(join(meta, {{"rate_hz", format_double(sig.rate)}}));
  signal.header({"t_s", "value"});
  for (std::size_t i = 0; i < sig.size(); ++i) signal.row({sig.time(i), sig.values[i]});
  out.write("signal.csv", signal.str());

  CsvWriter rate(meta);
  rate.header({"t_s", "isr_hz", "inf_hz"});
  const auto isr_fn = isr->isr_clamped(), inf_fn = isr->inf_clamped();
  for (std::size_t i = 0; i < sig.size(); ++i) rate.row({sig.time(i), isr_fn(sig.time(i)), inf_fn(sig.time(i))});
  out.write("isr_estimate.csv", rate.str());

  const auto summary = write_tf_outputs(out, c, sig, RateCurves{isr_fn, inf_fn}, meta);
  return out.finish("physio", c, {{"peaks", rec.size()}, {"tfr", summary}});
}

// ---------------------------------------------------------------------------
// Entry point

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-uniform sampling, spline interpolation and reflection artifacts in TF analysis", "nyqmirror"};
  app.set_version_flag("--version", NYQ_VERSION);
  app.require_subcommand(1, 1);

  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "Sample a scenario, interpolate and resample it"},
      {"tfr", "TF representation, INF overlay and ridges of a scenario or signal CSV"},
      {"predict", "Predicted reflection components and the residual against the pipeline"},
      {"physio", "EDR or IHR from R peaks (synthetic or CSV) and its TF analysis"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides output.directory)");
    sub->add_option("--set", overrides, "Override a config key: dotted.key=value")->take_all();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig config = load_config(config_path, overrides);
    if (!out_dir.empty()) config.output.directory = out_dir;
    std::vector<fs::path> files;
    if (command == "simulate")
      files = cmd_simulate(config);
    else if (command == "tfr")
      files = cmd_tfr(config);
    else if (command == "predict")
      files = cmd_predict(config);
    else
      files = cmd_physio(config);
    for (const auto& f : files) out << f.string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    err << "nyqmirror " << command << ": config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "nyqmirror " << command << ": error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace nyq
