#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nyqmirror/scenarios.hpp"
#include "nyqmirror/tf_analysis.hpp"

namespace nyq {

// Exit status 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exit status 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ScenarioSpec scenario;

  struct Input {
    std::filesystem::path signal_csv;        // tfr: uniform (t, value) signal instead of a scenario
    std::filesystem::path sample_times_csv;  // tfr: sample times for the ISR/INF overlay
  } input;

  struct Interpolation {
    std::string scheme = "spline";  // spline | pchip
    int order = 3;
  } interpolation;

  struct Analysis {
    AnalysisConfig tf;
    double max_freq_hz = 8.0;     // 0 keeps the full one-sided band
    double ridge_penalty = 1e-4;  // per-bin jump cost, relative to max |R|
  } analysis;

  struct Mitigation {
    bool hard_threshold = false;
    bool lowpass = false;
    double cutoff_hz = 4.0;
    double transition_hz = 0.5;
  } mitigation;

  struct Predict {
    int k_max = 5;
  } predict;

  struct Physio {
    std::filesystem::path rpeaks_csv;  // empty: synthesize
    double ihr_hz = 1.4;
    double resp_hz = 0.5;
    double duration_s = 300.0;
    double depth = 0.2;
    std::string signal = "edr";  // edr | ihr
    double rate_hz = 8.0;
  } physio;

  struct Output {
    std::filesystem::path directory = "out";
    std::vector<std::string> formats{"csv", "tfr1", "pgm"};
  } output;

  int threads = 0;
};

// Parses JSON config text over the defaults. Unknown keys, wrong types and
// invalid values raise ConfigError naming the key. Overrides are
// "dotted.key=value" with a JSON value (bare words are taken as strings).
// Relative input paths resolve against base_dir.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                       std::span<const std::string> overrides = {});
RunConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides = {});

std::string default_config_json();
std::string config_to_json(const RunConfig& config);

std::vector<std::filesystem::path> cmd_simulate(const RunConfig& config);
std::vector<std::filesystem::path> cmd_tfr(const RunConfig& config);
std::vector<std::filesystem::path> cmd_predict(const RunConfig& config);
std::vector<std::filesystem::path> cmd_physio(const RunConfig& config);

// nyqmirror simulate|tfr|predict|physio --config <path> [--out <dir>] [--set key=value ...]
// Returns 0 on success, 1 on usage or config errors, 2 on data errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nyq
