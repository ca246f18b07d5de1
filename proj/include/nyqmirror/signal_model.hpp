#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace nyq {

using TimeFn = std::function<double(double)>;

// Bounds of the adaptive harmonic class: c1 <= a, phi' <= c2 and the
// AM / IF slopes bounded by eps * phi'.
struct ModelParams {
  double c1 = 0.5;
  double c2 = 10.0;
  double eps = 0.01;
};

// One intrinsic-mode-type component a(t) cos(2 pi phi(t)).
// The IF is carried explicitly so callers never differentiate the phase.
class ImtSignal {
 public:
  ImtSignal(TimeFn am, TimeFn phase, TimeFn iff, ModelParams params = {});

  double am(double t) const { return am_(t); }
  double phase(double t) const { return phase_(t); }
  double iff(double t) const { return iff_(t); }
  double evaluate(double t) const;

  const ModelParams& params() const { return params_; }
  ImtSignal with_params(ModelParams params) const;

 private:
  TimeFn am_;
  TimeFn phase_;
  TimeFn iff_;
  ModelParams params_;
};

double evaluate_imt(const ImtSignal& signal, double t);

// Constant-amplitude harmonic a cos(2 pi (f t + phase0)).
ImtSignal harmonic_signal(double amplitude, double freq_hz, double phase0 = 0.0,
                          ModelParams params = {});

enum class ImtCondition {
  amplitude_range,  // c1 <= a(t) <= c2
  frequency_range,  // c1 <= phi'(t) <= c2
  amplitude_slope,  // |a'(t)| <= eps phi'(t)
  frequency_slope,  // |phi''(t)| <= eps phi'(t)
};

const char* to_string(ImtCondition c);

struct ImtViolation {
  double t;
  ImtCondition condition;
  double value;  // measured quantity
  double bound;  // bound it exceeded (tolerance included)
};

struct ImtValidationReport {
  std::vector<ImtViolation> violations;
  bool passed() const { return violations.empty(); }
  std::size_t count(ImtCondition c) const;
};

// Checks the four class inequalities at every grid point. Derivatives are
// central differences with step = min grid spacing; each slope bound is
// widened by 10x the estimated truncation error.
ImtValidationReport validate_imt(const ImtSignal& signal, std::span<const double> grid);

}  // namespace nyq
