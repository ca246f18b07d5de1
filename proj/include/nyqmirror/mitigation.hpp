#pragma once

#include "nyqmirror/parallel.hpp"
#include "nyqmirror/signal_model.hpp"
#include "nyqmirror/tf_analysis.hpp"
#include "nyqmirror/uniform_signal.hpp"

namespace nyq {

// TF representation with every entry strictly above inf(t) set to zero.
struct MaskedTfr {
  TfRepresentation tfr;
  TimeFn inf_curve;
};

// Keeps entries with freq <= inf(t_j) (boundary kept) and zeroes the rest.
// Kept entries are copied bit for bit, so masking twice equals masking once.
MaskedTfr inf_hard_threshold(const TfRepresentation& tfr, const TimeFn& inf_curve);

struct LowpassDesign {
  std::vector<double> taps;  // symmetric, unit DC gain
  double beta = 0;           // Kaiser shape parameter
  double attenuation_db = 0;  // per pass
};

// Kaiser windowed-sinc lowpass with its band edge halfway through the transition.
LowpassDesign design_lowpass(double rate_hz, double cutoff_hz, double transition_hz,
                             double attenuation_db = 70.0);

// Zero-phase (forward-backward) FIR lowpass. Ends are padded by odd reflection.
// Needs cutoff + transition < rate / 2 and a signal longer than the padding.
// Not a cure for reflections of a non-band-limited signal: the artifacts are
// perturbed, not removed.
UniformSignal lowpass_prefilter(const UniformSignal& sig, double cutoff_hz, double transition_hz,
                                Exec exec = {});

}  // namespace nyq
