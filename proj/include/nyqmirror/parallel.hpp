#pragma once

#include <cstddef>
#include <utility>

#include <omp.h>

namespace nyq {

// Execution policy for the data-parallel kernels.
//
// threads == 1 selects the serial reference loop. Any other value runs the
// OpenMP loop (0 uses the OpenMP default team size). Every kernel writes each
// output element from exactly one iteration, so both paths produce
// bit-identical results.
struct Exec {
  int threads = 0;

  bool serial() const { return threads == 1; }
  int team_size() const { return threads > 0 ? threads : omp_get_max_threads(); }

  static Exec reference() { return Exec{1}; }
};

template <class F>
void parallel_for(std::size_t n, Exec exec, F&& body) {
  if (exec.serial()) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) num_threads(exec.team_size())
  for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

// Same as parallel_for, with one workspace object per thread created by
// make_state() and passed to body(state, i).
template <class MakeState, class F>
void parallel_for_with_state(std::size_t n, Exec exec, MakeState&& make_state, F&& body) {
  if (exec.serial()) {
    auto state = make_state();
    for (std::size_t i = 0; i < n; ++i) body(state, i);
    return;
  }
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel num_threads(exec.team_size())
  {
    auto state = make_state();
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) body(state, static_cast<std::size_t>(i));
  }
}

}  // namespace nyq
