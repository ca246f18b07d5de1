#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nyqmirror/parallel.hpp"
#include "nyqmirror/sampling.hpp"
#include "nyqmirror/uniform_signal.hpp"

namespace nyq {

inline constexpr int kDefaultSpectrumTerms = 4096;
inline constexpr int kHighOrderMitigation = 12;

// Cardinal B-spline of order n (degree n) supported on [0, n + 1], from the
// truncated-power sum. Exact for small n; cancellation grows with n.
double cardinal_bspline(int n, double x);

// B-spline N_{n,j} on knots[j .. j+n+1], by the Cox-de Boor recursion.
// Throws when those knots are not strictly increasing.
double nonuniform_bspline(int n, std::size_t j, std::span<const double> knots, double x);

// Fourier transform of the order-n fundamental cardinal spline,
//   eta_n(xi) = sinc(xi)^{n+1} / sum_{|l| <= l_max} sinc(xi - l)^{n+1}.
// The sin(pi xi) factors cancel, so it is evaluated as
//   xi^{-(n+1)} / sum_l (-1)^{l(n+1)} (xi - l)^{-(n+1)},
// which is exact at the integers. Truncation error is O(l_max^{-n}).
double fundamental_spline_spectrum(int n, double xi, int l_max = kDefaultSpectrumTerms);

class KernelSpectrum {
 public:
  explicit KernelSpectrum(int order, int l_max = kDefaultSpectrumTerms);
  double operator()(double xi) const { return fundamental_spline_spectrum(order_, xi, l_max_); }
  int order() const { return order_; }

 private:
  int order_;
  int l_max_;
};

class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class InterpolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Continuous reconstruction of a sample set. Evaluation outside domain()
// throws DomainError; there is no extrapolation.
class Interpolant {
 public:
  virtual ~Interpolant() = default;
  virtual double operator()(double t) const = 0;
  virtual std::pair<double, double> domain() const = 0;

  void evaluate(std::span<const double> t, std::span<double> out, Exec exec = {}) const;

 protected:
  void check_domain(double t) const;
};

// sum_j c_j N_{n,j}(t). knots() and coefficients() include the padding
// used for evaluation near the boundary (padding coefficients are zero).
class SplineInterpolant final : public Interpolant {
 public:
  SplineInterpolant(int order, std::vector<double> knots, std::vector<double> coefficients,
                    double t_first, double t_last);

  double operator()(double t) const override;
  std::pair<double, double> domain() const override { return {t_first_, t_last_}; }

  int order() const { return order_; }
  std::span<const double> knots() const { return knots_; }
  std::span<const double> coefficients() const { return coefficients_; }

 private:
  int order_;
  std::vector<double> knots_;
  std::vector<double> coefficients_;
  double t_first_;
  double t_last_;
};

// Order-n spline interpolation on the sample times. Basis functions are
// centred on the samples: knots sit on the samples for odd n and on the
// midpoints between samples for even n. Exterior knots mirror the boundary
// spacings and the data are continued onto them by odd reflection about the
// end samples, so constants and lines are reproduced exactly. The system is
// banded and solved by LU with partial pivoting; a reciprocal condition
// estimate below 1e-12 is an error.
SplineInterpolant interpolate_nonuniform(const SampleSet& samples, int order);

// Fritsch-Carlson monotone piecewise cubic Hermite interpolation.
class PchipInterpolant final : public Interpolant {
 public:
  PchipInterpolant(std::vector<double> times, std::vector<double> values,
                   std::vector<double> slopes);

  double operator()(double t) const override;
  std::pair<double, double> domain() const override { return {times_.front(), times_.back()}; }

  std::span<const double> times() const { return times_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> slopes() const { return slopes_; }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

PchipInterpolant interpolate_pchip(const SampleSet& samples);

// interp(t_start + k / rate) for k = 0 .. floor((t_end - t_start) rate).
UniformSignal resample_uniform(const Interpolant& interp, double rate_hz, double t_start,
                               double t_end, Exec exec = {});

std::size_t uniform_count(double rate_hz, double t_start, double t_end);

}  // namespace nyq
