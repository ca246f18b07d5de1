#include "nyqmirror/spline_interp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <lapacke.h>

namespace nyq {

namespace {

constexpr int kMaxOrder = 31;

double domain_tolerance(double lo, double hi) {
  return 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
}

void check_order(int n, const char* who) {
  if (n < 1 || n > kMaxOrder) {
    std::ostringstream msg;
    msg << who << ": order " << n << " outside [1, " << kMaxOrder << "]";
    throw std::invalid_argument(msg.str());
  }
}

// Values of the order+1 B-splines that are nonzero on [knots[span], knots[span+1]),
// i.e. padded indices span-order .. span (de Boor / Piegl-Tiller BasisFuns).
void basis_functions(std::span<const double> knots, std::size_t span, int order, double x,
                     std::span<double> out) {
  std::array<double, kMaxOrder + 1> left{}, right{};
  out[0] = 1.0;
  for (int j = 1; j <= order; ++j) {
    left[j] = x - knots[span + 1 - j];
    right[j] = knots[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = out[r] / (right[r + 1] + left[j - r]);
      out[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out[j] = saved;
  }
}

double ipow(double x, int p) {
  double result = 1.0;
  while (p > 0) {
    if (p & 1) result *= x;
    x *= x;
    p >>= 1;
  }
  return result;
}

std::size_t find_span(std::span<const double> knots, int order, double x) {
  const auto it = std::upper_bound(knots.begin(), knots.end(), x);
  auto span = static_cast<std::ptrdiff_t>(it - knots.begin()) - 1;
  const auto lo = static_cast<std::ptrdiff_t>(order);
  const auto hi = static_cast<std::ptrdiff_t>(knots.size()) - order - 2;
  return static_cast<std::size_t>(std::clamp(span, lo, hi));
}

}  // namespace

// ---------------------------------------------------------------------------
// Basis functions and the kernel spectrum

double cardinal_bspline(int n, double x) {
  check_order(n, "cardinal_bspline");
  if (x <= 0.0 || x >= n + 1.0) return 0.0;
  double sum = 0.0, binom = 1.0, factorial = 1.0;
  for (int k = 1; k <= n; ++k) factorial *= k;
  for (int k = 0; k <= n + 1; ++k) {
    const double u = x - k;
    if (u > 0) sum += ((k % 2) ? -1.0 : 1.0) * binom * std::pow(u, n);
    binom = binom * (n + 1 - k) / (k + 1);
  }
  return sum / factorial;
}

double nonuniform_bspline(int n, std::size_t j, std::span<const double> knots, double x) {
  check_order(n, "nonuniform_bspline");
  if (j + n + 1 >= knots.size())
    throw std::invalid_argument("nonuniform_bspline: knot index out of range");
  for (std::size_t k = j + 1; k <= j + n + 1; ++k)
    if (!(knots[k] > knots[k - 1]))
      throw std::invalid_argument("nonuniform_bspline: repeated or decreasing knots at index " +
                                  std::to_string(k));
  if (x < knots[j] || x >= knots[j + n + 1]) return 0.0;

  std::array<double, kMaxOrder + 2> level{};
  for (int i = 0; i <= n; ++i) level[i] = (x >= knots[j + i] && x < knots[j + i + 1]) ? 1.0 : 0.0;
  for (int d = 1; d <= n; ++d) {
    for (int i = 0; i + d <= n; ++i) {
      const double t0 = knots[j + i], t1 = knots[j + i + 1];
      const double td = knots[j + i + d], td1 = knots[j + i + d + 1];
      level[i] = (x - t0) / (td - t0) * level[i] + (td1 - x) / (td1 - t1) * level[i + 1];
    }
  }
  return level[0];
}

double fundamental_spline_spectrum(int n, double xi, int l_max) {
  check_order(n, "fundamental_spline_spectrum");
  if (l_max < 1) throw std::invalid_argument("fundamental_spline_spectrum: l_max must be >= 1");
  if (xi == std::round(xi)) return xi == 0.0 ? 1.0 : 0.0;
  const int p = n + 1;
  // 1 / (1 + sum_{l != 0} s_l (xi / (xi - l))^p), summed smallest terms first.
  double tail = 0.0;
  for (int l = l_max; l >= 1; --l) {
    const double sign = (p % 2 == 1 && l % 2 == 1) ? -1.0 : 1.0;
    const double plus = ipow(xi / (xi - l), p);
    const double minus = ipow(xi / (xi + l), p);
    tail += sign * (plus + minus);
  }
  return 1.0 / (1.0 + tail);
}

KernelSpectrum::KernelSpectrum(int order, int l_max) : order_(order), l_max_(l_max) {
  check_order(order, "KernelSpectrum");
}

// ---------------------------------------------------------------------------
// Interpolant base

void Interpolant::check_domain(double t) const {
  const auto [lo, hi] = domain();
  const double tol = domain_tolerance(lo, hi);
  if (!(t >= lo - tol && t <= hi + tol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "interpolant evaluated at t=" << t << " outside [" << lo << ", " << hi << "]";
    throw DomainError(msg.str());
  }
}

void Interpolant::evaluate(std::span<const double> t, std::span<double> out, Exec exec) const {
  if (t.size() != out.size()) throw std::invalid_argument("Interpolant::evaluate: size mismatch");
  for (double x : t) check_domain(x);
  parallel_for(t.size(), exec, [&](std::size_t i) { out[i] = (*this)(t[i]); });
}

// ---------------------------------------------------------------------------
// Spline interpolant

SplineInterpolant::SplineInterpolant(int order, std::vector<double> knots,
                                     std::vector<double> coefficients, double t_first,
                                     double t_last)
    : order_(order), knots_(std::move(knots)), coefficients_(std::move(coefficients)),
      t_first_(t_first), t_last_(t_last) {
  check_order(order_, "SplineInterpolant");
  if (coefficients_.size() + order_ + 1 != knots_.size())
    throw std::invalid_argument("SplineInterpolant: need knots.size() == coefficients + order + 1");
  if (!(t_first_ < t_last_)) throw std::invalid_argument("SplineInterpolant: empty domain");
}

double SplineInterpolant::operator()(double t) const {
  check_domain(t);
  const double x = std::clamp(t, t_first_, t_last_);
  const int n = order_;
  const std::size_t mu = find_span(knots_, n, x);
  std::array<double, kMaxOrder + 1> d{};
  for (int r = 0; r <= n; ++r) d[r] = coefficients_[mu - n + r];
  for (int r = 1; r <= n; ++r) {
    for (int j = n; j >= r; --j) {
      const double k0 = knots_[j + mu - n];
      const double alpha = (x - k0) / (knots_[j + 1 + mu - r] - k0);
      d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j];
    }
  }
  return d[n];
}

namespace {

// Samples extended on both sides by reflecting the boundary spacings; once the
// data runs out the outermost spacing is repeated.
std::vector<double> mirrored_positions(std::span<const double> t, std::size_t pad) {
  const std::size_t m = t.size();
  std::vector<double> ext(m + 2 * pad);
  std::copy(t.begin(), t.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));
  for (std::size_t k = 1; k <= pad; ++k) {
    const double left_gap = k < m ? t[k] - t[k - 1] : t[m - 1] - t[m - 2];
    ext[pad - k] = ext[pad - k + 1] - left_gap;
    const double right_gap = k < m ? t[m - k] - t[m - k - 1] : t[1] - t[0];
    ext[pad + m - 1 + k] = ext[pad + m - 2 + k] + right_gap;
  }
  return ext;
}

std::string span_name(std::span<const double> t, std::size_t i) {
  std::ostringstream msg;
  msg.precision(12);
  const std::size_t a = i == 0 ? 0 : i - 1;
  const std::size_t b = std::min(a + 1, t.size() - 1);
  msg << "knot span [" << t[a] << ", " << t[b] << "] (samples " << a << ".." << b << ")";
  return msg.str();
}

}  // namespace

SplineInterpolant interpolate_nonuniform(const SampleSet& samples, int order) {
  check_order(order, "interpolate_nonuniform");
  const int n = order;
  const auto t = samples.times();
  const auto f = samples.values();
  const std::size_t m = samples.size();
  if (m < static_cast<std::size_t>(n) + 2)
    throw std::invalid_argument("interpolate_nonuniform: order " + std::to_string(n) + " needs at least " +
                                std::to_string(n + 2) + " samples, got " + std::to_string(m));

  // The data are extended by `reach` samples per side by odd reflection,
  // f(2 t_0 - t_k) = 2 f_0 - f_k, which keeps lines exact and the extension
  // C^1. One basis is centred on every extended sample; the truncation at
  // the far ends decays geometrically (rate below 0.9 for n <= 31) over the
  // 8 (n + 1) reflected samples before reaching the data.
  const std::size_t reach = std::min(m - 1, 8 * static_cast<std::size_t>(n + 1));
  // pad covers the reflected samples, the half-support of a centred basis and
  // a full order of evaluation headroom.
  const std::size_t pad = reach + static_cast<std::size_t>(n) + static_cast<std::size_t>(n + 1) / 2 + 2;
  const auto ext = mirrored_positions(t, pad);
  std::vector<double> knots;
  std::size_t first_basis = 0;  // padded index of the basis centred on ext[pad - reach]
  if (n % 2 == 1) {
    knots = ext;
    first_basis = pad - reach - static_cast<std::size_t>(n + 1) / 2;
  } else {
    knots.resize(ext.size() - 1);
    for (std::size_t i = 0; i + 1 < ext.size(); ++i) knots[i] = 0.5 * (ext[i] + ext[i + 1]);
    first_basis = pad - reach - static_cast<std::size_t>(n) / 2 - 1;
  }

  const std::size_t total = m + 2 * reach;
  std::vector<double> xs(ext.begin() + static_cast<std::ptrdiff_t>(pad - reach),
                         ext.begin() + static_cast<std::ptrdiff_t>(pad + m + reach));
  std::vector<double> rhs(total);
  for (std::size_t k = 0; k < total; ++k) {
    if (k < reach)
      rhs[k] = 2 * f[0] - f[reach - k];
    else if (k < reach + m)
      rhs[k] = f[k - reach];
    else
      rhs[k] = 2 * f[m - 1] - f[m - 1 - (k - reach - m + 1)];
  }
  auto sample_of_row = [&](std::size_t row) { return std::min(m - 1, row > reach ? row - reach : 0); };

  // Collocation matrix A(i, j) = N_j(x_i), banded, in LAPACK band storage.
  const int band = n / 2 + 1;
  const int kl = band, ku = band;
  const int ldab = 2 * kl + ku + 1;
  const int dim = static_cast<int>(total);
  std::vector<double> ab(static_cast<std::size_t>(ldab) * total, 0.0);
  auto at = [&](int i, int j) -> double& {
    return ab[static_cast<std::size_t>(kl + ku + i - j) + static_cast<std::size_t>(j) * ldab];
  };
  std::array<double, kMaxOrder + 1> values{};
  for (int i = 0; i < dim; ++i) {
    const double x = xs[static_cast<std::size_t>(i)];
    const std::size_t mu = find_span(knots, n, x);
    basis_functions(knots, mu, n, x, values);
    for (int r = 0; r <= n; ++r) {
      const auto padded = static_cast<std::ptrdiff_t>(mu) - n + r;
      const auto j = padded - static_cast<std::ptrdiff_t>(first_basis);
      if (j < 0 || j >= dim || values[static_cast<std::size_t>(r)] == 0.0) continue;
      if (std::abs(j - i) > band) throw std::logic_error("interpolate_nonuniform: basis outside band");
      at(i, static_cast<int>(j)) = values[static_cast<std::size_t>(r)];
    }
  }

  double anorm = 0.0;
  for (int j = 0; j < dim; ++j) {
    double col = 0.0;
    for (int i = std::max(0, j - ku); i <= std::min(dim - 1, j + kl); ++i) col += std::abs(at(i, j));
    anorm = std::max(anorm, col);
  }

  std::vector<lapack_int> ipiv(total);
  lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, dim, dim, kl, ku, ab.data(), ldab, ipiv.data());
  if (info > 0)
    throw InterpolationError("interpolate_nonuniform: singular collocation matrix at " +
                             span_name(t, sample_of_row(static_cast<std::size_t>(info - 1))));
  if (info < 0) throw std::logic_error("interpolate_nonuniform: dgbtrf argument error");

  double rcond = 0.0;
  info = LAPACKE_dgbcon(LAPACK_COL_MAJOR, '1', dim, kl, ku, ab.data(), ldab, ipiv.data(), anorm, &rcond);
  if (info != 0) throw std::logic_error("interpolate_nonuniform: dgbcon failed");
  if (rcond < 1e-12) {
    std::size_t worst = 0;
    double smallest = std::numeric_limits<double>::infinity();
    for (int k = 0; k < dim; ++k) {
      const double u = std::abs(ab[static_cast<std::size_t>(kl + ku) + static_cast<std::size_t>(k) * ldab]);
      if (u < smallest) { smallest = u; worst = static_cast<std::size_t>(k); }
    }
    std::ostringstream msg;
    msg << "interpolate_nonuniform: ill-conditioned collocation matrix (rcond " << rcond
        << ") near " << span_name(t, sample_of_row(worst));
    throw InterpolationError(msg.str());
  }

  info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', dim, kl, ku, 1, ab.data(), ldab, ipiv.data(),
                        rhs.data(), dim);
  if (info != 0) throw std::logic_error("interpolate_nonuniform: dgbtrs failed");

  std::vector<double> coefficients(knots.size() - static_cast<std::size_t>(n) - 1, 0.0);
  std::copy(rhs.begin(), rhs.end(), coefficients.begin() + static_cast<std::ptrdiff_t>(first_basis));
  return SplineInterpolant(n, std::move(knots), std::move(coefficients), t.front(), t.back());
}

// ---------------------------------------------------------------------------
// PCHIP

PchipInterpolant::PchipInterpolant(std::vector<double> times, std::vector<double> values,
                                   std::vector<double> slopes)
    : times_(std::move(times)), values_(std::move(values)), slopes_(std::move(slopes)) {
  if (times_.size() < 2 || times_.size() != values_.size() || times_.size() != slopes_.size())
    throw std::invalid_argument("PchipInterpolant: inconsistent arrays");
}

double PchipInterpolant::operator()(double t) const {
  check_domain(t);
  const double x = std::clamp(t, times_.front(), times_.back());
  auto it = std::upper_bound(times_.begin(), times_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - times_.begin());
  k = std::clamp<std::size_t>(k, 1, times_.size() - 1) - 1;
  const double h = times_[k + 1] - times_[k];
  const double s = (x - times_[k]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * values_[k] + h10 * h * slopes_[k] + h01 * values_[k + 1] + h11 * h * slopes_[k + 1];
}

namespace {

double pchip_end_slope(double h0, double h1, double d0, double d1) {
  double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (std::signbit(s) != std::signbit(d0) || s == 0.0 || d0 == 0.0) return 0.0;
  if (std::signbit(d0) != std::signbit(d1) && std::abs(s) > 3 * std::abs(d0)) return 3 * d0;
  return s;
}

}  // namespace

PchipInterpolant interpolate_pchip(const SampleSet& samples) {
  if (samples.size() < 3) throw std::invalid_argument("interpolate_pchip: need at least 3 samples");
  const auto t = samples.times();
  const auto y = samples.values();
  const std::size_t m = samples.size();
  std::vector<double> h(m - 1), delta(m - 1), slopes(m, 0.0);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    h[k] = t[k + 1] - t[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  for (std::size_t k = 1; k + 1 < m; ++k) {
    const double a = delta[k - 1], b = delta[k];
    if (a == 0.0 || b == 0.0 || std::signbit(a) != std::signbit(b)) continue;
    const double w1 = 2 * h[k] + h[k - 1], w2 = h[k] + 2 * h[k - 1];
    slopes[k] = (w1 + w2) / (w1 / a + w2 / b);
  }
  slopes[0] = pchip_end_slope(h[0], h[1], delta[0], delta[1]);
  slopes[m - 1] = pchip_end_slope(h[m - 2], h[m - 3], delta[m - 2], delta[m - 3]);
  return PchipInterpolant(std::vector<double>(t.begin(), t.end()),
                          std::vector<double>(y.begin(), y.end()), std::move(slopes));
}

// ---------------------------------------------------------------------------
// Uniform resampling

std::size_t uniform_count(double rate_hz, double t_start, double t_end) {
  if (!(rate_hz > 0)) throw std::invalid_argument("uniform_count: rate must be positive");
  if (!(t_end >= t_start)) throw std::invalid_argument("uniform_count: t_end before t_start");
  return static_cast<std::size_t>(std::floor((t_end - t_start) * rate_hz + 1e-9)) + 1;
}

UniformSignal resample_uniform(const Interpolant& interp, double rate_hz, double t_start,
                               double t_end, Exec exec) {
  const auto [lo, hi] = interp.domain();
  const double tol = domain_tolerance(lo, hi);
  if (t_start < lo - tol || t_end > hi + tol) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "resample_uniform: span [" << t_start << ", " << t_end << "] outside interpolant domain ["
        << lo << ", " << hi << "]";
    throw DomainError(msg.str());
  }
  const std::size_t count = uniform_count(rate_hz, t_start, t_end);
  std::vector<double> times(count), values(count);
  for (std::size_t k = 0; k < count; ++k)
    times[k] = std::clamp(t_start + static_cast<double>(k) / rate_hz, lo, hi);
  interp.evaluate(times, values, exec);
  return UniformSignal(std::move(values), rate_hz, t_start);
}

}  // namespace nyq
