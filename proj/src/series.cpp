// Copyright 2026 The kerrmet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kerrmet/series.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kerrmet::series {

namespace {

constexpr int kTableCutoff = 256;
constexpr long double kTwoPi = 6.283185307179586476925286766559005768L;
constexpr long double kHalfLogTwoPi =
    0.918938533204672741780329736405617639L;
// Dekker splitting constant for 64-bit significands: 2^32 + 1.
constexpr long double kSplit = 4294967297.0L;
// Integer factors up to 2^31 keep the split products exact.
constexpr long double kMaxExactFactor = 2147483648.0L;

// Near phi = pi the series alternates and the sum is e^{2x} times smaller
// than its largest term, so term magnitudes and angles are produced with
// an extra compensation word; plain double terms would cap the result at
// roughly 1e-7 relative accuracy for x = 10.

struct CompensatedSum {
  long double sum = 0.0L;
  long double comp = 0.0L;

  void add(long double term) {
    const long double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }

  long double result() const { return sum + comp; }
};

void two_sum(long double a, long double b, long double& s, long double& e) {
  s = a + b;
  const long double bv = s - a;
  e = (a - (s - bv)) + (b - bv);
}

// Exact product f * x = hi + lo for an integer-valued f <= 2^31, given the
// Dekker split (x_a, x_b) of x.
void split(long double x, long double& x_a, long double& x_b) {
  const long double t = kSplit * x;
  x_a = t - (t - x);
  x_b = x - x_a;
}

long double product_low(long double f, long double x_a, long double x_b,
                        long double hi) {
  return (f * x_a - hi) + f * x_b;
}

struct LogFactorialTable {
  std::array<long double, kTableCutoff + 1> hi{};
  std::array<long double, kTableCutoff + 1> lo{};
};

const LogFactorialTable& log_factorial_table() {
  static const LogFactorialTable table = [] {
    LogFactorialTable t;
    long double acc_hi = 0.0L;
    long double acc_lo = 0.0L;
    for (int n = 1; n <= kTableCutoff; ++n) {
      long double s;
      long double e;
      two_sum(acc_hi, std::log(static_cast<long double>(n)), s, e);
      acc_hi = s;
      acc_lo += e;
      t.hi[static_cast<std::size_t>(n)] = acc_hi;
      t.lo[static_cast<std::size_t>(n)] = acc_lo;
    }
    return t;
  }();
  return table;
}

// ln(n!) as a hi/lo pair; Stirling above the table cutoff, where the
// low word no longer matters for any representable term.
void log_factorial_pair(int n, long double& hi, long double& lo) {
  if (n <= kTableCutoff) {
    hi = log_factorial_table().hi[static_cast<std::size_t>(n)];
    lo = log_factorial_table().lo[static_cast<std::size_t>(n)];
    return;
  }
  const long double dn = static_cast<long double>(n);
  const long double inv = 1.0L / dn;
  const long double inv2 = inv * inv;
  hi = (dn + 0.5L) * std::log(dn) - dn + kHalfLogTwoPi +
       inv * (1.0L / 12.0L - inv2 * (1.0L / 360.0L - inv2 / 1260.0L));
  lo = 0.0L;
}

void validate_params(const SeriesParams& params) {
  if (!(params.amplitude >= 0.0) || !std::isfinite(params.amplitude)) {
    throw std::invalid_argument("series amplitude must be finite and >= 0");
  }
  if (params.order != 1 && params.order != 2) {
    throw std::invalid_argument("unsupported nonlinearity order " +
                                std::to_string(params.order) +
                                " (only k = 1 and k = 2)");
  }
  if (!std::isfinite(params.phase)) {
    throw std::invalid_argument("series phase must be finite");
  }
}

// Poisson(x) mass above m, summed ascending until the terms stop
// mattering at the tolerance scale.
double poisson_tail_mass(double x, int m, double tolerance) {
  if (x <= 0.0) return 0.0;
  const double lx = std::log(x);
  double tail = 0.0;
  for (int n = m + 1; n <= m + 20000; ++n) {
    const double term = std::exp(n * lx - x - log_factorial(n));
    tail += term;
    if (term < tolerance * 1e-8) break;
  }
  return tail;
}

}  // namespace

double log_factorial(int n) {
  if (n < 0) {
    throw std::invalid_argument("log_factorial requires n >= 0");
  }
  long double hi;
  long double lo;
  log_factorial_pair(n, hi, lo);
  return static_cast<double>(hi + lo);
}

int truncation_bound(double mean_photons, const TruncationPolicy& policy) {
  if (!std::isfinite(mean_photons) || mean_photons < 0.0) {
    throw std::invalid_argument("mean photon number must be finite and >= 0");
  }
  if (policy.floor_terms < 1) {
    throw std::invalid_argument("truncation floor_terms must be positive");
  }
  if (!(policy.multiplier >= 5.0)) {
    throw std::invalid_argument("truncation multiplier must be >= 5");
  }
  if (!(policy.tail_tolerance > 0.0) || policy.tail_tolerance > 1e-6) {
    throw std::invalid_argument("tail_tolerance must lie in (0, 1e-6]");
  }
  int bound = std::max(
      static_cast<int>(std::ceil(policy.multiplier * mean_photons)),
      policy.floor_terms);
  while (poisson_tail_mass(mean_photons, bound, policy.tail_tolerance) >=
         policy.tail_tolerance) {
    ++bound;
  }
  return bound;
}

Evaluator::Evaluator(double amplitude, int order, int n_max) {
  validate_params({amplitude, order, 0.0});
  if (n_max < 1) {
    throw std::invalid_argument("series n_max must be positive");
  }
  magnitude_.resize(static_cast<std::size_t>(n_max) + 1);
  phase_weight_.resize(magnitude_.size());
  magnitude_[0] = 1.0L;
  phase_weight_[0] = 0.0L;

  const long double x = amplitude;
  const long double lx = amplitude > 0.0 ? std::log(x) : 0.0L;
  long double lx_a;
  long double lx_b;
  split(lx, lx_a, lx_b);

  for (int n = 1; n <= n_max; ++n) {
    const long double dn = static_cast<long double>(n);
    phase_weight_[static_cast<std::size_t>(n)] =
        order == 1 ? dn : dn * dn;
    if (amplitude <= 0.0) {
      magnitude_[static_cast<std::size_t>(n)] = 0.0L;
      continue;
    }
    // y = n ln x - ln n! carried as hi + lo so the term magnitude keeps
    // sub-ulp relative accuracy.
    const long double p_hi = dn * lx;
    const long double p_lo =
        dn <= kMaxExactFactor ? product_low(dn, lx_a, lx_b, p_hi) : 0.0L;
    long double lf_hi;
    long double lf_lo;
    log_factorial_pair(n, lf_hi, lf_lo);
    long double y_hi;
    long double y_err;
    two_sum(p_hi, -lf_hi, y_hi, y_err);
    const long double y_lo = y_err + (p_lo - lf_lo);
    magnitude_[static_cast<std::size_t>(n)] =
        std::exp(y_hi) * (1.0L + y_lo);
  }
}

std::complex<double> Evaluator::value(double phase) const {
  const long double phi = phase;
  long double phi_a;
  long double phi_b;
  split(phi, phi_a, phi_b);
  CompensatedSum re;
  CompensatedSum im;
  for (std::size_t n = 0; n < magnitude_.size(); ++n) {
    const long double m = magnitude_[n];
    if (m == 0.0L && n > 0) continue;
    const long double w = phase_weight_[n];
    const long double p_hi = w * phi;
    const long double p_lo =
        w <= kMaxExactFactor ? product_low(w, phi_a, phi_b, p_hi) : 0.0L;
    const long double theta = std::fmod(p_hi, kTwoPi);
    const long double c0 = std::cos(theta);
    const long double s0 = std::sin(theta);
    re.add(m * (c0 - p_lo * s0));
    im.add(m * (s0 + p_lo * c0));
  }
  return {static_cast<double>(re.result()), static_cast<double>(im.result())};
}

std::complex<double> Evaluator::derivative(double phase) const {
  std::complex<double> s;
  std::complex<double> ds;
  value_and_derivative(phase, s, ds);
  return ds;
}

void Evaluator::value_and_derivative(double phase, std::complex<double>& value,
                                     std::complex<double>& derivative) const {
  const long double phi = phase;
  long double phi_a;
  long double phi_b;
  split(phi, phi_a, phi_b);
  CompensatedSum re;
  CompensatedSum im;
  CompensatedSum dre;
  CompensatedSum dim;
  for (std::size_t n = 0; n < magnitude_.size(); ++n) {
    const long double m = magnitude_[n];
    if (m == 0.0L && n > 0) continue;
    const long double w = phase_weight_[n];
    const long double p_hi = w * phi;
    const long double p_lo =
        w <= kMaxExactFactor ? product_low(w, phi_a, phi_b, p_hi) : 0.0L;
    const long double theta = std::fmod(p_hi, kTwoPi);
    const long double c0 = std::cos(theta);
    const long double s0 = std::sin(theta);
    const long double c = c0 - p_lo * s0;
    const long double s = s0 + p_lo * c0;
    re.add(m * c);
    im.add(m * s);
    // i exp(i theta) = -sin + i cos
    dre.add(-m * w * s);
    dim.add(m * w * c);
  }
  value = {static_cast<double>(re.result()),
           static_cast<double>(im.result())};
  derivative = {static_cast<double>(dre.result()),
                static_cast<double>(dim.result())};
}

std::complex<double> eval_series(const SeriesParams& params, int n_max) {
  validate_params(params);
  return Evaluator(params.amplitude, params.order, n_max).value(params.phase);
}

std::complex<double> eval_series_derivative(const SeriesParams& params,
                                            int n_max) {
  validate_params(params);
  return Evaluator(params.amplitude, params.order, n_max)
      .derivative(params.phase);
}

}  // namespace kerrmet::series
