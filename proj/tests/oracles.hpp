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
//
// Brute-force reference implementations used only by tests. They stay
// deliberately independent of the production code paths they check:
// extended precision, literal double sums, exact integer enumeration.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracles {

// ln(n!) accumulated in extended precision.
inline long double log_factorial_ld(int n) {
  long double acc = 0.0L;
  for (int i = 2; i <= n; ++i) acc += std::log(static_cast<long double>(i));
  return acc;
}

// Poisson(x) mass above m by direct term summation.
inline long double poisson_tail(long double x, int m) {
  if (x <= 0.0L) return 0.0L;
  long double sum = 0.0L;
  for (int n = m + 1; n <= m + 4000; ++n) {
    const long double term =
        std::exp(n * std::log(x) - x - log_factorial_ld(n));
    sum += term;
    if (term < 1e-30L * (sum + 1e-300L)) break;
  }
  return sum;
}

// sum_{n<=n_max} x^n exp(i n^k phi) / n! in extended precision.
inline std::complex<long double> series_reference(long double x, int k,
                                                  long double phi,
                                                  int n_max) {
  std::complex<long double> sum = 0.0L;
  long double log_term = 0.0L;  // ln(x^n / n!)
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) {
      if (x <= 0.0L) break;
      log_term += std::log(x) - std::log(static_cast<long double>(n));
    }
    const long double weight = k == 1 ? static_cast<long double>(n)
                                      : static_cast<long double>(n) *
                                            static_cast<long double>(n);
    const long double theta = weight * phi;
    sum += std::exp(log_term) *
           std::complex<long double>(std::cos(theta), std::sin(theta));
  }
  return sum;
}

// Literal double sum of the parity expectation,
//   pre * sum_{n,m} y^n y^m exp[i(n^k - m^k) phi] / (n! m!),
// with y = sqrt(eta_a eta_b) N / 2 and pre = exp[-N(eta_a+eta_b)/2].
inline long double parity_double_sum(long double mean_photons, int k,
                                     long double phi, int n_max,
                                     long double eta_a = 1.0L,
                                     long double eta_b = 1.0L) {
  const long double y = std::sqrt(eta_a * eta_b) * mean_photons / 2.0L;
  std::complex<long double> sum = 0.0L;
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n_max; ++m) {
      const long double log_mag =
          (n + m) * (y > 0.0L ? std::log(y) : 0.0L) - log_factorial_ld(n) -
          log_factorial_ld(m);
      if (y <= 0.0L && n + m > 0) continue;
      const long double wn = k == 1 ? n : static_cast<long double>(n) * n;
      const long double wm = k == 1 ? m : static_cast<long double>(m) * m;
      const long double theta = (wn - wm) * phi;
      sum += std::exp(log_mag) *
             std::complex<long double>(std::cos(theta), std::sin(theta));
    }
  }
  const long double pre = std::exp(-mean_photons * (eta_a + eta_b) / 2.0L);
  return pre * sum.real();
}

// F_q^u = 4(<n^4> - <n^2>^2) over the binomial(u, 1/2) photon split,
// enumerated exactly in 128-bit integers. Returns 2 * F_q^u, which is an
// integer for every u.
inline unsigned __int128 qfi_component_brute_doubled(int u) {
  // Pascal row C(u, j).
  std::vector<unsigned __int128> binomial(static_cast<std::size_t>(u) + 1);
  binomial[0] = 1;
  for (int j = 1; j <= u; ++j) {
    binomial[static_cast<std::size_t>(j)] = 0;
    for (int i = j; i >= 1; --i) {
      binomial[static_cast<std::size_t>(i)] +=
          binomial[static_cast<std::size_t>(i - 1)];
    }
  }
  unsigned __int128 s2 = 0;  // sum C(u,j) j^2
  unsigned __int128 s4 = 0;  // sum C(u,j) j^4
  for (int j = 0; j <= u; ++j) {
    const unsigned __int128 j2 =
        static_cast<unsigned __int128>(j) * static_cast<unsigned __int128>(j);
    s2 += binomial[static_cast<std::size_t>(j)] * j2;
    s4 += binomial[static_cast<std::size_t>(j)] * j2 * j2;
  }
  // F = 4 (s4 / 2^u - (s2 / 2^u)^2)  =>  2F = (8 s4 2^u - 8 s2^2) / 2^(2u).
  const unsigned __int128 pow_u = static_cast<unsigned __int128>(1) << u;
  const unsigned __int128 numerator = 8 * (s4 * pow_u - s2 * s2);
  return numerator / (pow_u * pow_u);
}

// Classical Fisher information from finite differences of the outcome
// probabilities, sum_i (dP_i/dphi)^2 / P_i.
inline double fisher_finite_difference(
    const std::function<double(double)>& parity_value, double phi, double h) {
  const double v_plus = parity_value(phi + h);
  const double v_minus = parity_value(phi - h);
  const double v = parity_value(phi);
  const double dpe = 0.5 * (v_plus - v_minus) / (2.0 * h);
  const double dpo = -dpe;
  const double pe = 0.5 * (1.0 + v);
  const double po = 0.5 * (1.0 - v);
  return dpe * dpe / pe + dpo * dpo / po;
}

// Half-maximum crossing from a dense grid with linear interpolation,
// independent of the production scan/bisection solver.
inline double fwhm_dense_grid(const std::function<double(double)>& signal,
                              double max_phase, int samples) {
  const double peak = signal(0.0);
  const double half = 0.5 * peak;
  double previous_phi = 0.0;
  double previous_value = peak;
  for (int i = 1; i <= samples; ++i) {
    const double phi = max_phase * i / samples;
    const double value = signal(phi);
    if (value < half) {
      const double t = (previous_value - half) / (previous_value - value);
      return 2.0 * (previous_phi + t * (phi - previous_phi));
    }
    previous_phi = phi;
    previous_value = value;
  }
  return -1.0;
}

}  // namespace oracles
