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

#pragma once

#include <complex>
#include <vector>

namespace kerrmet::series {

// Parameters of the truncated Fock series
//   S(x, phi, k) = sum_{n=0}^{n_max} x^n exp(i n^k phi) / n!
// Only the linear (k=1) and quadratic (k=2) phase orders are supported;
// anything else is rejected rather than silently accepted.
struct SeriesParams {
  double amplitude = 0.0;  // x >= 0
  int order = 2;           // k in {1, 2}
  double phase = 0.0;      // phi, radians
};

// Where to cut the series off. The bound never drops below
// multiplier * mean_photons (multiplier < 5 is rejected) and is raised
// further until the Poisson tail mass beyond it falls under
// tail_tolerance.
struct TruncationPolicy {
  int floor_terms = 30;
  double multiplier = 5.0;
  double tail_tolerance = 1e-12;
};

// ln(n!) with relative error <= 1e-14. Cumulative table below a fixed
// cutoff, Stirling expansion above it.
double log_factorial(int n);

// Smallest admissible n_max for a mean photon number.
int truncation_bound(double mean_photons, const TruncationPolicy& policy = {});

std::complex<double> eval_series(const SeriesParams& params, int n_max);

// d/dphi of eval_series: sum_n x^n (i n^k) exp(i n^k phi) / n!.
std::complex<double> eval_series_derivative(const SeriesParams& params,
                                            int n_max);

// Precomputes the phase-independent term magnitudes x^n/n! so that
// repeated evaluations over a phase grid cost one sin/cos per term.
// Immutable after construction; safe to share across threads.
class Evaluator {
 public:
  Evaluator(double amplitude, int order, int n_max);

  std::complex<double> value(double phase) const;
  std::complex<double> derivative(double phase) const;
  void value_and_derivative(double phase, std::complex<double>& value,
                            std::complex<double>& derivative) const;

  int term_count() const { return static_cast<int>(magnitude_.size()) - 1; }

 private:
  // Extended precision throughout: alternating phase factors can shrink
  // the sum by e^{2x} relative to its largest term.
  std::vector<long double> magnitude_;     // x^n / n!
  std::vector<long double> phase_weight_;  // n^k
};

}  // namespace kerrmet::series
