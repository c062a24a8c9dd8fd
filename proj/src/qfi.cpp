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

#include "kerrmet/qfi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kerrmet/errors.hpp"
#include "kerrmet/series.hpp"

namespace kerrmet {

double qfi_component(int u) {
  if (u < 0) {
    throw std::invalid_argument("component index u must be >= 0");
  }
  const double du = static_cast<double>(u);
  return 0.5 * du * (du + 1.0) * (2.0 * du - 1.0);
}

double poisson_weight(double mean_photons, int u) {
  if (!std::isfinite(mean_photons) || mean_photons < 0.0) {
    throw std::invalid_argument("mean photon number must be finite and >= 0");
  }
  if (u < 0) {
    throw std::invalid_argument("component index u must be >= 0");
  }
  if (mean_photons == 0.0) {
    return u == 0 ? 1.0 : 0.0;
  }
  return std::exp(u * std::log(mean_photons) - mean_photons -
                  series::log_factorial(u));
}

QfiReport qfi_phase_averaged(double mean_photons,
                             bool include_component_sample) {
  const int n_max = series::truncation_bound(mean_photons);
  double sum = 0.0;
  double comp = 0.0;
  for (int u = 0; u <= n_max; ++u) {
    const double term = poisson_weight(mean_photons, u) * qfi_component(u);
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term
                                            : (term - t) + sum;
    sum = t;
  }
  QfiReport report;
  report.mean_photons = mean_photons;
  report.qfi = sum + comp;
  report.qcrb = report.qfi > 0.0 ? 1.0 / std::sqrt(report.qfi)
                                 : std::numeric_limits<double>::infinity();
  report.terms_used = n_max + 1;
  if (include_component_sample) {
    for (int u = 0; u <= std::min(n_max, 8); ++u) {
      report.per_component_sample.emplace_back(u, qfi_component(u));
    }
  }
  return report;
}

double qfi_closed_form(double mean_photons) {
  if (!std::isfinite(mean_photons) || mean_photons < 0.0) {
    throw std::invalid_argument("mean photon number must be finite and >= 0");
  }
  const double n = mean_photons;
  return n * n * n + 3.5 * n * n + n;
}

double qcrb(double mean_photons) {
  if (mean_photons <= 0.0) {
    throw NonIdentifiableError(
        "quantum Cramer-Rao bound is unbounded for a vacuum input");
  }
  return qfi_phase_averaged(mean_photons).qcrb;
}

}  // namespace kerrmet
