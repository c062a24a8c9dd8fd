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

#include <utility>
#include <vector>

namespace kerrmet {

// Phase-averaged quantum Fisher information for a coherent + vacuum input
// and the quadratic phase channel, plus the quantum Cramer-Rao bound.
struct QfiReport {
  double mean_photons = 0.0;
  double qfi = 0.0;
  double qcrb = 0.0;  // 1/sqrt(qfi)
  int terms_used = 0;
  // (u, F_q^u) for the first few photon-number components, when requested.
  std::vector<std::pair<int, double>> per_component_sample;
};

// Quantum Fisher information carried by the u-photon component after a
// balanced split: (u/2)(u+1)(2u-1). Exact for all representable u.
double qfi_component(int u);

// Poisson weight e^{-N} N^u / u! of the u-photon component.
double poisson_weight(double mean_photons, int u);

// Component sum  F_q = sum_u p_u F_q^u, truncated by the shared Poisson
// tail policy.
QfiReport qfi_phase_averaged(double mean_photons,
                             bool include_component_sample = false);

// Closed form N^3 + 3.5 N^2 + N of the same sum (Poisson factorial
// moments); used as a cross-check for the component sum.
double qfi_closed_form(double mean_photons);

// Quantum Cramer-Rao bound 1/sqrt(F_q). Unbounded (and an error) at N = 0.
double qcrb(double mean_photons);

}  // namespace kerrmet
