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

#include <functional>
#include <numbers>
#include <optional>
#include <utility>

#include "kerrmet/signal.hpp"

namespace kerrmet {

// Any phase-parameterized expectation value with an analytic derivative.
struct DifferentiableSignal {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

DifferentiableSignal as_signal(const ParitySignal& signal);

// Fisher information of the binary even/odd outcome distribution.
// kStandard is sum_i (dP_i/dphi)^2 / P_i = (d<Pi>/dphi)^2 / (1 - <Pi>^2).
// kSquaredWeights replaces 1/P_i by 1/P_i^2; it does not reduce to the
// Fisher information of a binary distribution and is kept only for
// comparison runs.
enum class FisherConvention { kStandard, kSquaredWeights };

struct SensitivityReport {
  double optimal_phase = 0.0;
  double delta_phi = 0.0;
  double fisher_classical = 0.0;
  std::optional<double> qcrb;
  std::pair<double, double> scan_window{0.0, 0.0};
};

struct ResolutionReport {
  double fwhm = 0.0;
  double peak_value = 0.0;
  double peak_phase = 0.0;
  std::optional<double> coefficient_c;
  std::optional<double> broadening_cb;
};

struct SensitivitySearchConfig {
  std::pair<double, double> window{1e-4, std::numbers::pi};
  // The coarse scan uses at least this many points per unit of
  // max(1, N); the default resolves the O(1/N^2)-wide signal features.
  int grid_points_per_photon = 2000;
  double refine_tolerance = 1e-10;
};

struct FwhmSearchConfig {
  double scan_step = std::numbers::pi / 400.0;
  double max_phase = std::numbers::pi;
  double tolerance = 1e-10;
  bool scan_negative = false;  // solve on phi < 0 (evenness checks)

  static FwhmSearchConfig for_mean_photons(double mean_photons);
};

double classical_fisher(const DifferentiableSignal& signal, double phase,
                        FisherConvention convention =
                            FisherConvention::kStandard);

// 1/sqrt(F_c); errors out where the phase is not identifiable.
double sensitivity(const DifferentiableSignal& signal, double phase);

// Coarse grid scan plus golden-section refinement of delta_phi over the
// window. Deterministic: ties resolve to the smallest phase.
SensitivityReport optimal_sensitivity(
    const InterferometerSpec& spec,
    const std::optional<NoiseModel>& noise = std::nullopt,
    const SensitivitySearchConfig& config = {});

// Full width at half maximum of the main peak at phi = 0, relative to the
// curve's own maximum. Forward scan for the first half crossing, then
// bisection.
ResolutionReport fwhm(const std::function<double(double)>& signal,
                      const FwhmSearchConfig& config);

// C = FWHM[k=1] / FWHM[k=2] at equal mean photon number.
double resolution_coefficient(double mean_photons);

// C_B = FWHM[lossy] / FWHM[ideal] at equal N, k = 2, L_A = L_B = loss.
double broadening_coefficient(double mean_photons, double loss);

}  // namespace kerrmet
