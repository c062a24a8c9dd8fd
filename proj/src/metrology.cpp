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

#include "kerrmet/metrology.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kerrmet/errors.hpp"
#include "kerrmet/qfi.hpp"

namespace kerrmet {

namespace {

constexpr double kDegenerateThreshold = 1e-12;
constexpr double kIdentifiabilityThreshold = 1e-18;

double fisher_from_point(double value, double derivative,
                         FisherConvention convention) {
  const double denom = 1.0 - value * value;
  if (denom < kDegenerateThreshold) {
    throw DegeneratePointError(
        "Fisher information is indeterminate where 1 - <Pi>^2 < 1e-12");
  }
  if (convention == FisherConvention::kStandard) {
    return derivative * derivative / denom;
  }
  // dP_e/dphi = -dP_o/dphi = derivative / 2, P_{e,o} = (1 +- value)/2.
  const double pe = 0.5 * (1.0 + value);
  const double po = 1.0 - pe;
  const double dp = 0.5 * derivative;
  return dp * dp / (pe * pe) + dp * dp / (po * po);
}

// delta_phi at a phase, or +inf where the point is degenerate or carries
// no information; used by the scan and the refinement.
double delta_phi_or_inf(const ParitySignal& signal, double phase) {
  double v;
  double dv;
  signal.value_and_derivative(phase, v, dv);
  const double denom = 1.0 - v * v;
  if (denom < kDegenerateThreshold) {
    return std::numeric_limits<double>::infinity();
  }
  const double fisher = dv * dv / denom;
  if (fisher < kIdentifiabilityThreshold) {
    return std::numeric_limits<double>::infinity();
  }
  return 1.0 / std::sqrt(fisher);
}

}  // namespace

DifferentiableSignal as_signal(const ParitySignal& signal) {
  return DifferentiableSignal{
      [signal](double phase) { return signal.value(phase); },
      [signal](double phase) { return signal.derivative(phase); }};
}

double classical_fisher(const DifferentiableSignal& signal, double phase,
                        FisherConvention convention) {
  return fisher_from_point(signal.value(phase), signal.derivative(phase),
                           convention);
}

double sensitivity(const DifferentiableSignal& signal, double phase) {
  const double fisher = classical_fisher(signal, phase);
  if (fisher < kIdentifiabilityThreshold) {
    throw NonIdentifiableError(
        "Fisher information vanishes; the phase is not identifiable here");
  }
  return 1.0 / std::sqrt(fisher);
}

SensitivityReport optimal_sensitivity(const InterferometerSpec& spec,
                                      const std::optional<NoiseModel>& noise,
                                      const SensitivitySearchConfig& config) {
  validate(spec);
  const auto [lo, hi] = config.window;
  if (!(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("scan window must satisfy 0 < lo < hi");
  }
  const ParitySignal signal = noise ? ParitySignal::with_noise(spec, *noise)
                                    : ParitySignal::ideal(spec);

  const double n_scale = std::max(1.0, spec.mean_photons);
  const int points = static_cast<int>(
      std::ceil(config.grid_points_per_photon * n_scale));
  const double step = (hi - lo) / (points - 1);

  int best_index = -1;
  double best_delta = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double phase = lo + i * step;
    const double delta = delta_phi_or_inf(signal, phase);
    if (delta < best_delta) {
      best_delta = delta;
      best_index = i;
    }
  }
  if (best_index < 0) {
    throw SearchFailureError(
        "every scanned phase is degenerate or non-identifiable");
  }

  // Golden-section refinement between the neighbours of the best grid
  // point; converges to the window edge when the minimum sits there.
  double a = lo + std::max(0, best_index - 1) * step;
  double b = lo + std::min(points - 1, best_index + 1) * step;
  constexpr double kInvGolden = 0.6180339887498949;
  double c = b - kInvGolden * (b - a);
  double d = a + kInvGolden * (b - a);
  double fc = delta_phi_or_inf(signal, c);
  double fd = delta_phi_or_inf(signal, d);
  while (b - a > config.refine_tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvGolden * (b - a);
      fc = delta_phi_or_inf(signal, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvGolden * (b - a);
      fd = delta_phi_or_inf(signal, d);
    }
  }
  double phase = 0.5 * (a + b);
  double delta = delta_phi_or_inf(signal, phase);
  // Keep the best point actually evaluated.
  if (fc < delta) {
    delta = fc;
    phase = c;
  }
  if (fd < delta) {
    delta = fd;
    phase = d;
  }
  if (best_delta < delta) {
    delta = best_delta;
    phase = lo + best_index * step;
  }

  SensitivityReport report;
  report.optimal_phase = phase;
  report.delta_phi = delta;
  report.fisher_classical = 1.0 / (delta * delta);
  report.scan_window = config.window;
  if (spec.mean_photons > 0.0) {
    report.qcrb = qcrb(spec.mean_photons);
  }
  return report;
}

FwhmSearchConfig FwhmSearchConfig::for_mean_photons(double mean_photons) {
  FwhmSearchConfig config;
  config.scan_step =
      std::numbers::pi / (400.0 * std::max(1.0, mean_photons));
  return config;
}

ResolutionReport fwhm(const std::function<double(double)>& signal,
                      const FwhmSearchConfig& config) {
  if (!(config.scan_step > 0.0) || !(config.max_phase > config.scan_step)) {
    throw std::invalid_argument("invalid FWHM search configuration");
  }
  const double sign = config.scan_negative ? -1.0 : 1.0;
  const double peak = signal(0.0);
  if (!(peak > 0.0)) {
    throw SearchFailureError("signal peak at phi = 0 is not positive");
  }
  const double half = 0.5 * peak;

  double below = 0.0;
  double above = 0.0;
  bool found = false;
  const long max_steps =
      static_cast<long>(std::ceil(config.max_phase / config.scan_step));
  for (long i = 1; i <= max_steps; ++i) {
    const double phi = std::min(i * config.scan_step, config.max_phase);
    if (signal(sign * phi) < half) {
      below = phi;
      above = (i - 1) * config.scan_step;
      found = true;
      break;
    }
  }
  if (!found) {
    throw SearchFailureError(
        "no half-maximum crossing found inside the scan window");
  }

  while (below - above > config.tolerance) {
    const double mid = 0.5 * (above + below);
    if (signal(sign * mid) < half) {
      below = mid;
    } else {
      above = mid;
    }
  }

  ResolutionReport report;
  report.fwhm = 2.0 * 0.5 * (above + below);
  report.peak_value = peak;
  report.peak_phase = 0.0;
  return report;
}

double resolution_coefficient(double mean_photons) {
  if (!(mean_photons > 0.0)) {
    throw std::invalid_argument("mean photon number must be positive");
  }
  const auto config = FwhmSearchConfig::for_mean_photons(mean_photons);
  const ParitySignal linear =
      ParitySignal::ideal({mean_photons, 1});
  const ParitySignal nonlinear =
      ParitySignal::ideal({mean_photons, 2});
  const double linear_width =
      fwhm([&](double p) { return linear.value(p); }, config).fwhm;
  const double nonlinear_width =
      fwhm([&](double p) { return nonlinear.value(p); }, config).fwhm;
  return linear_width / nonlinear_width;
}

double broadening_coefficient(double mean_photons, double loss) {
  if (!(mean_photons > 0.0)) {
    throw std::invalid_argument("mean photon number must be positive");
  }
  if (!(loss >= 0.0) || loss >= 1.0) {
    throw std::invalid_argument("loss must lie in [0, 1)");
  }
  const auto config = FwhmSearchConfig::for_mean_photons(mean_photons);
  const InterferometerSpec spec{mean_photons, 2};
  NoiseModel noise;
  noise.loss = LossModel{1.0 - loss, 1.0 - loss};
  const ParitySignal lossy = ParitySignal::with_noise(spec, noise);
  const ParitySignal ideal = ParitySignal::ideal(spec);
  const double lossy_width =
      fwhm([&](double p) { return lossy.value(p); }, config).fwhm;
  const double ideal_width =
      fwhm([&](double p) { return ideal.value(p); }, config).fwhm;
  return lossy_width / ideal_width;
}

}  // namespace kerrmet
