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

#include "kerrmet/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "kerrmet/errors.hpp"

namespace kerrmet {

namespace {

constexpr double kRangeSlack = 1e-12;

double clamp_unit(double value) {
  if (value > 1.0 && value < 1.0 + kRangeSlack) return 1.0;
  if (value < 0.0 && value > -kRangeSlack) return 0.0;
  return value;
}

}  // namespace

void validate(const InterferometerSpec& spec) {
  if (!std::isfinite(spec.mean_photons) || spec.mean_photons < 0.0) {
    throw std::invalid_argument("mean photon number must be finite and >= 0");
  }
  if (spec.order != 1 && spec.order != 2) {
    throw std::invalid_argument("unsupported nonlinearity order " +
                                std::to_string(spec.order) +
                                " (only k = 1 and k = 2)");
  }
}

void validate(const LossModel& loss) {
  auto in_unit = [](double eta) {
    return std::isfinite(eta) && eta >= 0.0 && eta <= 1.0;
  };
  if (!in_unit(loss.transmissivity_a) || !in_unit(loss.transmissivity_b)) {
    throw std::invalid_argument("transmissivities must lie in [0, 1]");
  }
}

void validate(const DetectorModel& detector) {
  if (!std::isfinite(detector.dark_count_rate) ||
      detector.dark_count_rate < 0.0) {
    throw std::invalid_argument("dark count rate must be finite and >= 0");
  }
  if (!std::isfinite(detector.jitter_inflation) ||
      detector.jitter_inflation <= 0.0) {
    throw std::invalid_argument("jitter inflation must be positive");
  }
  const double d = detector.effective_rate();
  if (d > 1.0) {
    throw std::invalid_argument(
        "effective dark count rate d = " + std::to_string(d) +
        " exceeds 1 count per gate");
  }
}

ParitySignal::ParitySignal(series::Evaluator evaluator, double scale)
    : evaluator_(std::move(evaluator)), scale_(scale) {}

ParitySignal ParitySignal::ideal(const InterferometerSpec& spec) {
  return with_noise(spec, NoiseModel{});
}

ParitySignal ParitySignal::with_noise(const InterferometerSpec& spec,
                                      const NoiseModel& noise) {
  validate(spec);
  double eta_a = 1.0;
  double eta_b = 1.0;
  if (noise.loss) {
    validate(*noise.loss);
    if (spec.order != 2) {
      throw std::invalid_argument(
          "the lossy parity model is defined for k = 2 only");
    }
    eta_a = noise.loss->transmissivity_a;
    eta_b = noise.loss->transmissivity_b;
  }
  double detector_factor = 1.0;
  if (noise.detector) {
    validate(*noise.detector);
    detector_factor = std::exp(-2.0 * noise.detector->effective_rate());
  }
  const double n = spec.mean_photons;
  const double amplitude = std::sqrt(eta_a * eta_b) * n / 2.0;
  const double scale = std::exp(-n * (eta_a + eta_b) / 2.0) * detector_factor;
  const int n_max = series::truncation_bound(n);
  return ParitySignal(series::Evaluator(amplitude, spec.order, n_max), scale);
}

double ParitySignal::value(double phase) const {
  const std::complex<double> s = evaluator_.value(phase);
  return clamp_unit(scale_ * std::norm(s));
}

double ParitySignal::derivative(double phase) const {
  double v;
  double dv;
  value_and_derivative(phase, v, dv);
  return dv;
}

void ParitySignal::value_and_derivative(double phase, double& value,
                                        double& derivative) const {
  std::complex<double> s;
  std::complex<double> ds;
  evaluator_.value_and_derivative(phase, s, ds);
  value = clamp_unit(scale_ * std::norm(s));
  // d|S|^2/dphi = 2 Re(conj(S) dS)
  derivative = scale_ * 2.0 * (std::conj(s) * ds).real();
}

double parity_ideal(const InterferometerSpec& spec, double phase) {
  return ParitySignal::ideal(spec).value(phase);
}

double parity_linear_reference(double mean_photons, double phase) {
  validate(InterferometerSpec{mean_photons, 1});
  if (!std::isfinite(phase)) {
    throw std::invalid_argument("phase must be finite");
  }
  return std::exp(-mean_photons * (1.0 - std::cos(phase)));
}

double parity_lossy(const InterferometerSpec& spec, const LossModel& loss,
                    double phase) {
  NoiseModel noise;
  noise.loss = loss;
  return ParitySignal::with_noise(spec, noise).value(phase);
}

double parity_detector(double raw_signal, const DetectorModel& detector) {
  validate(detector);
  if (!std::isfinite(raw_signal) || raw_signal < -1.0 - kRangeSlack ||
      raw_signal > 1.0 + kRangeSlack) {
    throw std::invalid_argument("raw signal must lie in [-1, 1]");
  }
  return std::exp(-2.0 * detector.effective_rate()) * raw_signal;
}

double parity_joint(const InterferometerSpec& spec, const LossModel& loss,
                    const DetectorModel& detector, double phase) {
  NoiseModel noise;
  noise.loss = loss;
  noise.detector = detector;
  return ParitySignal::with_noise(spec, noise).value(phase);
}

EvenOddProbabilities even_odd_probabilities(double signal_value) {
  if (!std::isfinite(signal_value) ||
      std::abs(signal_value) > 1.0 + kRangeSlack) {
    throw std::invalid_argument(
        "parity expectation must lie in [-1, 1] (got " +
        std::to_string(signal_value) + ")");
  }
  const double v = std::clamp(signal_value, -1.0, 1.0);
  EvenOddProbabilities p;
  p.even = 0.5 * (1.0 + v);
  p.odd = 1.0 - p.even;  // sums to 1 exactly
  return p;
}

double visibility(const SignalTrace& trace) {
  if (trace.values.empty()) {
    throw std::invalid_argument("visibility of an empty trace is undefined");
  }
  double lo = trace.values.front();
  double hi = trace.values.front();
  for (double v : trace.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi + lo == 0.0) {
    throw NumericError("visibility of an all-zero trace is indeterminate");
  }
  return (hi - lo) / (hi + lo);
}

SignalTrace sample_trace(const InterferometerSpec& spec,
                         const std::optional<NoiseModel>& noise,
                         std::span<const double> phase_grid) {
  if (phase_grid.empty()) {
    throw std::invalid_argument("phase grid must be non-empty");
  }
  for (std::size_t i = 1; i < phase_grid.size(); ++i) {
    if (!(phase_grid[i] > phase_grid[i - 1])) {
      throw std::invalid_argument("phase grid must be strictly increasing");
    }
  }
  const ParitySignal signal = noise ? ParitySignal::with_noise(spec, *noise)
                                    : ParitySignal::ideal(spec);
  SignalTrace trace;
  trace.phases.assign(phase_grid.begin(), phase_grid.end());
  trace.values.reserve(phase_grid.size());
  for (double phase : phase_grid) {
    trace.values.push_back(signal.value(phase));
  }
  trace.spec = spec;
  trace.noise = noise;
  trace.truncation_used = signal.truncation();
  return trace;
}

}  // namespace kerrmet
