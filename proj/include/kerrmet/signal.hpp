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

#include <optional>
#include <span>
#include <vector>

#include "kerrmet/series.hpp"

namespace kerrmet {

// Physical scenario: coherent state of mean photon number N into one port,
// vacuum into the other, phase channel of order k in one arm.
struct InterferometerSpec {
  double mean_photons = 0.0;
  int order = 2;

  bool operator==(const InterferometerSpec&) const = default;
};

// Per-arm transmissivities of beam splitters placed before the phase
// channel; loss in arm X is 1 - transmissivity_x.
struct LossModel {
  double transmissivity_a = 1.0;
  double transmissivity_b = 1.0;

  double loss_a() const { return 1.0 - transmissivity_a; }
  double loss_b() const { return 1.0 - transmissivity_b; }

  bool operator==(const LossModel&) const = default;
};

// Dark counts at rate r per sampling gate, with response-time jitter
// widening the gate; the effective rate is d = jitter_inflation * r.
struct DetectorModel {
  double dark_count_rate = 0.0;
  double jitter_inflation = 10.0;

  double effective_rate() const { return jitter_inflation * dark_count_rate; }

  bool operator==(const DetectorModel&) const = default;
};

struct NoiseModel {
  std::optional<LossModel> loss;
  std::optional<DetectorModel> detector;

  bool operator==(const NoiseModel&) const = default;
};

// Parity expectation sampled over a phase grid.
struct SignalTrace {
  std::vector<double> phases;
  std::vector<double> values;
  InterferometerSpec spec;
  std::optional<NoiseModel> noise;
  int truncation_used = 0;
};

void validate(const InterferometerSpec& spec);
void validate(const LossModel& loss);
void validate(const DetectorModel& detector);

// Parity expectation as an analytic function of the phase. All supported
// models factor as  scale * |S(x, phi, k)|^2  with a phase-independent
// scale, so one precomputed series evaluator serves value and derivative.
class ParitySignal {
 public:
  static ParitySignal ideal(const InterferometerSpec& spec);
  static ParitySignal with_noise(const InterferometerSpec& spec,
                                 const NoiseModel& noise);

  double value(double phase) const;
  double derivative(double phase) const;
  void value_and_derivative(double phase, double& value,
                            double& derivative) const;

  int truncation() const { return evaluator_.term_count(); }

 private:
  ParitySignal(series::Evaluator evaluator, double scale);

  series::Evaluator evaluator_;
  double scale_;  // exp[-N(eta_a + eta_b)/2] * exp(-2d)
};

// <Pi> = e^{-N} |S(N/2, phi, k)|^2.
double parity_ideal(const InterferometerSpec& spec, double phase);

// Closed form e^{-N(1 - cos phi)} of the linear (k=1) protocol.
double parity_linear_reference(double mean_photons, double phase);

// <Pi> with photon loss before the nonlinear channel (k=2 only):
// exp[-N(eta_a + eta_b)/2] |S(sqrt(eta_a eta_b) N/2, phi, 2)|^2.
double parity_lossy(const InterferometerSpec& spec, const LossModel& loss,
                    double phase);

// Dark counts and jitter scale the raw signal by e^{-2d}.
double parity_detector(double raw_signal, const DetectorModel& detector);

// Loss and detector applied together: e^{-2d} * parity_lossy(...).
double parity_joint(const InterferometerSpec& spec, const LossModel& loss,
                    const DetectorModel& detector, double phase);

struct EvenOddProbabilities {
  double even = 0.0;
  double odd = 0.0;
};

// (P_e, P_o) = ((1+v)/2, (1-v)/2); the pair sums to 1 exactly.
EvenOddProbabilities even_odd_probabilities(double signal_value);

// (max - min) / (max + min) over the trace values.
double visibility(const SignalTrace& trace);

// Batch evaluation of the appropriate parity model over a strictly
// increasing phase grid.
SignalTrace sample_trace(const InterferometerSpec& spec,
                         const std::optional<NoiseModel>& noise,
                         std::span<const double> phase_grid);

}  // namespace kerrmet
