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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kerrmet/metrology.hpp"
#include "kerrmet/qfi.hpp"
#include "kerrmet/signal.hpp"

namespace kerrmet::sweep {

enum class Quantity {
  kSignal,        // parity expectation over a phase axis
  kFwhm,          // main-peak width over a mean-photon axis
  kCoefficientC,  // linear/nonlinear width ratio over a mean-photon axis
  kSensitivity,   // optimal delta_phi over a mean-photon axis
  kQcrb,          // quantum bound over a mean-photon axis
  kBroadening,    // width ratio lossy/ideal over loss (x mean-photon) axes
  kLossMap,       // width and sensitivity over a loss_a x loss_b grid
  kDarkSweep,     // sensitivity over an effective dark-rate axis
  kJointMap,      // sensitivity over equal-arm loss x dark-rate axes
};

enum class AxisScale { kLinear, kLog };
enum class OutputFormat { kCsv, kJson };

struct Axis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  AxisScale scale = AxisScale::kLinear;

  std::vector<double> values() const;

  bool operator==(const Axis&) const = default;
};

struct SweepConfig {
  Quantity quantity = Quantity::kSignal;
  InterferometerSpec spec;
  std::optional<NoiseModel> noise;
  std::vector<Axis> axes;
  std::optional<std::string> output_path;
  OutputFormat format = OutputFormat::kCsv;

  bool operator==(const SweepConfig&) const = default;
};

// Strict parse of a JSON configuration document: unknown keys are
// rejected, every invariant is checked, and messages name the offending
// field. The inverse of serialize_config.
SweepConfig parse_config(const std::string& text);
std::string serialize_config(const SweepConfig& config);

// Cartesian-product results; empty cells mark per-cell numeric failures.
struct SweepTable {
  std::vector<std::string> columns;
  int axis_columns = 0;  // leading columns that carry axis coordinates
  std::vector<std::vector<std::optional<double>>> rows;

  // True when every computed (non-axis) cell is NA.
  bool all_failed() const;
};

// Evaluates the configured quantity over the Cartesian product of the
// axes, in row-major order of the listed axes. Cells are computed
// concurrently (KERRMET_WORKERS overrides the worker count) and assembled
// by index, so the output is deterministic.
SweepTable run_sweep(const SweepConfig& config);

struct FigureRecipe {
  std::string figure_id;
  // Dataset name -> configuration; several datasets when one figure
  // overlays several curves.
  std::vector<std::pair<std::string, SweepConfig>> sweeps;
};

// Pre-registered sweep configurations reproducing the built-in datasets
// fig2, fig3a, fig3b, fig4, fig5, fig6a, fig6b, fig7, fig9, fig10.
FigureRecipe figure_recipe(const std::string& figure_id);

// CSV: '.' decimals, ',' delimiter, LF endings, 17 significant digits,
// NA for failed cells.
void write_csv(std::ostream& out, const SweepTable& table);
nlohmann::json to_json(const SweepTable& table);

void write_trace_csv(std::ostream& out, const SignalTrace& trace);
nlohmann::json to_json(const SignalTrace& trace);
nlohmann::json to_json(const SensitivityReport& report);
nlohmann::json to_json(const ResolutionReport& report);
nlohmann::json to_json(const QfiReport& report);

// KERRMET_WORKERS when set (>= 1), hardware concurrency otherwise.
int worker_count();

}  // namespace kerrmet::sweep
