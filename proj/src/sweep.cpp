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

#include "kerrmet/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "kerrmet/errors.hpp"

namespace kerrmet::sweep {

namespace {

using nlohmann::json;

const std::map<std::string, Quantity>& quantity_names() {
  static const std::map<std::string, Quantity> names = {
      {"signal", Quantity::kSignal},
      {"fwhm", Quantity::kFwhm},
      {"coefficient_c", Quantity::kCoefficientC},
      {"sensitivity", Quantity::kSensitivity},
      {"qcrb", Quantity::kQcrb},
      {"broadening", Quantity::kBroadening},
      {"loss_map", Quantity::kLossMap},
      {"dark_sweep", Quantity::kDarkSweep},
      {"joint_map", Quantity::kJointMap},
  };
  return names;
}

std::string quantity_to_string(Quantity quantity) {
  for (const auto& [name, value] : quantity_names()) {
    if (value == quantity) return name;
  }
  throw std::invalid_argument("unknown quantity enum value");
}

Quantity quantity_from_string(const std::string& name) {
  const auto it = quantity_names().find(name);
  if (it == quantity_names().end()) {
    throw std::invalid_argument("unknown quantity '" + name + "'");
  }
  return it->second;
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

// Rejects keys outside the allowed set so typos fail loudly.
void expect_keys(const json& object, const std::string& context,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument("unknown key '" + item.key() + "' in " +
                                  context);
    }
  }
}

double require_number(const json& object, const std::string& context,
                      const char* key) {
  if (!object.contains(key)) {
    throw std::invalid_argument("missing key '" + std::string(key) +
                                "' in " + context);
  }
  if (!object.at(key).is_number()) {
    throw std::invalid_argument("key '" + std::string(key) + "' in " +
                                context + " must be a number");
  }
  return object.at(key).get<double>();
}

struct QuantityLayout {
  std::vector<std::vector<std::string>> allowed_axis_sets;
  std::vector<std::string> value_columns;
  bool noise_allowed = false;
};

const QuantityLayout& layout_for(Quantity quantity) {
  static const std::map<Quantity, QuantityLayout> layouts = {
      {Quantity::kSignal, {{{"phase"}}, {"value"}, true}},
      {Quantity::kFwhm, {{{"mean_photons"}}, {"fwhm"}, true}},
      {Quantity::kCoefficientC, {{{"mean_photons"}}, {"C"}, false}},
      {Quantity::kSensitivity,
       {{{"mean_photons"}}, {"phi_opt", "delta_phi"}, true}},
      {Quantity::kQcrb, {{{"mean_photons"}}, {"F_q", "qcrb"}, false}},
      {Quantity::kBroadening,
       {{{"loss"}, {"mean_photons", "loss"}}, {"C_B"}, false}},
      {Quantity::kLossMap,
       {{{"loss_a", "loss_b"}}, {"fwhm", "phi_opt", "delta_phi"}, false}},
      {Quantity::kDarkSweep,
       {{{"dark_rate"}, {"mean_photons", "dark_rate"}},
        {"phi_opt", "delta_phi"},
        false}},
      {Quantity::kJointMap,
       {{{"loss", "dark_rate"}}, {"phi_opt", "delta_phi"}, false}},
  };
  return layouts.at(quantity);
}

std::string axis_set_description(const QuantityLayout& layout) {
  std::string out;
  for (std::size_t i = 0; i < layout.allowed_axis_sets.size(); ++i) {
    if (i > 0) out += " or ";
    out += "[";
    const auto& set = layout.allowed_axis_sets[i];
    for (std::size_t j = 0; j < set.size(); ++j) {
      if (j > 0) out += ", ";
      out += set[j];
    }
    out += "]";
  }
  return out;
}

void validate_axis(const Axis& axis) {
  if (axis.name.empty()) {
    throw std::invalid_argument("axis name must be non-empty");
  }
  if (axis.points < 2) {
    throw std::invalid_argument("axis '" + axis.name +
                                "' must have points >= 2");
  }
  if (!std::isfinite(axis.start) || !std::isfinite(axis.stop) ||
      !(axis.start < axis.stop)) {
    throw std::invalid_argument("axis '" + axis.name +
                                "' must have start < stop");
  }
  if (axis.scale == AxisScale::kLog && !(axis.start > 0.0)) {
    throw std::invalid_argument("log axis '" + axis.name +
                                "' requires start > 0");
  }
  struct Range {
    double lo;
    double hi;
  };
  static const std::map<std::string, Range> ranges = {
      {"mean_photons", {0.0, 1e6}}, {"loss", {0.0, 1.0}},
      {"loss_a", {0.0, 1.0}},       {"loss_b", {0.0, 1.0}},
      {"dark_rate", {0.0, 1.0}},
  };
  const auto it = ranges.find(axis.name);
  if (it != ranges.end() &&
      (axis.start < it->second.lo || axis.stop > it->second.hi)) {
    throw std::invalid_argument("axis '" + axis.name + "' must lie within [" +
                                format_double(it->second.lo) + ", " +
                                format_double(it->second.hi) + "]");
  }
}

void validate_config(const SweepConfig& config) {
  validate(config.spec);
  const QuantityLayout& layout = layout_for(config.quantity);

  bool axes_match = false;
  for (const auto& set : layout.allowed_axis_sets) {
    if (set.size() != config.axes.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (config.axes[i].name != set[i]) {
        match = false;
        break;
      }
    }
    if (match) {
      axes_match = true;
      break;
    }
  }
  if (!axes_match) {
    throw std::invalid_argument(
        "quantity '" + quantity_to_string(config.quantity) +
        "' requires axes " + axis_set_description(layout));
  }
  for (const Axis& axis : config.axes) {
    validate_axis(axis);
  }
  if (config.quantity == Quantity::kBroadening) {
    const Axis& loss_axis = config.axes.back();
    if (!(loss_axis.stop < 1.0)) {
      throw std::invalid_argument(
          "broadening loss axis must stay below total loss 1");
    }
  }

  if (config.noise) {
    if (!layout.noise_allowed) {
      throw std::invalid_argument(
          "quantity '" + quantity_to_string(config.quantity) +
          "' does not accept a noise block");
    }
    if (config.noise->loss) {
      validate(*config.noise->loss);
      if (config.spec.order != 2) {
        throw std::invalid_argument(
            "a loss model requires the nonlinear protocol (order 2)");
      }
    }
    if (config.noise->detector) {
      validate(*config.noise->detector);
    }
  }
}

// ---------------------------------------------------------------------
// Cell evaluation
// ---------------------------------------------------------------------

using Cell = std::vector<std::optional<double>>;
using CellFunction = std::function<Cell(const std::vector<double>&)>;

Cell guarded1(const std::function<double()>& f) {
  try {
    return {f()};
  } catch (const NumericError&) {
    return {std::nullopt};
  }
}

CellFunction make_cell_function(const SweepConfig& config) {
  const bool has_mean_photons_axis = config.axes.size() > 1 ||
                                     config.axes.front().name ==
                                         "mean_photons";
  switch (config.quantity) {
    case Quantity::kSignal: {
      auto signal = std::make_shared<ParitySignal>(
          config.noise ? ParitySignal::with_noise(config.spec, *config.noise)
                       : ParitySignal::ideal(config.spec));
      return [signal](const std::vector<double>& at) -> Cell {
        return guarded1([&] { return signal->value(at[0]); });
      };
    }
    case Quantity::kFwhm: {
      const InterferometerSpec base = config.spec;
      const std::optional<NoiseModel> noise = config.noise;
      return [base, noise](const std::vector<double>& at) -> Cell {
        return guarded1([&] {
          const InterferometerSpec spec{at[0], base.order};
          const ParitySignal signal =
              noise ? ParitySignal::with_noise(spec, *noise)
                    : ParitySignal::ideal(spec);
          return fwhm([&](double p) { return signal.value(p); },
                      FwhmSearchConfig::for_mean_photons(at[0]))
              .fwhm;
        });
      };
    }
    case Quantity::kCoefficientC:
      return [](const std::vector<double>& at) -> Cell {
        return guarded1([&] { return resolution_coefficient(at[0]); });
      };
    case Quantity::kSensitivity: {
      const InterferometerSpec base = config.spec;
      const std::optional<NoiseModel> noise = config.noise;
      return [base, noise](const std::vector<double>& at) -> Cell {
        try {
          const auto report =
              optimal_sensitivity({at[0], base.order}, noise);
          return {report.optimal_phase, report.delta_phi};
        } catch (const NumericError&) {
          return {std::nullopt, std::nullopt};
        }
      };
    }
    case Quantity::kQcrb:
      return [](const std::vector<double>& at) -> Cell {
        const auto report = qfi_phase_averaged(at[0]);
        Cell cell{report.qfi, std::nullopt};
        if (report.qfi > 0.0) cell[1] = report.qcrb;
        return cell;
      };
    case Quantity::kBroadening: {
      const double fixed_n = config.spec.mean_photons;
      const bool n_from_axis = has_mean_photons_axis;
      return [fixed_n, n_from_axis](const std::vector<double>& at) -> Cell {
        const double n = n_from_axis ? at[0] : fixed_n;
        const double loss = at.back();
        return guarded1([&] { return broadening_coefficient(n, loss); });
      };
    }
    case Quantity::kLossMap: {
      const InterferometerSpec spec{config.spec.mean_photons, 2};
      return [spec](const std::vector<double>& at) -> Cell {
        NoiseModel noise;
        noise.loss = LossModel{1.0 - at[0], 1.0 - at[1]};
        Cell cell(3, std::nullopt);
        try {
          const ParitySignal signal = ParitySignal::with_noise(spec, noise);
          cell[0] = fwhm([&](double p) { return signal.value(p); },
                         FwhmSearchConfig::for_mean_photons(
                             spec.mean_photons))
                        .fwhm;
        } catch (const NumericError&) {
        }
        try {
          const auto report = optimal_sensitivity(spec, noise);
          cell[1] = report.optimal_phase;
          cell[2] = report.delta_phi;
        } catch (const NumericError&) {
        }
        return cell;
      };
    }
    case Quantity::kDarkSweep: {
      const double fixed_n = config.spec.mean_photons;
      const bool n_from_axis = has_mean_photons_axis;
      return [fixed_n, n_from_axis](const std::vector<double>& at) -> Cell {
        const double n = n_from_axis ? at[0] : fixed_n;
        const double d = at.back();
        NoiseModel noise;
        noise.detector = DetectorModel{d / 10.0, 10.0};
        try {
          const auto report = optimal_sensitivity({n, 2}, noise);
          return {report.optimal_phase, report.delta_phi};
        } catch (const NumericError&) {
          return {std::nullopt, std::nullopt};
        }
      };
    }
    case Quantity::kJointMap: {
      const double fixed_n = config.spec.mean_photons;
      return [fixed_n](const std::vector<double>& at) -> Cell {
        NoiseModel noise;
        noise.loss = LossModel{1.0 - at[0], 1.0 - at[0]};
        noise.detector = DetectorModel{at[1] / 10.0, 10.0};
        try {
          const auto report = optimal_sensitivity({fixed_n, 2}, noise);
          return {report.optimal_phase, report.delta_phi};
        } catch (const NumericError&) {
          return {std::nullopt, std::nullopt};
        }
      };
    }
  }
  throw std::invalid_argument("unknown quantity");
}

void parallel_for(int count, const std::function<void(int)>& work) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const int i = next.fetch_add(1);
      if (i >= count) break;
      try {
        work(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        break;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void append_line_number(const std::string& text, std::size_t byte,
                        std::string& message) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  message += " (line " + std::to_string(line) + ")";
}

}  // namespace

std::vector<double> Axis::values() const {
  std::vector<double> out(static_cast<std::size_t>(points));
  if (scale == AxisScale::kLinear) {
    const double step = (stop - start) / (points - 1);
    for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] =
        start + i * step;
  } else {
    const double lstart = std::log(start);
    const double step = (std::log(stop) - lstart) / (points - 1);
    for (int i = 0; i < points; ++i) {
      out[static_cast<std::size_t>(i)] = std::exp(lstart + i * step);
    }
  }
  out.front() = start;
  out.back() = stop;
  return out;
}

SweepConfig parse_config(const std::string& text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string message = e.what();
    append_line_number(text, e.byte, message);
    throw std::invalid_argument(message);
  }

  try {
    if (!document.is_object()) {
      throw std::invalid_argument("configuration must be a JSON object");
    }
    expect_keys(document, "configuration",
                {"quantity", "spec", "noise", "axes", "output"});

    SweepConfig config;
    if (!document.contains("quantity")) {
      throw std::invalid_argument("missing key 'quantity' in configuration");
    }
    config.quantity =
        quantity_from_string(document.at("quantity").get<std::string>());

    if (!document.contains("spec")) {
      throw std::invalid_argument("missing key 'spec' in configuration");
    }
    const json& spec = document.at("spec");
    expect_keys(spec, "spec", {"mean_photons", "order"});
    config.spec.mean_photons = require_number(spec, "spec", "mean_photons");
    config.spec.order = spec.value("order", 2);

    if (document.contains("noise")) {
      const json& noise = document.at("noise");
      expect_keys(noise, "noise", {"loss", "detector"});
      NoiseModel model;
      if (noise.contains("loss")) {
        const json& loss = noise.at("loss");
        expect_keys(loss, "noise.loss",
                    {"transmissivity_a", "transmissivity_b"});
        model.loss = LossModel{
            require_number(loss, "noise.loss", "transmissivity_a"),
            require_number(loss, "noise.loss", "transmissivity_b")};
      }
      if (noise.contains("detector")) {
        const json& detector = noise.at("detector");
        expect_keys(detector, "noise.detector",
                    {"dark_count_rate", "jitter_inflation"});
        model.detector = DetectorModel{
            require_number(detector, "noise.detector", "dark_count_rate"),
            detector.value("jitter_inflation", 10.0)};
      }
      config.noise = model;
    }

    if (!document.contains("axes") || !document.at("axes").is_array() ||
        document.at("axes").empty()) {
      throw std::invalid_argument(
          "configuration requires a non-empty 'axes' array");
    }
    for (const json& entry : document.at("axes")) {
      expect_keys(entry, "axes[]", {"name", "start", "stop", "points",
                                    "scale"});
      Axis axis;
      if (!entry.contains("name")) {
        throw std::invalid_argument("missing key 'name' in axes[]");
      }
      axis.name = entry.at("name").get<std::string>();
      axis.start = require_number(entry, "axis '" + axis.name + "'", "start");
      axis.stop = require_number(entry, "axis '" + axis.name + "'", "stop");
      if (!entry.contains("points") ||
          !entry.at("points").is_number_integer()) {
        throw std::invalid_argument("axis '" + axis.name +
                                    "' requires an integer 'points'");
      }
      axis.points = entry.at("points").get<int>();
      const std::string scale = entry.value("scale", "linear");
      if (scale == "linear") {
        axis.scale = AxisScale::kLinear;
      } else if (scale == "log") {
        axis.scale = AxisScale::kLog;
      } else {
        throw std::invalid_argument("axis '" + axis.name +
                                    "' scale must be 'linear' or 'log'");
      }
      config.axes.push_back(axis);
    }

    if (document.contains("output")) {
      const json& output = document.at("output");
      expect_keys(output, "output", {"path", "format"});
      if (output.contains("path")) {
        config.output_path = output.at("path").get<std::string>();
      }
      const std::string format = output.value("format", "csv");
      if (format == "csv") {
        config.format = OutputFormat::kCsv;
      } else if (format == "json") {
        config.format = OutputFormat::kJson;
      } else {
        throw std::invalid_argument("output format must be 'csv' or 'json'");
      }
    }

    validate_config(config);
    return config;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("invalid configuration: ") +
                                e.what());
  }
}

std::string serialize_config(const SweepConfig& config) {
  json document;
  document["quantity"] = quantity_to_string(config.quantity);
  document["spec"] = {{"mean_photons", config.spec.mean_photons},
                      {"order", config.spec.order}};
  if (config.noise) {
    json noise = json::object();
    if (config.noise->loss) {
      noise["loss"] = {
          {"transmissivity_a", config.noise->loss->transmissivity_a},
          {"transmissivity_b", config.noise->loss->transmissivity_b}};
    }
    if (config.noise->detector) {
      noise["detector"] = {
          {"dark_count_rate", config.noise->detector->dark_count_rate},
          {"jitter_inflation", config.noise->detector->jitter_inflation}};
    }
    document["noise"] = noise;
  }
  document["axes"] = json::array();
  for (const Axis& axis : config.axes) {
    document["axes"].push_back(
        {{"name", axis.name},
         {"start", axis.start},
         {"stop", axis.stop},
         {"points", axis.points},
         {"scale", axis.scale == AxisScale::kLinear ? "linear" : "log"}});
  }
  json output = json::object();
  if (config.output_path) output["path"] = *config.output_path;
  output["format"] = config.format == OutputFormat::kCsv ? "csv" : "json";
  document["output"] = output;
  return document.dump(2);
}

bool SweepTable::all_failed() const {
  if (rows.empty()) return false;
  for (const auto& row : rows) {
    for (std::size_t i = static_cast<std::size_t>(axis_columns);
         i < row.size(); ++i) {
      if (row[i].has_value()) return false;
    }
  }
  return true;
}

SweepTable run_sweep(const SweepConfig& config) {
  validate_config(config);
  const QuantityLayout& layout = layout_for(config.quantity);

  std::vector<std::vector<double>> axis_values;
  axis_values.reserve(config.axes.size());
  long total = 1;
  for (const Axis& axis : config.axes) {
    axis_values.push_back(axis.values());
    total *= axis.points;
  }

  SweepTable table;
  table.axis_columns = static_cast<int>(config.axes.size());
  for (const Axis& axis : config.axes) table.columns.push_back(axis.name);
  for (const std::string& column : layout.value_columns) {
    table.columns.push_back(column);
  }
  table.rows.resize(static_cast<std::size_t>(total));

  const CellFunction cell = make_cell_function(config);
  parallel_for(static_cast<int>(total), [&](int index) {
    std::vector<double> at(axis_values.size());
    long rest = index;
    for (std::size_t a = axis_values.size(); a-- > 0;) {
      const long extent = static_cast<long>(axis_values[a].size());
      at[a] = axis_values[a][static_cast<std::size_t>(rest % extent)];
      rest /= extent;
    }
    Cell values = cell(at);
    std::vector<std::optional<double>> row;
    row.reserve(at.size() + values.size());
    for (double coordinate : at) row.emplace_back(coordinate);
    for (const auto& value : values) row.push_back(value);
    table.rows[static_cast<std::size_t>(index)] = std::move(row);
  });
  return table;
}

FigureRecipe figure_recipe(const std::string& figure_id) {
  auto linear_axis = [](std::string name, double start, double stop,
                        int points) {
    return Axis{std::move(name), start, stop, points, AxisScale::kLinear};
  };
  auto log_axis = [](std::string name, double start, double stop,
                     int points) {
    return Axis{std::move(name), start, stop, points, AxisScale::kLog};
  };
  auto config = [](Quantity quantity, InterferometerSpec spec,
                   std::vector<Axis> axes,
                   std::optional<NoiseModel> noise = std::nullopt) {
    SweepConfig out;
    out.quantity = quantity;
    out.spec = spec;
    out.noise = std::move(noise);
    out.axes = std::move(axes);
    return out;
  };

  FigureRecipe recipe;
  recipe.figure_id = figure_id;
  if (figure_id == "fig2") {
    for (double n : {2.0, 5.0, 10.0}) {
      recipe.sweeps.emplace_back(
          "signal_n" + std::to_string(static_cast<int>(n)),
          config(Quantity::kSignal, {n, 2},
                 {linear_axis("phase", -1.0, 1.0, 2001)}));
    }
  } else if (figure_id == "fig3a") {
    recipe.sweeps.emplace_back(
        "fwhm_linear", config(Quantity::kFwhm, {0.0, 1},
                              {linear_axis("mean_photons", 1.0, 20.0, 191)}));
    recipe.sweeps.emplace_back(
        "fwhm_nonlinear",
        config(Quantity::kFwhm, {0.0, 2},
               {linear_axis("mean_photons", 1.0, 20.0, 191)}));
  } else if (figure_id == "fig3b") {
    recipe.sweeps.emplace_back(
        "coefficient",
        config(Quantity::kCoefficientC, {0.0, 2},
               {linear_axis("mean_photons", 1.0, 20.0, 191)}));
  } else if (figure_id == "fig4") {
    recipe.sweeps.emplace_back(
        "sensitivity",
        config(Quantity::kSensitivity, {0.0, 2},
               {linear_axis("mean_photons", 1.0, 20.0, 96)}));
  } else if (figure_id == "fig5") {
    recipe.sweeps.emplace_back(
        "parity_sensitivity",
        config(Quantity::kSensitivity, {0.0, 2},
               {linear_axis("mean_photons", 1.0, 20.0, 96)}));
    recipe.sweeps.emplace_back(
        "qcrb", config(Quantity::kQcrb, {0.0, 2},
                       {linear_axis("mean_photons", 1.0, 20.0, 96)}));
  } else if (figure_id == "fig6a" || figure_id == "fig7") {
    recipe.sweeps.emplace_back(
        figure_id == "fig6a" ? "fwhm_map" : "sensitivity_map",
        config(Quantity::kLossMap, {10.0, 2},
               {linear_axis("loss_a", 0.0, 0.4, 41),
                linear_axis("loss_b", 0.0, 0.4, 41)}));
  } else if (figure_id == "fig6b") {
    recipe.sweeps.emplace_back(
        "broadening",
        config(Quantity::kBroadening, {0.0, 2},
               {linear_axis("mean_photons", 3.0, 20.0, 18),
                linear_axis("loss", 0.1, 0.4, 4)}));
  } else if (figure_id == "fig9") {
    recipe.sweeps.emplace_back(
        "dark_sensitivity",
        config(Quantity::kDarkSweep, {0.0, 2},
               {linear_axis("mean_photons", 10.0, 20.0, 3),
                log_axis("dark_rate", 1e-7, 1e-1, 61)}));
  } else if (figure_id == "fig10") {
    recipe.sweeps.emplace_back(
        "joint_sensitivity",
        config(Quantity::kJointMap, {10.0, 2},
               {linear_axis("loss", 0.0, 0.4, 41),
                log_axis("dark_rate", 1e-7, 1e-1, 41)}));
  } else {
    throw std::invalid_argument("unknown figure id '" + figure_id + "'");
  }
  return recipe;
}

void write_csv(std::ostream& out, const SweepTable& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) out << ',';
    out << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      if (row[i].has_value()) {
        out << format_double(*row[i]);
      } else {
        out << "NA";
      }
    }
    out << '\n';
  }
}

json to_json(const SweepTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json cells = json::array();
    for (const auto& cell : row) {
      if (cell.has_value()) {
        cells.push_back(*cell);
      } else {
        cells.push_back(nullptr);
      }
    }
    rows.push_back(cells);
  }
  return json{{"columns", table.columns}, {"rows", rows}};
}

namespace {

json noise_to_json(const NoiseModel& noise) {
  json out = json::object();
  if (noise.loss) {
    out["loss"] = {{"transmissivity_a", noise.loss->transmissivity_a},
                   {"transmissivity_b", noise.loss->transmissivity_b}};
  }
  if (noise.detector) {
    out["detector"] = {
        {"dark_count_rate", noise.detector->dark_count_rate},
        {"jitter_inflation", noise.detector->jitter_inflation}};
  }
  return out;
}

}  // namespace

void write_trace_csv(std::ostream& out, const SignalTrace& trace) {
  out << "phase,value\n";
  for (std::size_t i = 0; i < trace.phases.size(); ++i) {
    out << format_double(trace.phases[i]) << ','
        << format_double(trace.values[i]) << '\n';
  }
}

json to_json(const SignalTrace& trace) {
  json points = json::array();
  for (std::size_t i = 0; i < trace.phases.size(); ++i) {
    points.push_back({trace.phases[i], trace.values[i]});
  }
  json out;
  out["spec"] = {{"mean_photons", trace.spec.mean_photons},
                 {"order", trace.spec.order}};
  out["noise"] = trace.noise ? noise_to_json(*trace.noise) : json(nullptr);
  out["truncation_used"] = trace.truncation_used;
  out["points"] = points;
  return out;
}

json to_json(const SensitivityReport& report) {
  json out;
  out["optimal_phase"] = report.optimal_phase;
  out["delta_phi"] = report.delta_phi;
  out["fisher_classical"] = report.fisher_classical;
  out["qcrb"] = report.qcrb ? json(*report.qcrb) : json(nullptr);
  out["scan_window"] = {report.scan_window.first, report.scan_window.second};
  return out;
}

json to_json(const ResolutionReport& report) {
  json out;
  out["fwhm"] = report.fwhm;
  out["peak_value"] = report.peak_value;
  out["peak_phase"] = report.peak_phase;
  out["coefficient_c"] =
      report.coefficient_c ? json(*report.coefficient_c) : json(nullptr);
  out["broadening_cb"] =
      report.broadening_cb ? json(*report.broadening_cb) : json(nullptr);
  return out;
}

json to_json(const QfiReport& report) {
  json components = json::array();
  for (const auto& [u, value] : report.per_component_sample) {
    components.push_back({u, value});
  }
  json out;
  out["mean_photons"] = report.mean_photons;
  out["qfi"] = report.qfi;
  out["qcrb"] = report.qcrb;
  out["terms_used"] = report.terms_used;
  out["per_component_sample"] = components;
  return out;
}

int worker_count() {
  if (const char* env = std::getenv("KERRMET_WORKERS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value >= 1 && value <= 1024) {
      return static_cast<int>(value);
    }
  }
  const unsigned hardware = std::thread::hardware_concurrency();
  return hardware > 0 ? static_cast<int>(hardware) : 1;
}

}  // namespace kerrmet::sweep
