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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kerrmet/errors.hpp"
#include "kerrmet/metrology.hpp"
#include "kerrmet/qfi.hpp"
#include "kerrmet/signal.hpp"
#include "kerrmet/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_table(const kerrmet::sweep::SweepTable& table,
                 kerrmet::sweep::OutputFormat format,
                 const std::optional<std::string>& path) {
  std::ostringstream body;
  if (format == kerrmet::sweep::OutputFormat::kCsv) {
    kerrmet::sweep::write_csv(body, table);
  } else {
    body << kerrmet::sweep::to_json(table).dump(2) << '\n';
  }
  if (path) {
    std::ofstream out(*path, std::ios::binary);
    if (!out) {
      throw std::invalid_argument("cannot write '" + *path + "'");
    }
    out << body.str();
  } else {
    std::cout << body.str();
  }
}

int run_sweep_command(const std::string& config_path,
                      const std::optional<std::string>& out_override,
                      const std::optional<std::string>& format_override) {
  kerrmet::sweep::SweepConfig config =
      kerrmet::sweep::parse_config(read_file(config_path));
  if (format_override) {
    config.format = *format_override == "json"
                        ? kerrmet::sweep::OutputFormat::kJson
                        : kerrmet::sweep::OutputFormat::kCsv;
  }
  const auto table = kerrmet::sweep::run_sweep(config);
  write_table(table, config.format,
              out_override ? out_override : config.output_path);
  return table.all_failed() ? kExitNumeric : kExitOk;
}

int run_figure_command(const std::string& figure_id, const std::string& dir,
                       const std::string& format) {
  const auto recipe = kerrmet::sweep::figure_recipe(figure_id);
  std::filesystem::create_directories(dir);
  const auto fmt = format == "json" ? kerrmet::sweep::OutputFormat::kJson
                                    : kerrmet::sweep::OutputFormat::kCsv;
  const std::string extension = format == "json" ? ".json" : ".csv";
  bool all_failed = true;
  for (const auto& [name, config] : recipe.sweeps) {
    const auto table = kerrmet::sweep::run_sweep(config);
    const std::string path =
        (std::filesystem::path(dir) / (figure_id + "_" + name + extension))
            .string();
    write_table(table, fmt, path);
    std::cout << path << '\n';
    all_failed = all_failed && table.all_failed();
  }
  return all_failed ? kExitNumeric : kExitOk;
}

int run_qcrb_command(double mean_photons) {
  const auto report = kerrmet::qfi_phase_averaged(mean_photons, true);
  std::cout << kerrmet::sweep::to_json(report).dump(2) << '\n';
  return kExitOk;
}

int run_signal_command(double mean_photons, int order, double loss_a,
                       double loss_b, double dark_rate, double phase_min,
                       double phase_max, int points,
                       const std::optional<std::string>& out_path,
                       const std::string& format) {
  if (points < 1) {
    throw std::invalid_argument("--points must be >= 1");
  }
  if (points > 1 && !(phase_min < phase_max)) {
    throw std::invalid_argument("--phase-min must be below --phase-max");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  if (points == 1) {
    grid[0] = phase_min;
  } else {
    const double step = (phase_max - phase_min) / (points - 1);
    for (int i = 0; i < points; ++i) {
      grid[static_cast<std::size_t>(i)] = phase_min + i * step;
    }
    grid.back() = phase_max;
  }

  std::optional<kerrmet::NoiseModel> noise;
  if (loss_a > 0.0 || loss_b > 0.0 || dark_rate > 0.0) {
    kerrmet::NoiseModel model;
    if (loss_a > 0.0 || loss_b > 0.0) {
      model.loss = kerrmet::LossModel{1.0 - loss_a, 1.0 - loss_b};
    }
    if (dark_rate > 0.0) {
      model.detector = kerrmet::DetectorModel{dark_rate, 10.0};
    }
    noise = model;
  }
  const auto trace =
      kerrmet::sample_trace({mean_photons, order}, noise, grid);

  std::ostringstream body;
  if (format == "json") {
    body << kerrmet::sweep::to_json(trace).dump(2) << '\n';
  } else {
    kerrmet::sweep::write_trace_csv(body, trace);
  }
  if (out_path) {
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) {
      throw std::invalid_argument("cannot write '" + *out_path + "'");
    }
    out << body.str();
  } else {
    std::cout << body.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Nonlinear (Kerr) phase estimation with parity detection: signals, "
      "resolution, sensitivity, and quantum bounds"};
  app.require_subcommand(1);

  // sweep
  auto* sweep_cmd =
      app.add_subcommand("sweep", "run a sweep described by a JSON config");
  std::string config_path;
  std::string sweep_out;
  std::string sweep_format;
  sweep_cmd->add_option("--config", config_path, "configuration file")
      ->required();
  sweep_cmd->add_option("--out", sweep_out, "output path (overrides config)");
  sweep_cmd->add_option("--format", sweep_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // figure
  auto* figure_cmd = app.add_subcommand(
      "figure", "run a built-in dataset recipe (fig2 ... fig10)");
  std::string figure_id;
  std::string figure_dir;
  std::string figure_format = "csv";
  figure_cmd->add_option("id", figure_id, "figure id, e.g. fig2")->required();
  figure_cmd->add_option("--out", figure_dir, "output directory")->required();
  figure_cmd->add_option("--format", figure_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // qcrb
  auto* qcrb_cmd = app.add_subcommand(
      "qcrb", "phase-averaged quantum Fisher information and bound");
  double qcrb_n = 0.0;
  qcrb_cmd->add_option("--n", qcrb_n, "mean photon number")->required();

  // signal
  auto* signal_cmd =
      app.add_subcommand("signal", "sample a parity signal trace");
  double signal_n = 0.0;
  int signal_k = 2;
  double loss_a = 0.0;
  double loss_b = 0.0;
  double dark_rate = 0.0;
  double phase_min = 0.0;
  double phase_max = 0.0;
  int points = 0;
  std::string signal_out;
  std::string signal_format = "csv";
  signal_cmd->add_option("--n", signal_n, "mean photon number")->required();
  signal_cmd->add_option("--k", signal_k, "phase order, 1 or 2")
      ->check(CLI::IsMember({1, 2}));
  signal_cmd->add_option("--loss-a", loss_a, "loss 1 - eta in arm A");
  signal_cmd->add_option("--loss-b", loss_b, "loss 1 - eta in arm B");
  signal_cmd->add_option("--dark-rate", dark_rate,
                         "dark counts per gate (jitter inflation 10x)");
  signal_cmd->add_option("--phase-min", phase_min, "grid start")->required();
  signal_cmd->add_option("--phase-max", phase_max, "grid stop")->required();
  signal_cmd->add_option("--points", points, "grid size")->required();
  signal_cmd->add_option("--out", signal_out, "output path (default stdout)");
  signal_cmd->add_option("--format", signal_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep_cmd->parsed()) {
      return run_sweep_command(
          config_path,
          sweep_out.empty() ? std::nullopt : std::optional(sweep_out),
          sweep_format.empty() ? std::nullopt : std::optional(sweep_format));
    }
    if (figure_cmd->parsed()) {
      return run_figure_command(figure_id, figure_dir, figure_format);
    }
    if (qcrb_cmd->parsed()) {
      return run_qcrb_command(qcrb_n);
    }
    if (signal_cmd->parsed()) {
      return run_signal_command(
          signal_n, signal_k, loss_a, loss_b, dark_rate, phase_min, phase_max,
          points, signal_out.empty() ? std::nullopt : std::optional(signal_out),
          signal_format);
    }
  } catch (const kerrmet::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
