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
//
// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kerrmet/metrology.hpp"
#include "kerrmet/qfi.hpp"
#include "kerrmet/signal.hpp"
#include "kerrmet/sweep.hpp"
#include "oracles.hpp"

namespace {

using kerrmet::broadening_coefficient;
using kerrmet::DetectorModel;
using kerrmet::fwhm;
using kerrmet::FwhmSearchConfig;
using kerrmet::InterferometerSpec;
using kerrmet::LossModel;
using kerrmet::NoiseModel;
using kerrmet::optimal_sensitivity;
using kerrmet::parity_ideal;
using kerrmet::parity_linear_reference;
using kerrmet::parity_lossy;
using kerrmet::ParitySignal;
using kerrmet::resolution_coefficient;
using kerrmet::SensitivityReport;

std::string format(const char* fmt, double a, double b = 0.0,
                   double c = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), fmt, a, b, c);
  return buffer;
}

class Harness {
 public:
  void run(int id, const std::string& title,
           const std::function<void(std::vector<std::string>&)>& body) {
    std::vector<std::string> failures;
    const auto start = std::chrono::steady_clock::now();
    try {
      body(failures);
    } catch (const std::exception& e) {
      failures.push_back(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start)
            .count();
    if (failures.empty()) {
      std::printf("criterion %2d PASS (%6.2f s): %s\n", id, seconds,
                  title.c_str());
    } else {
      ++failed_;
      std::printf("criterion %2d FAIL (%6.2f s): %s\n", id, seconds,
                  title.c_str());
      for (std::size_t i = 0; i < failures.size() && i < 4; ++i) {
        std::printf("               - %s\n", failures[i].c_str());
      }
      if (failures.size() > 4) {
        std::printf("               - ... and %zu more\n",
                    failures.size() - 4);
      }
    }
    std::fflush(stdout);
  }

  int failed() const { return failed_; }

 private:
  int failed_ = 0;
};

NoiseModel loss_noise(double loss_a, double loss_b) {
  NoiseModel noise;
  noise.loss = LossModel{1.0 - loss_a, 1.0 - loss_b};
  return noise;
}

NoiseModel dark_noise(double effective_rate) {
  NoiseModel noise;
  noise.detector = DetectorModel{effective_rate / 10.0, 10.0};
  return noise;
}

}  // namespace

int main() {
  Harness harness;
  // delta_phi reports shared between criteria 4 and 5.
  std::map<double, SensitivityReport> ideal_reports;

  harness.run(1, "peak normalization at phi = 0", [](auto& failures) {
    for (double n : {1.0, 2.0, 5.0, 10.0, 20.0}) {
      const double peak = parity_ideal({n, 2}, 0.0);
      if (std::abs(peak - 1.0) > 1e-10) {
        failures.push_back(format("N=%g: peak=%.12g", n, peak));
      }
    }
  });

  harness.run(2, "linear-protocol signal matches its closed form",
              [](auto& failures) {
                std::mt19937 rng(20260809);
                std::uniform_real_distribution<double> photons(0.0, 20.0);
                std::uniform_real_distribution<double> phases(
                    -2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
                for (int i = 0; i < 1000; ++i) {
                  const double n = photons(rng);
                  const double phi = phases(rng);
                  const double series = parity_ideal({n, 1}, phi);
                  const double closed = parity_linear_reference(n, phi);
                  if (std::abs(series - closed) > 1e-10) {
                    failures.push_back(format(
                        "N=%.6g phi=%.6g: |diff|=%.3g", n, phi,
                        std::abs(series - closed)));
                  }
                }
              });

  harness.run(3, "QFI component sum equals closed form and brute force",
              [](auto& failures) {
                for (double n : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0}) {
                  const double sum = kerrmet::qfi_phase_averaged(n).qfi;
                  const double closed = kerrmet::qfi_closed_form(n);
                  if (std::abs(sum - closed) > 1e-8 * closed) {
                    failures.push_back(
                        format("N=%g: sum=%.12g closed=%.12g", n, sum,
                               closed));
                  }
                }
                for (int u = 0; u <= 50; ++u) {
                  const double brute =
                      static_cast<double>(
                          oracles::qfi_component_brute_doubled(u)) /
                      2.0;
                  if (kerrmet::qfi_component(u) != brute) {
                    failures.push_back(
                        format("u=%g: component %.17g != brute %.17g",
                               static_cast<double>(u),
                               kerrmet::qfi_component(u), brute));
                  }
                }
              });

  harness.run(4, "optimal sensitivity in the sub-Heisenberg window",
              [&ideal_reports](auto& failures) {
                for (double n = 2.0; n <= 20.0; n += 1.0) {
                  const auto report = optimal_sensitivity({n, 2});
                  ideal_reports[n] = report;
                  const double lo = std::pow(n, -2.0);
                  const double hi = 1.0 / n;
                  if (!(report.delta_phi > lo && report.delta_phi < hi)) {
                    failures.push_back(format(
                        "N=%g: delta_phi=%.6g outside (N^-2=%.6g, N^-1)",
                        n, report.delta_phi, lo));
                  }
                }
                for (double n : {1.0, 1.5}) {
                  const auto report = optimal_sensitivity({n, 2});
                  ideal_reports[n] = report;
                  if (!(report.delta_phi < std::pow(n, -2.0))) {
                    failures.push_back(
                        format("N=%g: delta_phi=%.6g does not beat N^-2",
                               n, report.delta_phi));
                  }
                }
              });

  harness.run(
      5, "parity sensitivity approaches the quantum Cramer-Rao bound",
      [&ideal_reports](auto& failures) {
        for (const auto& [n, report] : ideal_reports) {
          const double bound = kerrmet::qcrb(n);
          if (report.delta_phi < bound - 1e-9) {
            failures.push_back(format(
                "N=%g: delta_phi=%.9g below the bound %.9g", n,
                report.delta_phi, bound));
          }
          if (n >= 2.0 && report.delta_phi / bound > 1.25) {
            failures.push_back(
                format("N=%g: ratio %.4f exceeds 1.25", n,
                       report.delta_phi / bound));
          }
        }
      });

  harness.run(6, "resolution advantage grows and C(10) is near 10",
              [](auto& failures) {
                double previous = 0.0;
                for (double n = 2.0; n <= 20.0; n += 2.0) {
                  const double c = resolution_coefficient(n);
                  if (c <= previous) {
                    failures.push_back(format(
                        "C(%g)=%.4f not above C(previous)=%.4f", n, c,
                        previous));
                  }
                  previous = c;
                }
                const double c10 = resolution_coefficient(10.0);
                if (!(c10 >= 8.0 && c10 <= 12.5)) {
                  failures.push_back(
                      format("C(10)=%.4f outside [8, 12.5]", c10));
                }
              });

  harness.run(7, "loss robustness of the resolution", [](auto& failures) {
    const double cb = broadening_coefficient(10.0, 0.4);
    if (!(cb >= 2.0 && cb <= 2.3)) {
      failures.push_back(format("C_B(10, 0.4)=%.4f outside [2.0, 2.3]", cb));
    }
    double lo = 1e300;
    double hi = 0.0;
    for (int n = 3; n <= 20; ++n) {
      const double value = broadening_coefficient(static_cast<double>(n), 0.4);
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
    if ((hi - lo) / lo >= 0.10) {
      failures.push_back(format(
          "C_B(N, 0.4) spans [%.4f, %.4f]: variation above 10%%", lo, hi));
    }
    for (double eta : {0.9, 0.8, 0.7, 0.6}) {
      const double peak = parity_lossy({10.0, 2}, {eta, eta}, 0.0);
      if (std::abs(peak - 1.0) > 1e-10) {
        failures.push_back(
            format("equal-loss peak eta=%g: %.12g != 1", eta, peak));
      }
    }
    for (double eta_b : {0.9, 0.75, 0.6}) {
      const double peak = parity_lossy({10.0, 2}, {1.0, eta_b}, 0.0);
      const double closed =
          std::exp(-10.0 * std::pow(1.0 - std::sqrt(eta_b), 2) / 2.0);
      if (std::abs(peak - closed) > 1e-10) {
        failures.push_back(format(
            "unequal-loss peak eta_b=%g: |diff|=%.3g", eta_b,
            std::abs(peak - closed)));
      }
    }
  });

  harness.run(
      8, "sub-Heisenberg sensitivity across the loss plane (11x11, N=10)",
      [](auto& failures) {
        for (int i = 0; i <= 10; ++i) {
          for (int j = 0; j <= 10; ++j) {
            const double loss_a = 0.04 * i;
            const double loss_b = 0.04 * j;
            const auto report =
                optimal_sensitivity({10.0, 2}, loss_noise(loss_a, loss_b));
            if (!(report.delta_phi < 0.1)) {
              failures.push_back(format(
                  "L=(%.2f, %.2f): delta_phi=%.6g >= 0.1", loss_a, loss_b,
                  report.delta_phi));
            }
          }
        }
      });

  harness.run(9, "detector insensitivity below d = 1e-3", [](auto& failures) {
    for (double n : {10.0, 15.0, 20.0}) {
      const double base = optimal_sensitivity({n, 2}).delta_phi;
      for (double d : {1e-7, 1e-6, 1e-5, 1e-4, 1e-3}) {
        const double with_dark =
            optimal_sensitivity({n, 2}, dark_noise(d)).delta_phi;
        if (!(with_dark / base - 1.0 < 0.01)) {
          failures.push_back(format(
              "N=%g d=%.0e: degradation %.3f%% >= 1%%", n, d,
              100.0 * (with_dark / base - 1.0)));
        }
      }
      double previous = 0.0;
      for (double d : {1e-2, 3.1622776601683794e-2, 1e-1}) {
        const double with_dark =
            optimal_sensitivity({n, 2}, dark_noise(d)).delta_phi;
        if (!(with_dark > previous)) {
          failures.push_back(format(
              "N=%g d=%.0e: degradation not strictly increasing", n, d));
        }
        previous = with_dark;
      }
    }

    // FWHM and visibility do not move under the detector factor.
    const ParitySignal raw = ParitySignal::ideal({10.0, 2});
    const ParitySignal degraded =
        ParitySignal::with_noise({10.0, 2}, dark_noise(0.05));
    const auto config = FwhmSearchConfig::for_mean_photons(10.0);
    const double raw_width =
        fwhm([&](double p) { return raw.value(p); }, config).fwhm;
    const double degraded_width =
        fwhm([&](double p) { return degraded.value(p); }, config).fwhm;
    if (std::abs(raw_width - degraded_width) > 1e-9) {
      failures.push_back(format("FWHM moved: %.12g -> %.12g", raw_width,
                                degraded_width));
    }
    std::vector<double> grid(2048);
    for (int i = 0; i < 2048; ++i) {
      grid[static_cast<std::size_t>(i)] =
          2.0 * std::numbers::pi * i / 2048.0;
    }
    const double v_raw = kerrmet::visibility(
        kerrmet::sample_trace({10.0, 2}, std::nullopt, grid));
    const double v_degraded = kerrmet::visibility(
        kerrmet::sample_trace({10.0, 2}, dark_noise(0.05), grid));
    if (std::abs(v_raw - v_degraded) > 1e-9) {
      failures.push_back(
          format("visibility moved: %.12g -> %.12g", v_raw, v_degraded));
    }
  });

  harness.run(10, "determinism and refinement stability", [](auto& failures) {
    const auto config = kerrmet::sweep::parse_config(R"({
      "quantity": "sensitivity",
      "spec": {"mean_photons": 0},
      "axes": [{"name": "mean_photons", "start": 2, "stop": 6, "points": 3}]
    })");
    std::ostringstream first;
    kerrmet::sweep::write_csv(first, kerrmet::sweep::run_sweep(config));
    std::ostringstream second;
    kerrmet::sweep::write_csv(second, kerrmet::sweep::run_sweep(config));
    if (first.str() != second.str()) {
      failures.push_back("two identical sweeps produced different bytes");
    }

    kerrmet::SensitivitySearchConfig fine;
    fine.grid_points_per_photon = 4000;
    const double coarse = optimal_sensitivity({5.0, 2}).delta_phi;
    const double refined =
        optimal_sensitivity({5.0, 2}, std::nullopt, fine).delta_phi;
    if (std::abs(coarse - refined) >= 1e-8) {
      failures.push_back(format(
          "halving the sensitivity grid moved delta_phi by %.3g",
          std::abs(coarse - refined)));
    }

    const ParitySignal signal = ParitySignal::ideal({5.0, 2});
    auto width_config = FwhmSearchConfig::for_mean_photons(5.0);
    const double coarse_width =
        fwhm([&](double p) { return signal.value(p); }, width_config).fwhm;
    width_config.scan_step /= 2.0;
    const double fine_width =
        fwhm([&](double p) { return signal.value(p); }, width_config).fwhm;
    if (std::abs(coarse_width - fine_width) >= 1e-8) {
      failures.push_back(format("halving the FWHM step moved it by %.3g",
                                std::abs(coarse_width - fine_width)));
    }
  });

  std::printf("%d of 10 criteria failed\n", harness.failed());
  return harness.failed();
}
