// Copyright 2026 The ShotQDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// shotqdp: privacy budgets for finite-shot quantum measurements.
//
//   shotqdp compute --d 0.1 --n 10 --mu 0.15
//   shotqdp sweep --d 0.1 --mu 0.15 --axis n --grid 5:100:1
//   shotqdp figures --which all --out figures/
//   shotqdp audit --d 0.1 --n 10 --trials 100000 --seed 42

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shotqdp/cli.h"

namespace {

using shotqdp::cli::RunConfig;

// Raw flag values; only flags given on the command line are applied over the
// config file.
struct Flags {
  std::string config_path;
  std::optional<double> d, mu, p, c, delta, beta, eps;
  std::optional<int> r, n, dim;
  std::optional<std::string> regime, convention, axis, grid, out, format,
      which;
  std::optional<uint64_t> seed;
  std::optional<int64_t> trials;
  std::vector<double> rho_diag, anchor_diag;
  std::vector<int> projector;
};

void AddOptions(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "Flat JSON config file")
      ->check(CLI::ExistingFile);
  app->add_option("--d", f.d, "Trace-distance radius of neighboring states");
  app->add_option("--r", f.r, "Projector rank");
  app->add_option("--n", f.n, "Number of shots");
  app->add_option("--mu", f.mu, "Minimum projector expectation");
  app->add_option("--p", f.p, "Depolarizing strength");
  app->add_option("--dim", f.dim, "Hilbert space dimension");
  app->add_option("--c", f.c, "Tail cut on the sample mean");
  app->add_option("--delta", f.delta, "Target delta");
  app->add_option("--beta", f.beta, "Confidence level");
  app->add_option("--regime", f.regime, "noiseless or depolarizing");
  app->add_option("--convention", f.convention, "paper or normalized");
  app->add_option("--axis", f.axis, "Sweep axis: n, p, c, delta, d, mu");
  app->add_option("--grid", f.grid, "start:stop:step or start:stop:logN");
  app->add_option("--seed", f.seed, "Random seed");
  app->add_option("--out", f.out, "Output file (directory for figures all)");
  app->add_option("--format", f.format, "csv or json");
}

template <typename T>
void Overlay(const std::optional<T>& flag, std::optional<T>& field) {
  if (flag.has_value()) field = flag;
}

int BadConfig(const std::string& message) {
  std::cerr << "error: BadConfig: " << message << "\n";
  return shotqdp::cli::kExitBadConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy budgets for finite-shot quantum measurements"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* compute = app.add_subcommand("compute", "Evaluate one budget");
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one parameter");
  CLI::App* figures =
      app.add_subcommand("figures", "Write the reference figure tables");
  CLI::App* audit =
      app.add_subcommand("audit", "Check a state pair against the budget");
  for (CLI::App* sub : {compute, sweep, figures, audit}) AddOptions(sub, f);
  figures->add_option("--which", f.which,
                      "fig3, fig4a, fig4b, fig5a, fig5b or all");
  audit->add_option("--trials", f.trials, "Monte Carlo trials (0 skips)");
  audit->add_option("--eps", f.eps, "Epsilon for the Monte Carlo check");
  audit->add_option("--rho-diag", f.rho_diag, "Diagonal of rho");
  audit->add_option("--anchor-diag", f.anchor_diag,
                    "Diagonal of the state sigma is pulled toward");
  audit->add_option("--projector", f.projector,
                    "Basis indices spanned by the projector");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : shotqdp::cli::kExitBadConfig;
  }

  RunConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream file(f.config_path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    if (absl::Status s = shotqdp::cli::ApplyConfigJson(buffer.str(), cfg);
        !s.ok()) {
      std::cerr << "error: " << s.message() << "\n";
      return shotqdp::cli::kExitBadConfig;
    }
  }

  if (compute->parsed()) cfg.command = shotqdp::cli::Command::kCompute;
  if (sweep->parsed()) cfg.command = shotqdp::cli::Command::kSweep;
  if (figures->parsed()) cfg.command = shotqdp::cli::Command::kFigures;
  if (audit->parsed()) cfg.command = shotqdp::cli::Command::kAudit;

  Overlay(f.d, cfg.d);
  Overlay(f.r, cfg.r);
  Overlay(f.n, cfg.n);
  Overlay(f.mu, cfg.mu);
  Overlay(f.p, cfg.p);
  Overlay(f.dim, cfg.dim);
  Overlay(f.beta, cfg.beta);
  Overlay(f.eps, cfg.eps);
  if (f.c.has_value()) {
    cfg.c = f.c;
    if (!f.delta.has_value()) cfg.delta.reset();
  }
  if (f.delta.has_value()) {
    cfg.delta = f.delta;
    if (!f.c.has_value()) cfg.c.reset();
  }
  if (f.regime.has_value()) {
    auto regime = shotqdp::ParseRegime(*f.regime);
    if (!regime.ok()) return BadConfig(*f.regime + " is not a regime");
    cfg.regime = *regime;
  }
  if (f.convention.has_value()) {
    auto convention = shotqdp::ParseConvention(*f.convention);
    if (!convention.ok()) {
      return BadConfig(*f.convention + " is not a delta convention");
    }
    cfg.convention = *convention;
  }
  if (f.grid.has_value() || f.axis.has_value()) {
    std::string axis = f.axis.value_or(cfg.grid ? cfg.grid->axis : "");
    if (!f.grid.has_value()) {
      return BadConfig("--axis needs --grid");
    }
    auto grid = shotqdp::cli::ParseGrid(axis, *f.grid);
    if (!grid.ok()) {
      std::cerr << "error: " << grid.status().message() << "\n";
      return shotqdp::cli::kExitBadConfig;
    }
    cfg.grid = *grid;
  }
  if (f.seed.has_value()) cfg.seed = *f.seed;
  if (f.out.has_value()) cfg.output_path = *f.out;
  if (f.format.has_value()) {
    auto format = shotqdp::cli::ParseFormat(*f.format);
    if (!format.ok()) return BadConfig(*f.format + " is not a format");
    cfg.format = *format;
  }
  if (f.which.has_value()) cfg.which = *f.which;
  if (f.trials.has_value()) cfg.trials = *f.trials;
  if (!f.rho_diag.empty()) cfg.rho_diag = f.rho_diag;
  if (!f.anchor_diag.empty()) cfg.anchor_diag = f.anchor_diag;
  if (!f.projector.empty()) cfg.projector = f.projector;

  return shotqdp::cli::Run(cfg, std::cout, std::cerr);
}
