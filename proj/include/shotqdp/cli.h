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

// Batch command surface: compute a single budget, sweep one parameter,
// regenerate the reference figure tables, or audit a concrete state pair.
//
// The Render* functions are pure and return the exact bytes a command
// writes; the Run* functions add file output and map failures onto exit
// codes.

#ifndef SHOTQDP_CLI_H_
#define SHOTQDP_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "shotqdp/budget.h"

namespace shotqdp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitAuditFailed = 3;

enum class Command { kCompute, kSweep, kFigures, kAudit };
enum class OutputFormat { kCsv, kJson };

// One sweep axis. Either `step` or `log_points` is set.
struct GridSpec {
  std::string axis;
  double start = 0.0;
  double stop = 0.0;
  std::optional<double> step;
  std::optional<int> log_points;
};

// Parses "start:stop:step" or "start:stop:logN" for the named axis, which
// must be one of n, p, c, delta, d, mu.
absl::StatusOr<GridSpec> ParseGrid(std::string_view axis,
                                   std::string_view text);
absl::StatusOr<std::vector<double>> GridValues(const GridSpec& grid);

struct RunConfig {
  Command command = Command::kCompute;

  // Mirrors BudgetInputs; unset fields take command-specific defaults.
  std::optional<double> d;
  std::optional<int> r;
  std::optional<int> n;
  std::optional<double> mu;
  std::optional<double> p;
  std::optional<int> dim;
  std::optional<double> c;
  std::optional<double> delta;
  std::optional<double> beta;
  std::optional<Regime> regime;
  DeltaConvention convention = DeltaConvention::kUnnormalized;

  std::optional<GridSpec> grid;
  uint64_t seed = 42;
  // Empty means standard output (compute, sweep, audit). For figures it is
  // the CSV file, or the directory when `which` is "all".
  std::string output_path;
  std::optional<OutputFormat> format;

  // figures
  std::string which = "all";

  // audit: diagonal input state, diagonal anchor the neighbor is pulled
  // toward, and the computational basis indices spanned by the projector.
  std::vector<double> rho_diag;
  std::vector<double> anchor_diag;
  std::vector<int> projector;
  int64_t trials = 100000;
  // Privacy level the Monte Carlo audit evaluates; defaults to the theorem
  // epsilon.
  std::optional<double> eps;
};

absl::StatusOr<Command> ParseCommand(std::string_view name);
absl::StatusOr<OutputFormat> ParseFormat(std::string_view name);

// Overlays the fields of a flat JSON object onto `cfg`.
absl::Status ApplyConfigJson(std::string_view json_text, RunConfig& cfg);

// Fixed-precision rendering shared by every output: 10 significant digits.
std::string FormatNumber(double value);
// Rounds to the value FormatNumber prints, so JSON and CSV agree.
double RoundForOutput(double value);

// Picks the theorem from the inputs: depolarizing when the regime says so,
// (epsilon, delta) when c or delta is supplied.
absl::StatusOr<PrivacyReport> ComputeBudget(const BudgetInputs& in,
                                            Regime regime);

absl::StatusOr<BudgetInputs> ToBudgetInputs(const RunConfig& cfg);

absl::StatusOr<std::string> RenderCompute(const RunConfig& cfg);
absl::StatusOr<std::string> RenderSweep(const RunConfig& cfg);

// Reference tables: fig3, fig4a, fig4b, fig5a, fig5b.
inline constexpr std::string_view kFigureNames[] = {"fig3", "fig4a", "fig4b",
                                                    "fig5a", "fig5b"};
absl::StatusOr<std::string> RenderFigure(std::string_view which,
                                         const RunConfig& cfg);

struct AuditOutcome {
  std::string text;
  // A dominance check the preconditions entitled us to expect failed.
  bool dominance_failed = false;
};
absl::StatusOr<AuditOutcome> RenderAudit(const RunConfig& cfg);

// Executes cfg.command and returns the process exit code. Diagnostics go to
// `err`; command output goes to cfg.output_path or `out`.
int Run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace shotqdp::cli

#endif  // SHOTQDP_CLI_H_
