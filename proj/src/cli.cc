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

#include "shotqdp/cli.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "shotqdp/quantum_core.h"
#include "shotqdp/verify.h"

namespace shotqdp::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kAxisNames[] = {"n", "p", "c", "delta", "d", "mu"};

bool IsAxisName(std::string_view axis) {
  for (std::string_view name : kAxisNames) {
    if (name == axis) return true;
  }
  return false;
}

absl::string_view Av(std::string_view s) { return {s.data(), s.size()}; }

absl::Status BadConfig(std::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat("BadConfig: ", Av(message)));
}

Json Number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return RoundForOutput(value);
}

template <typename T>
Json Optional(const std::optional<T>& value) {
  if (!value.has_value()) return nullptr;
  if constexpr (std::is_floating_point_v<T>) {
    return Number(*value);
  } else {
    return *value;
  }
}

std::string WarningList(const std::vector<Warning>& warnings,
                        std::string_view separator) {
  std::vector<std::string> names;
  for (Warning w : warnings) names.emplace_back(WarningName(w));
  return absl::StrJoin(names, Av(separator));
}

Json WarningArray(const std::vector<Warning>& warnings) {
  Json out = Json::array();
  for (Warning w : warnings) out.push_back(std::string(WarningName(w)));
  return out;
}

bool IsApproximate(const BudgetInputs& in) {
  return in.c.has_value() || in.delta.has_value();
}

std::string TheoremName(const BudgetInputs& in, Regime regime) {
  return absl::StrCat(IsApproximate(in) ? "epsilon-delta-" : "epsilon-",
                      Av(RegimeName(regime)));
}

Regime ResolveRegime(const RunConfig& cfg) {
  if (cfg.regime.has_value()) return *cfg.regime;
  return cfg.p.has_value() ? Regime::kDepolarizing : Regime::kNoiseless;
}

Json InputsJson(const BudgetInputs& in) {
  Json j;
  j["d"] = Number(in.d);
  j["r"] = in.r;
  j["n"] = in.n;
  j["mu"] = Number(in.mu);
  j["p"] = Optional(in.p);
  j["dim"] = Optional(in.dim);
  j["c"] = Optional(in.c);
  j["delta"] = Optional(in.delta);
  j["beta"] = Number(in.beta);
  j["convention"] = std::string(ConventionName(in.convention));
  return j;
}

std::string CsvCell(const std::optional<double>& value) {
  return value.has_value() ? FormatNumber(*value) : "";
}

absl::Status SetAxis(RunConfig& cfg, std::string_view axis, double value) {
  if (axis == "n") {
    if (value < 1 || value != std::floor(value)) {
      return BadConfig(absl::StrFormat("shot count %g is not a positive "
                                       "integer",
                                       value));
    }
    cfg.n = static_cast<int>(value);
  } else if (axis == "p") {
    cfg.p = value;
  } else if (axis == "c") {
    cfg.c = value;
    cfg.delta.reset();
  } else if (axis == "delta") {
    cfg.delta = value;
    cfg.c.reset();
  } else if (axis == "d") {
    cfg.d = value;
  } else if (axis == "mu") {
    cfg.mu = value;
  } else {
    return BadConfig(absl::StrFormat("unknown sweep axis '%s'", Av(axis)));
  }
  return absl::OkStatus();
}

struct SweepRow {
  double axis_value;
  PrivacyReport report;
};

struct SweepResult {
  std::string axis;
  std::string theorem;
  std::vector<SweepRow> rows;
};

absl::StatusOr<SweepResult> Sweep(const RunConfig& base,
                                  const GridSpec& grid) {
  absl::StatusOr<std::vector<double>> values = GridValues(grid);
  if (!values.ok()) return values.status();
  SweepResult result;
  result.axis = grid.axis;
  for (double value : *values) {
    RunConfig point = base;
    if (absl::Status s = SetAxis(point, grid.axis, value); !s.ok()) return s;
    absl::StatusOr<BudgetInputs> in = ToBudgetInputs(point);
    if (!in.ok()) return in.status();
    const Regime regime = ResolveRegime(point);
    absl::StatusOr<PrivacyReport> report = ComputeBudget(*in, regime);
    if (!report.ok()) {
      return absl::Status(report.status().code(),
                          absl::StrFormat("%s (at %s = %s)",
                                          report.status().message(),
                                          grid.axis, FormatNumber(value)));
    }
    if (result.theorem.empty()) result.theorem = TheoremName(*in, regime);
    result.rows.push_back({value, *std::move(report)});
  }
  return result;
}

enum class Column { kAxis, kC, kEpsilon, kDelta, kWarnings };

std::string RenderCsv(const SweepResult& sweep,
                      const std::vector<Column>& columns) {
  std::vector<std::string> header;
  for (Column col : columns) {
    switch (col) {
      case Column::kAxis:
        header.push_back(sweep.axis);
        break;
      case Column::kC:
        header.push_back("c");
        break;
      case Column::kEpsilon:
        header.push_back("epsilon");
        break;
      case Column::kDelta:
        header.push_back("delta");
        break;
      case Column::kWarnings:
        header.push_back("warnings");
        break;
    }
  }
  std::string out = absl::StrCat(absl::StrJoin(header, ","), "\n");
  for (const SweepRow& row : sweep.rows) {
    std::vector<std::string> cells;
    for (Column col : columns) {
      switch (col) {
        case Column::kAxis:
          cells.push_back(FormatNumber(row.axis_value));
          break;
        case Column::kC:
          cells.push_back(CsvCell(row.report.c));
          break;
        case Column::kEpsilon:
          cells.push_back(FormatNumber(row.report.epsilon));
          break;
        case Column::kDelta:
          cells.push_back(FormatNumber(row.report.delta));
          break;
        case Column::kWarnings:
          cells.push_back(WarningList(row.report.warnings, ";"));
          break;
      }
    }
    absl::StrAppend(&out, absl::StrJoin(cells, ","), "\n");
  }
  return out;
}

std::string RenderSweepJson(const SweepResult& sweep) {
  Json j;
  j["command"] = "sweep";
  j["theorem"] = sweep.theorem;
  j["axis"] = sweep.axis;
  Json rows = Json::array();
  for (const SweepRow& row : sweep.rows) {
    Json r;
    r[sweep.axis] = Number(row.axis_value);
    r["epsilon"] = Number(row.report.epsilon);
    r["delta"] = Number(row.report.delta);
    r["c"] = Optional(row.report.c);
    r["warnings"] = WarningArray(row.report.warnings);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

struct FigurePreset {
  std::string_view name;
  std::string_view axis;
  std::string_view default_grid;
  std::vector<Column> columns;
  void (*configure)(RunConfig&);
};

const std::vector<FigurePreset>& FigurePresets() {
  static const auto* presets = new std::vector<FigurePreset>{
      {"fig3", "n", "5:100:1",
       {Column::kAxis, Column::kEpsilon, Column::kWarnings},
       [](RunConfig& cfg) { cfg.regime = Regime::kNoiseless; }},
      {"fig4a", "p", "0.05:0.95:0.01",
       {Column::kAxis, Column::kEpsilon, Column::kWarnings},
       [](RunConfig& cfg) {
         cfg.regime = Regime::kDepolarizing;
         cfg.dim = 2;
         cfg.n = 10;
       }},
      {"fig4b", "n", "5:100:1",
       {Column::kAxis, Column::kEpsilon, Column::kWarnings},
       [](RunConfig& cfg) {
         cfg.regime = Regime::kDepolarizing;
         cfg.dim = 2;
         cfg.p = 0.5;
       }},
      {"fig5a", "delta", "1e-4:1e-1:log40",
       {Column::kAxis, Column::kC, Column::kEpsilon, Column::kWarnings},
       [](RunConfig& cfg) {
         cfg.regime = Regime::kNoiseless;
         cfg.n = 10;
       }},
      {"fig5b", "n", "5:100:1",
       {Column::kAxis, Column::kEpsilon, Column::kWarnings},
       [](RunConfig& cfg) {
         cfg.regime = Regime::kNoiseless;
         cfg.delta = 0.01;
       }},
  };
  return *presets;
}

absl::Status WriteFile(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    return absl::UnavailableError(
        absl::StrFormat("IOError: cannot open '%s' for writing", path));
  }
  file << text;
  file.close();
  if (!file) {
    return absl::UnavailableError(
        absl::StrFormat("IOError: failed writing '%s'", path));
  }
  return absl::OkStatus();
}

absl::Status Emit(const RunConfig& cfg, const std::string& text,
                  std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << text;
    return absl::OkStatus();
  }
  return WriteFile(cfg.output_path, text);
}

absl::StatusOr<std::vector<double>> ParseDoubleList(const Json& value,
                                                    std::string_view key) {
  if (!value.is_array()) {
    return BadConfig(absl::StrFormat("'%s' must be an array", Av(key)));
  }
  std::vector<double> out;
  for (const Json& item : value) {
    if (!item.is_number()) {
      return BadConfig(absl::StrFormat("'%s' entries must be numbers", Av(key)));
    }
    out.push_back(item.get<double>());
  }
  return out;
}

}  // namespace

std::string FormatNumber(double value) {
  if (value == 0.0) return "0";
  return absl::StrFormat("%.10g", value);
}

double RoundForOutput(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(FormatNumber(value).c_str(), nullptr);
}

absl::StatusOr<Command> ParseCommand(std::string_view name) {
  if (name == "compute") return Command::kCompute;
  if (name == "sweep") return Command::kSweep;
  if (name == "figures") return Command::kFigures;
  if (name == "audit") return Command::kAudit;
  return BadConfig(absl::StrFormat("unknown command '%s'", Av(name)));
}

absl::StatusOr<OutputFormat> ParseFormat(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  return BadConfig(absl::StrFormat("unknown format '%s'", Av(name)));
}

absl::StatusOr<GridSpec> ParseGrid(std::string_view axis,
                                   std::string_view text) {
  if (!IsAxisName(axis)) {
    return BadConfig(absl::StrFormat(
        "grid axis '%s' must be one of n, p, c, delta, d, mu", Av(axis)));
  }
  std::vector<absl::string_view> parts = absl::StrSplit(Av(text), ':');
  if (parts.size() != 3) {
    return BadConfig(absl::StrFormat(
        "grid '%s' must be start:stop:step or start:stop:logN", Av(text)));
  }
  GridSpec grid;
  grid.axis = std::string(axis);
  if (!absl::SimpleAtod(parts[0], &grid.start) ||
      !absl::SimpleAtod(parts[1], &grid.stop)) {
    return BadConfig(absl::StrFormat("grid '%s' has non-numeric bounds", Av(text)));
  }
  if (absl::ConsumePrefix(&parts[2], "log")) {
    int points = 0;
    if (!absl::SimpleAtoi(parts[2], &points) || points < 2) {
      return BadConfig("log grid needs at least 2 points");
    }
    if (!(grid.start > 0.0 && grid.stop > 0.0)) {
      return BadConfig("log grid bounds must be positive");
    }
    grid.log_points = points;
  } else {
    double step = 0.0;
    if (!absl::SimpleAtod(parts[2], &step) || !(step > 0.0)) {
      return BadConfig(absl::StrFormat("grid step '%s' must be > 0", parts[2]));
    }
    grid.step = step;
  }
  if (!(grid.stop >= grid.start)) {
    return BadConfig("grid stop must not be below start");
  }
  return grid;
}

absl::StatusOr<std::vector<double>> GridValues(const GridSpec& grid) {
  std::vector<double> values;
  if (grid.log_points.has_value()) {
    const int points = *grid.log_points;
    const double log_start = std::log(grid.start);
    const double log_stop = std::log(grid.stop);
    for (int i = 0; i < points; ++i) {
      const double t = static_cast<double>(i) / (points - 1);
      values.push_back(std::exp(log_start + t * (log_stop - log_start)));
    }
    values.front() = grid.start;
    values.back() = grid.stop;
  } else if (grid.step.has_value()) {
    const double span = (grid.stop - grid.start) / *grid.step;
    const auto count = static_cast<int64_t>(std::floor(span + 1e-9)) + 1;
    if (count > 1000000) return BadConfig("grid has more than 1e6 points");
    for (int64_t i = 0; i < count; ++i) {
      // Snap away representation noise such as 0.07000000000000001.
      const double raw = grid.start + static_cast<double>(i) * *grid.step;
      values.push_back(
          std::strtod(absl::StrFormat("%.12g", raw).c_str(), nullptr));
    }
  } else {
    return BadConfig("grid needs a step or a log point count");
  }
  return values;
}

absl::Status ApplyConfigJson(std::string_view json_text, RunConfig& cfg) {
  Json j = Json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return BadConfig("config must be a flat JSON object");
  }
  std::optional<std::string> axis;
  std::optional<std::string> grid_text;
  for (const auto& [key, value] : j.items()) {
    auto number = [&]() -> absl::StatusOr<double> {
      if (!value.is_number()) {
        return BadConfig(absl::StrFormat("'%s' must be a number", key));
      }
      return value.get<double>();
    };
    auto integer = [&]() -> absl::StatusOr<int64_t> {
      if (!value.is_number_integer()) {
        return BadConfig(absl::StrFormat("'%s' must be an integer", key));
      }
      return value.get<int64_t>();
    };
    auto text = [&]() -> absl::StatusOr<std::string> {
      if (!value.is_string()) {
        return BadConfig(absl::StrFormat("'%s' must be a string", key));
      }
      return value.get<std::string>();
    };
    absl::Status status;
    auto assign_double = [&](std::optional<double>& field) {
      absl::StatusOr<double> v = number();
      if (v.ok()) field = *v;
      status = v.status();
    };
    auto assign_int = [&](std::optional<int>& field) {
      absl::StatusOr<int64_t> v = integer();
      if (v.ok()) field = static_cast<int>(*v);
      status = v.status();
    };
    if (key == "command") {
      absl::StatusOr<std::string> v = text();
      if (!v.ok()) return v.status();
      absl::StatusOr<Command> command = ParseCommand(*v);
      if (!command.ok()) return command.status();
      cfg.command = *command;
    } else if (key == "d") {
      assign_double(cfg.d);
    } else if (key == "r") {
      assign_int(cfg.r);
    } else if (key == "n") {
      assign_int(cfg.n);
    } else if (key == "mu") {
      assign_double(cfg.mu);
    } else if (key == "p") {
      assign_double(cfg.p);
    } else if (key == "dim") {
      assign_int(cfg.dim);
    } else if (key == "c") {
      assign_double(cfg.c);
    } else if (key == "delta") {
      assign_double(cfg.delta);
    } else if (key == "beta") {
      assign_double(cfg.beta);
    } else if (key == "eps") {
      assign_double(cfg.eps);
    } else if (key == "regime") {
      absl::StatusOr<std::string> v = text();
      if (!v.ok()) return v.status();
      absl::StatusOr<Regime> regime = ParseRegime(*v);
      if (!regime.ok()) return regime.status();
      cfg.regime = *regime;
    } else if (key == "convention") {
      absl::StatusOr<std::string> v = text();
      if (!v.ok()) return v.status();
      absl::StatusOr<DeltaConvention> convention = ParseConvention(*v);
      if (!convention.ok()) return convention.status();
      cfg.convention = *convention;
    } else if (key == "axis") {
      absl::StatusOr<std::string> v = text();
      if (!v.ok()) return v.status();
      axis = *v;
    } else if (key == "grid") {
      absl::StatusOr<std::string> v = text();
      if (!v.ok()) return v.status();
      grid_text = *v;
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) {
        return BadConfig("'seed' must be a non-negative integer");
      }
      cfg.seed = value.get<uint64_t>();
    } else if (key == "output_path" || key == "out") {
      absl::StatusOr<std::string> v = text();
      if (!v.ok()) return v.status();
      cfg.output_path = *v;
    } else if (key == "format") {
      absl::StatusOr<std::string> v = text();
      if (!v.ok()) return v.status();
      absl::StatusOr<OutputFormat> format = ParseFormat(*v);
      if (!format.ok()) return format.status();
      cfg.format = *format;
    } else if (key == "which") {
      absl::StatusOr<std::string> v = text();
      if (!v.ok()) return v.status();
      cfg.which = *v;
    } else if (key == "trials") {
      absl::StatusOr<int64_t> v = integer();
      if (!v.ok()) return v.status();
      cfg.trials = *v;
    } else if (key == "rho_diag" || key == "anchor_diag") {
      absl::StatusOr<std::vector<double>> v = ParseDoubleList(value, key);
      if (!v.ok()) return v.status();
      (key == "rho_diag" ? cfg.rho_diag : cfg.anchor_diag) = *v;
    } else if (key == "projector") {
      absl::StatusOr<std::vector<double>> v = ParseDoubleList(value, key);
      if (!v.ok()) return v.status();
      cfg.projector.clear();
      for (double index : *v) cfg.projector.push_back(static_cast<int>(index));
    } else {
      return BadConfig(absl::StrFormat("unknown config key '%s'", key));
    }
    if (!status.ok()) return status;
  }
  if (grid_text.has_value()) {
    absl::StatusOr<GridSpec> grid = ParseGrid(axis.value_or(""), *grid_text);
    if (!grid.ok()) return grid.status();
    cfg.grid = *grid;
  } else if (axis.has_value()) {
    return BadConfig("'axis' given without 'grid'");
  }
  return absl::OkStatus();
}

absl::StatusOr<PrivacyReport> ComputeBudget(const BudgetInputs& in,
                                            Regime regime) {
  if (IsApproximate(in)) {
    return regime == Regime::kNoiseless ? EpsilonDeltaNoiseless(in)
                                        : EpsilonDeltaDepolarizing(in);
  }
  return regime == Regime::kNoiseless ? EpsilonNoiseless(in)
                                      : EpsilonDepolarizing(in);
}

absl::StatusOr<BudgetInputs> ToBudgetInputs(const RunConfig& cfg) {
  if (!cfg.d.has_value() || !cfg.n.has_value() || !cfg.mu.has_value()) {
    return BadConfig("MissingParameter: d, n and mu are required");
  }
  if (cfg.c.has_value() && cfg.delta.has_value()) {
    return BadConfig("supply at most one of c and delta");
  }
  BudgetInputs in;
  in.d = *cfg.d;
  in.r = cfg.r.value_or(1);
  in.n = *cfg.n;
  in.mu = *cfg.mu;
  in.p = cfg.p;
  in.dim = cfg.dim;
  in.c = cfg.c;
  in.delta = cfg.delta;
  in.beta = cfg.beta.value_or(kThreeSigmaConfidence);
  in.convention = cfg.convention;
  return in;
}

absl::StatusOr<std::string> RenderCompute(const RunConfig& cfg) {
  absl::StatusOr<BudgetInputs> in = ToBudgetInputs(cfg);
  if (!in.ok()) return in.status();
  const Regime regime = ResolveRegime(cfg);
  absl::StatusOr<PrivacyReport> report = ComputeBudget(*in, regime);
  if (!report.ok()) return report.status();
  const std::string theorem = TheoremName(*in, regime);

  if (cfg.format.value_or(OutputFormat::kJson) == OutputFormat::kCsv) {
    return absl::StrCat("theorem,epsilon,delta,c,warnings\n", theorem, ",",
                        FormatNumber(report->epsilon), ",",
                        FormatNumber(report->delta), ",", CsvCell(report->c),
                        ",", WarningList(report->warnings, ";"), "\n");
  }
  Json j;
  j["command"] = "compute";
  j["theorem"] = theorem;
  j["regime"] = std::string(RegimeName(regime));
  j["epsilon"] = Number(report->epsilon);
  j["delta"] = Number(report->delta);
  j["c"] = Optional(report->c);
  j["warnings"] = WarningArray(report->warnings);
  j["inputs"] = InputsJson(report->inputs);
  return j.dump(2) + "\n";
}

absl::StatusOr<std::string> RenderSweep(const RunConfig& cfg) {
  if (!cfg.grid.has_value()) {
    return BadConfig("sweep needs --axis and --grid");
  }
  absl::StatusOr<SweepResult> sweep = Sweep(cfg, *cfg.grid);
  if (!sweep.ok()) return sweep.status();
  if (cfg.format.value_or(OutputFormat::kCsv) == OutputFormat::kJson) {
    return RenderSweepJson(*sweep);
  }
  return RenderCsv(*sweep, {Column::kAxis, Column::kEpsilon, Column::kDelta,
                            Column::kC, Column::kWarnings});
}

absl::StatusOr<std::string> RenderFigure(std::string_view which,
                                         const RunConfig& cfg) {
  if (cfg.format.value_or(OutputFormat::kCsv) != OutputFormat::kCsv) {
    return BadConfig("figures are written as CSV only");
  }
  for (const FigurePreset& preset : FigurePresets()) {
    if (preset.name != which) continue;
    RunConfig fig;
    fig.d = 0.1;
    fig.r = 1;
    fig.mu = 0.15;
    fig.convention = cfg.convention;
    preset.configure(fig);
    GridSpec grid;
    if (cfg.grid.has_value()) {
      if (cfg.grid->axis != preset.axis) {
        return BadConfig(absl::StrFormat("%s sweeps '%s', not '%s'", Av(which),
                                         Av(preset.axis), cfg.grid->axis));
      }
      grid = *cfg.grid;
    } else {
      absl::StatusOr<GridSpec> parsed =
          ParseGrid(preset.axis, preset.default_grid);
      if (!parsed.ok()) return parsed.status();
      grid = *parsed;
    }
    absl::StatusOr<SweepResult> sweep = Sweep(fig, grid);
    if (!sweep.ok()) return sweep.status();
    return RenderCsv(*sweep, preset.columns);
  }
  return BadConfig(absl::StrFormat(
      "unknown figure '%s' (expected fig3, fig4a, fig4b, fig5a, fig5b)",
      Av(which)));
}

absl::StatusOr<AuditOutcome> RenderAudit(const RunConfig& cfg) {
  const int dim = cfg.dim.value_or(2);
  std::vector<double> rho_diag = cfg.rho_diag;
  std::vector<double> anchor_diag = cfg.anchor_diag;
  std::vector<int> projector_basis = cfg.projector;
  if (rho_diag.empty()) {
    if (dim != 2) return BadConfig("rho_diag is required when dim != 2");
    rho_diag = {0.25, 0.75};
    if (anchor_diag.empty()) anchor_diag = {0.0, 1.0};
  }
  if (projector_basis.empty()) projector_basis = {0};
  if (static_cast<int>(rho_diag.size()) != dim) {
    return BadConfig(absl::StrFormat("rho_diag has %d entries for dim %d",
                                     rho_diag.size(), dim));
  }
  if (!anchor_diag.empty() && static_cast<int>(anchor_diag.size()) != dim) {
    return BadConfig(absl::StrFormat("anchor_diag has %d entries for dim %d",
                                     anchor_diag.size(), dim));
  }
  const double d = cfg.d.value_or(0.1);
  const int n = cfg.n.value_or(10);

  absl::StatusOr<DensityMatrix> rho = DensityMatrix::FromDiagonal(rho_diag);
  if (!rho.ok()) return rho.status();
  absl::StatusOr<DensityMatrix> anchor =
      anchor_diag.empty()
          ? absl::StatusOr<DensityMatrix>(DensityMatrix::MaximallyMixed(dim))
          : DensityMatrix::FromDiagonal(anchor_diag);
  if (!anchor.ok()) return anchor.status();
  absl::StatusOr<DensityMatrix> sigma = NeighborState(*rho, d, *anchor);
  if (!sigma.ok()) return sigma.status();
  absl::StatusOr<Projector> m = Projector::OntoBasis(dim, projector_basis);
  if (!m.ok()) return m.status();

  const Regime regime = cfg.regime.value_or(
      cfg.p.has_value() ? Regime::kDepolarizing : Regime::kNoiseless);
  Channel channel = Channel::Identity(dim);
  if (regime == Regime::kDepolarizing) {
    if (!cfg.p.has_value()) return BadConfig("depolarizing audit needs p");
    absl::StatusOr<Channel> dep = Channel::Depolarizing(*cfg.p, dim);
    if (!dep.ok()) return dep.status();
    channel = *dep;
  }

  absl::StatusOr<MinMuResult> mus = MinMu(*rho, *sigma, channel, *m);
  if (!mus.ok()) return mus.status();
  absl::StatusOr<double> distance = TraceDistance(*rho, *sigma);
  if (!distance.ok()) return distance.status();
  const double mu_max = std::max(mus->mu0, mus->mu1);
  const double mu_min = mus->min;

  DominanceParams params;
  params.d = d;
  params.r = m->rank();
  params.n = n;
  params.mu0 = mu_max;
  params.mu1 = mu_min;
  params.regime = regime;
  if (regime == Regime::kDepolarizing) {
    params.p = cfg.p;
    params.dim = dim;
  }
  absl::StatusOr<AuditReport> dominance = DominanceAudit(params);
  if (!dominance.ok()) return dominance.status();

  AuditOutcome outcome;
  outcome.dominance_failed =
      dominance->dominance_expected && !dominance->dominated;

  Json j;
  j["command"] = "audit";
  Json setup;
  setup["dim"] = dim;
  setup["rank"] = m->rank();
  setup["regime"] = std::string(RegimeName(regime));
  setup["p"] = Optional(cfg.p);
  setup["d"] = Number(d);
  setup["trace_distance"] = Number(*distance);
  setup["n"] = n;
  setup["mu_rho"] = Number(mus->mu0);
  setup["mu_sigma"] = Number(mus->mu1);
  setup["mu_min_attained_by"] = mus->attained_by_rho ? "rho" : "sigma";
  j["setup"] = std::move(setup);

  auto endpoint_json = [](const EndpointCheck& e) {
    Json out;
    out["x"] = Number(e.x);
    out["clipped"] = e.clipped;
    out["llr"] = Number(e.llr);
    out["dominated"] = e.dominated;
    return out;
  };
  Json dom;
  dom["theorem_epsilon"] = Number(dominance->theorem_epsilon);
  dom["lower"] = endpoint_json(*dominance->lower);
  dom["upper"] = endpoint_json(*dominance->upper);
  dom["dominance_expected"] = dominance->dominance_expected;
  dom["dominated"] = dominance->dominated;
  dom["exact_epsilon"] = Number(dominance->exact_epsilon);
  dom["exact_epsilon_interior"] = Number(dominance->exact_epsilon_interior);
  dom["exact_epsilon_window"] = Optional(dominance->exact_epsilon_window);
  dom["window_dominated"] = Optional(dominance->window_dominated);
  dom["exact_delta_at_theorem_epsilon"] =
      Number(dominance->exact_delta_at_eps);
  dom["boundary_outcomes_excluded"] = dominance->boundary_outcomes_excluded;
  dom["flags"] = dominance->flags;
  j["dominance"] = std::move(dom);

  const double theorem_eps =
      std::isfinite(dominance->theorem_epsilon)
          ? std::max(0.0, dominance->theorem_epsilon)
          : 0.0;
  absl::StatusOr<bool> single_shot =
      QdpCheck(*rho, *sigma, channel, {*m, m->Complement()}, theorem_eps, 0.0);
  if (!single_shot.ok()) return single_shot.status();
  j["single_shot_qdp_at_theorem_epsilon"] = *single_shot;

  if (cfg.trials > 0) {
    const double mc_eps = cfg.eps.value_or(theorem_eps);
    const double mc_delta = cfg.delta.value_or(0.0);
    absl::StatusOr<AuditReport> mc = MonteCarloAudit(
        mu_max, mu_min, n, cfg.trials, cfg.seed, mc_eps, mc_delta);
    if (!mc.ok()) return mc.status();
    Json mcj;
    mcj["trials"] = mc->trials;
    mcj["seed"] = mc->seed;
    mcj["eps"] = Number(mc_eps);
    mcj["delta"] = Number(mc_delta);
    mcj["exact_epsilon"] = Number(mc->exact_epsilon);
    mcj["exact_delta_at_eps"] = Number(mc->exact_delta_at_eps);
    mcj["exact_satisfies_request"] = Optional(mc->exact_satisfies_request);
    mcj["empirical_epsilon"] = Optional(mc->empirical_epsilon);
    mcj["empirical_delta_at_eps"] = Optional(mc->empirical_delta_at_eps);
    mcj["max_log_ratio_error"] = Optional(mc->max_log_ratio_error);
    mcj["zero_count_outcomes"] = mc->zero_count_outcomes;
    Json rows = Json::array();
    for (const PerOutcome& row : mc->outcomes) {
      Json r;
      r["k"] = row.k;
      r["exact_log_ratio"] = Number(row.exact_log_ratio);
      r["empirical_log_ratio"] = Optional(row.empirical_log_ratio);
      r["exact_prob0"] = Number(row.exact_prob0);
      r["exact_prob1"] = Number(row.exact_prob1);
      r["empirical_prob0"] = Number(row.empirical_prob0);
      r["empirical_prob1"] = Number(row.empirical_prob1);
      rows.push_back(std::move(r));
    }
    mcj["outcomes"] = std::move(rows);
    j["monte_carlo"] = std::move(mcj);
  }
  j["status"] = outcome.dominance_failed ? "dominance_failed" : "ok";

  if (cfg.format.value_or(OutputFormat::kJson) == OutputFormat::kCsv) {
    // Flat key,value listing of the scalar fields.
    std::string csv = "field,value\n";
    for (const auto& [section, body] : j.items()) {
      if (!body.is_object()) {
        absl::StrAppend(&csv, section, ",",
                        body.is_string() ? body.get<std::string>()
                                         : body.dump(),
                        "\n");
        continue;
      }
      for (const auto& [key, value] : body.items()) {
        if (value.is_structured()) continue;
        absl::StrAppend(&csv, section, ".", key, ",",
                        value.is_string() ? value.get<std::string>()
                                          : value.dump(),
                        "\n");
      }
    }
    outcome.text = std::move(csv);
  } else {
    outcome.text = j.dump(2) + "\n";
  }
  return outcome;
}

int Run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto fail = [&err](const absl::Status& status) {
    err << "error: " << status.message() << "\n";
    return kExitBadConfig;
  };
  switch (cfg.command) {
    case Command::kCompute: {
      absl::StatusOr<std::string> text = RenderCompute(cfg);
      if (!text.ok()) return fail(text.status());
      if (absl::Status s = Emit(cfg, *text, out); !s.ok()) return fail(s);
      return kExitOk;
    }
    case Command::kSweep: {
      absl::StatusOr<std::string> text = RenderSweep(cfg);
      if (!text.ok()) return fail(text.status());
      if (absl::Status s = Emit(cfg, *text, out); !s.ok()) return fail(s);
      return kExitOk;
    }
    case Command::kFigures: {
      if (cfg.which != "all") {
        absl::StatusOr<std::string> text = RenderFigure(cfg.which, cfg);
        if (!text.ok()) return fail(text.status());
        if (absl::Status s = Emit(cfg, *text, out); !s.ok()) return fail(s);
        return kExitOk;
      }
      if (cfg.output_path.empty()) {
        return fail(BadConfig("figures --which all needs --out <directory>"));
      }
      std::error_code ec;
      std::filesystem::create_directories(cfg.output_path, ec);
      if (ec) {
        return fail(absl::UnavailableError(absl::StrFormat(
            "IOError: cannot create '%s': %s", cfg.output_path,
            ec.message())));
      }
      for (std::string_view name : kFigureNames) {
        absl::StatusOr<std::string> text = RenderFigure(name, cfg);
        if (!text.ok()) return fail(text.status());
        const std::string path =
            (std::filesystem::path(cfg.output_path) /
             absl::StrCat(Av(name), ".csv"))
                .string();
        if (absl::Status s = WriteFile(path, *text); !s.ok()) return fail(s);
      }
      return kExitOk;
    }
    case Command::kAudit: {
      absl::StatusOr<AuditOutcome> outcome = RenderAudit(cfg);
      if (!outcome.ok()) return fail(outcome.status());
      if (absl::Status s = Emit(cfg, outcome->text, out); !s.ok()) {
        return fail(s);
      }
      if (outcome->dominance_failed) {
        err << "audit: a dominance check expected to hold failed\n";
        return kExitAuditFailed;
      }
      return kExitOk;
    }
  }
  return fail(BadConfig("unknown command"));
}

}  // namespace shotqdp::cli
