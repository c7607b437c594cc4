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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/str_split.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace shotqdp::cli {
namespace {

using ::shotqdp::testing::ValueOrDie;
using ::testing::HasSubstr;
using ::testing::SizeIs;
using ::testing::StartsWith;

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines = absl::StrSplit(text, '\n');
  EXPECT_EQ(lines.back(), "");  // newline-terminated
  lines.pop_back();
  return lines;
}

RunConfig ComputeDefaults() {
  RunConfig cfg;
  cfg.command = Command::kCompute;
  cfg.d = 0.1;
  cfg.r = 1;
  cfg.n = 10;
  cfg.mu = 0.15;
  return cfg;
}

TEST(FormatTest, TenSignificantDigits) {
  EXPECT_EQ(FormatNumber(6.421595401812857), "6.421595402");
  EXPECT_EQ(FormatNumber(0.0), "0");
  EXPECT_EQ(FormatNumber(-0.0), "0");
  EXPECT_EQ(FormatNumber(1e-4), "0.0001");
  EXPECT_EQ(RoundForOutput(6.421595401812857), 6.421595402);
}

TEST(GridTest, ParsesStepAndLogGrids) {
  GridSpec step = ValueOrDie(ParseGrid("p", "0.05:0.95:0.01"));
  std::vector<double> values = ValueOrDie(GridValues(step));
  ASSERT_THAT(values, SizeIs(91));
  EXPECT_EQ(values[2], 0.07);
  EXPECT_EQ(values.back(), 0.95);

  GridSpec log = ValueOrDie(ParseGrid("delta", "1e-4:1e-1:log40"));
  values = ValueOrDie(GridValues(log));
  ASSERT_THAT(values, SizeIs(40));
  EXPECT_EQ(values.front(), 1e-4);
  EXPECT_EQ(values.back(), 1e-1);
  for (size_t i = 1; i < values.size(); ++i) EXPECT_GT(values[i], values[i - 1]);
}

TEST(GridTest, RejectsBadGrids) {
  EXPECT_THAT(std::string(ParseGrid("x", "1:2:1").status().message()),
              StartsWith("BadConfig"));
  EXPECT_FALSE(ParseGrid("n", "1:2:0").ok());
  EXPECT_FALSE(ParseGrid("n", "1:2").ok());
  EXPECT_FALSE(ParseGrid("n", "3:2:1").ok());
  EXPECT_FALSE(ParseGrid("delta", "0:1:log5").ok());
}

TEST(ConfigTest, AppliesFlatJson) {
  RunConfig cfg;
  ASSERT_TRUE(ApplyConfigJson(R"({"command": "sweep", "d": 0.1, "mu": 0.15,
      "axis": "n", "grid": "5:10:1", "convention": "normalized",
      "seed": 7})",
                              cfg)
                  .ok());
  EXPECT_EQ(cfg.command, Command::kSweep);
  EXPECT_EQ(cfg.d, 0.1);
  EXPECT_EQ(cfg.grid->axis, "n");
  EXPECT_EQ(cfg.convention, DeltaConvention::kNormalized);
  EXPECT_EQ(cfg.seed, 7u);
}

TEST(ConfigTest, RejectsUnknownKeysAndBadTypes) {
  RunConfig cfg;
  EXPECT_FALSE(ApplyConfigJson(R"({"shots": 10})", cfg).ok());
  EXPECT_FALSE(ApplyConfigJson(R"({"n": 1.5})", cfg).ok());
  EXPECT_FALSE(ApplyConfigJson(R"({"d": "x"})", cfg).ok());
  EXPECT_FALSE(ApplyConfigJson("[1, 2]", cfg).ok());
  EXPECT_FALSE(ApplyConfigJson("{", cfg).ok());
}

TEST(ComputeTest, JsonAndCsvEncodeTheSameValues) {
  for (bool approximate : {false, true}) {
    RunConfig cfg = ComputeDefaults();
    if (approximate) {
      cfg.n = 5;
      cfg.c = 0.3;
    }
    cfg.format = OutputFormat::kJson;
    auto json = nlohmann::json::parse(ValueOrDie(RenderCompute(cfg)));
    cfg.format = OutputFormat::kCsv;
    std::vector<std::string> lines = Lines(ValueOrDie(RenderCompute(cfg)));
    ASSERT_THAT(lines, SizeIs(2));
    EXPECT_EQ(lines[0], "theorem,epsilon,delta,c,warnings");
    std::vector<std::string> cells = absl::StrSplit(lines[1], ',');
    EXPECT_EQ(cells[0], json["theorem"].get<std::string>());
    EXPECT_EQ(std::strtod(cells[1].c_str(), nullptr),
              json["epsilon"].get<double>());
    EXPECT_EQ(std::strtod(cells[2].c_str(), nullptr),
              json["delta"].get<double>());
    if (approximate) {
      EXPECT_EQ(std::strtod(cells[3].c_str(), nullptr),
                json["c"].get<double>());
    }
  }
}

TEST(ComputeTest, PicksTheTheorem) {
  RunConfig cfg = ComputeDefaults();
  auto json = nlohmann::json::parse(ValueOrDie(RenderCompute(cfg)));
  EXPECT_EQ(json["theorem"], "epsilon-noiseless");
  EXPECT_EQ(json["epsilon"].get<double>(), 6.421595402);
  cfg.p = 0.5;
  cfg.dim = 2;
  json = nlohmann::json::parse(ValueOrDie(RenderCompute(cfg)));
  EXPECT_EQ(json["theorem"], "epsilon-depolarizing");
  EXPECT_EQ(json["epsilon"].get<double>(), 1.872222565);
  cfg.delta = 0.01;
  json = nlohmann::json::parse(ValueOrDie(RenderCompute(cfg)));
  EXPECT_EQ(json["theorem"], "epsilon-delta-depolarizing");
}

TEST(SweepTest, OverridesTheAxisParameter) {
  RunConfig cfg = ComputeDefaults();
  cfg.command = Command::kSweep;
  cfg.grid = ValueOrDie(ParseGrid("n", "5:100:1"));
  std::vector<std::string> lines = Lines(ValueOrDie(RenderSweep(cfg)));
  ASSERT_THAT(lines, SizeIs(97));
  EXPECT_EQ(lines[0], "n,epsilon,delta,c,warnings");
  EXPECT_THAT(lines[6], StartsWith("10,6.421595402,"));
  cfg.grid.reset();
  EXPECT_FALSE(RenderSweep(cfg).ok());
}

TEST(FiguresTest, Fig3HasNinetySixRows) {
  RunConfig cfg;
  std::vector<std::string> lines =
      Lines(ValueOrDie(RenderFigure("fig3", cfg)));
  EXPECT_EQ(lines[0], "n,epsilon,warnings");
  EXPECT_THAT(lines, SizeIs(97));
  EXPECT_THAT(lines[6], StartsWith("10,6.421595402,"));
}

TEST(FiguresTest, TablesHaveTheExpectedShapeAndTrend) {
  RunConfig cfg;
  std::vector<std::string> fig4a =
      Lines(ValueOrDie(RenderFigure("fig4a", cfg)));
  EXPECT_EQ(fig4a[0], "p,epsilon,warnings");
  EXPECT_THAT(fig4a, SizeIs(92));
  std::vector<std::string> fig5a =
      Lines(ValueOrDie(RenderFigure("fig5a", cfg)));
  EXPECT_EQ(fig5a[0], "delta,c,epsilon,warnings");
  EXPECT_THAT(fig5a, SizeIs(41));
  EXPECT_THAT(Lines(ValueOrDie(RenderFigure("fig4b", cfg))), SizeIs(97));
  EXPECT_THAT(Lines(ValueOrDie(RenderFigure("fig5b", cfg))), SizeIs(97));
  EXPECT_FALSE(RenderFigure("fig6", cfg).ok());
}

TEST(FiguresTest, NonFiniteCellsCarryAWarning) {
  RunConfig cfg;
  for (std::string_view name : kFigureNames) {
    std::vector<std::string> lines = Lines(ValueOrDie(RenderFigure(name, cfg)));
    for (size_t i = 1; i < lines.size(); ++i) {
      std::vector<std::string> cells = absl::StrSplit(lines[i], ',');
      const std::string& warnings = cells.back();
      for (size_t j = 0; j + 1 < cells.size(); ++j) {
        const double v = std::strtod(cells[j].c_str(), nullptr);
        if (!std::isfinite(v)) {
          EXPECT_TRUE(warnings.find("Divergent") != std::string::npos ||
                      warnings.find("RegimeInvalid") != std::string::npos)
              << name << ": " << lines[i];
        }
      }
    }
  }
}

TEST(FiguresTest, GridOverrideMustMatchAxis) {
  RunConfig cfg;
  cfg.grid = ValueOrDie(ParseGrid("n", "5:10:1"));
  EXPECT_THAT(Lines(ValueOrDie(RenderFigure("fig3", cfg))), SizeIs(7));
  EXPECT_FALSE(RenderFigure("fig4a", cfg).ok());
}

TEST(RunTest, FiguresAllWritesEveryTableReproducibly) {
  const auto dir =
      std::filesystem::temp_directory_path() / "shotqdp_cli_test_figures";
  std::filesystem::remove_all(dir);
  RunConfig cfg;
  cfg.command = Command::kFigures;
  cfg.output_path = dir.string();
  std::ostringstream out, err;
  ASSERT_EQ(cli::Run(cfg, out, err), kExitOk) << err.str();
  for (std::string_view name : kFigureNames) {
    std::ifstream file(dir / (std::string(name) + ".csv"));
    std::stringstream contents;
    contents << file.rdbuf();
    EXPECT_EQ(contents.str(), ValueOrDie(RenderFigure(name, cfg))) << name;
  }
  std::filesystem::remove_all(dir);
}

TEST(RunTest, ValidationErrorsExitWithTwo) {
  RunConfig cfg = ComputeDefaults();
  cfg.mu = 1.0;
  std::ostringstream out, err;
  EXPECT_EQ(cli::Run(cfg, out, err), kExitBadConfig);
  EXPECT_THAT(err.str(), HasSubstr("DegenerateMu"));
  EXPECT_EQ(out.str(), "");

  RunConfig missing;
  missing.command = Command::kCompute;
  std::ostringstream out2, err2;
  EXPECT_EQ(cli::Run(missing, out2, err2), kExitBadConfig);
}

TEST(RunTest, AuditIsReproducibleAndPasses) {
  RunConfig cfg;
  cfg.command = Command::kAudit;
  cfg.trials = 20000;
  std::ostringstream a, b, err;
  ASSERT_EQ(cli::Run(cfg, a, err), kExitOk) << err.str();
  ASSERT_EQ(cli::Run(cfg, b, err), kExitOk);
  EXPECT_EQ(a.str(), b.str());
  auto json = nlohmann::json::parse(a.str());
  EXPECT_EQ(json["setup"]["mu_rho"].get<double>(), 0.25);
  EXPECT_EQ(json["setup"]["mu_sigma"].get<double>(), 0.15);
  EXPECT_EQ(json["status"], "ok");
  EXPECT_EQ(json["monte_carlo"]["seed"].get<uint64_t>(), 42u);
}

TEST(RunTest, FailedDominanceExitsWithThree) {
  // A state pair realizing the known three-sigma counterexample.
  RunConfig cfg;
  cfg.command = Command::kAudit;
  cfg.rho_diag = {0.3535, 0.6465};
  cfg.anchor_diag = {0.0, 1.0};
  cfg.d = 0.3535 - 0.002736;
  cfg.n = 4927;
  cfg.trials = 0;
  std::ostringstream out, err;
  EXPECT_EQ(cli::Run(cfg, out, err), kExitAuditFailed);
  auto json = nlohmann::json::parse(out.str());
  EXPECT_EQ(json["status"], "dominance_failed");
}

TEST(RunTest, AuditRejectsTooFewTrials) {
  RunConfig cfg;
  cfg.command = Command::kAudit;
  cfg.trials = 10;
  std::ostringstream out, err;
  EXPECT_EQ(cli::Run(cfg, out, err), kExitBadConfig);
}

}  // namespace
}  // namespace shotqdp::cli
