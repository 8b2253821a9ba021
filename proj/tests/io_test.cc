//
// Copyright 2026 The ldpfl Authors
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
//

#include "ldpfl/io.h"

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "ldpfl/plot.h"

namespace ldpfl {
namespace {

using ::testing::HasSubstr;

TEST(FormatNumberTest, RoundTripsAndSpellsSpecialValues) {
  EXPECT_EQ(FormatNumber(3906.25), "3906.25");
  EXPECT_EQ(FormatNumber(0.0), "0");
  EXPECT_EQ(FormatNumber(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(FormatNumber(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(FormatNumber(-std::numeric_limits<double>::infinity()), "-inf");
  for (double v : {0.1, 1.0 / 3.0, 26.42665337787315, -1877.0410380176663,
                   1e-300, 6.02e23}) {
    EXPECT_EQ(std::stod(FormatNumber(v)), v);
  }
}

TEST(SweepCsvTest, RoundTripsIncludingErrorsAndNaN) {
  std::vector<TradeoffPoint> rows(2);
  rows[0].method = Method::kAc2;
  rows[0].rounds = 70000;
  rows[0].epsilon = 0.3;
  rows[0].sigma_k_sq = 199.4916258813988;
  rows[0].sigma_agg_sq = 1.994916258813988;
  rows[0].utility_lb = 0.14;
  rows[0].rate_ub_bits = 12704.5;
  rows[0].validity = {.q_ok = true, .sigma_ok = true, .epsilon_ok = false,
                      .overall = false};
  rows[1].method = Method::kProposed;
  rows[1].rounds = 7;
  rows[1].epsilon = 1e-3;
  rows[1].sigma_k_sq = rows[1].sigma_agg_sq = rows[1].utility_lb =
      rows[1].rate_ub_bits = std::numeric_limits<double>::quiet_NaN();
  rows[1].error = "bound is \"vacuous\", bracket = -1";

  const std::string csv = SweepCsv(rows);
  EXPECT_THAT(csv, HasSubstr(std::string(kSweepCsvHeader) + "\n"));
  EXPECT_THAT(csv, HasSubstr("\"bound is \"\"vacuous\"\", bracket = -1\""));
  absl::StatusOr<std::vector<TradeoffPoint>> parsed = ParseSweepCsv(csv);
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  ASSERT_EQ(parsed->size(), 2u);
  const TradeoffPoint& a = (*parsed)[0];
  EXPECT_EQ(a.method, Method::kAc2);
  EXPECT_EQ(a.rounds, 70000);
  EXPECT_EQ(a.epsilon, 0.3);
  EXPECT_EQ(a.sigma_k_sq, rows[0].sigma_k_sq);
  EXPECT_EQ(a.rate_ub_bits, 12704.5);
  EXPECT_TRUE(a.validity.q_ok);
  EXPECT_FALSE(a.validity.epsilon_ok);
  EXPECT_FALSE(a.validity.overall);
  const TradeoffPoint& b = (*parsed)[1];
  EXPECT_TRUE(std::isnan(b.utility_lb));
  EXPECT_EQ(b.error, rows[1].error);
  EXPECT_EQ(SweepCsv(*parsed), csv);
}

TEST(SweepCsvTest, RejectsMalformedInput) {
  EXPECT_FALSE(ParseSweepCsv("").ok());
  EXPECT_FALSE(ParseSweepCsv("method,T\nma,1\n").ok());
  const std::string header = std::string(kSweepCsvHeader) + "\n";
  EXPECT_FALSE(ParseSweepCsv(header + "ma,1,0.3\n").ok());
  EXPECT_FALSE(
      ParseSweepCsv(header + "ma,1,x,1,1,1,1,true,true,true,\n").ok());
  EXPECT_FALSE(
      ParseSweepCsv(header + "ma,1,0.3,1,1,1,1,yes,true,true,\n").ok());
  EXPECT_FALSE(
      ParseSweepCsv(header + "zz,1,0.3,1,1,1,1,true,true,true,\n").ok());
  EXPECT_TRUE(
      ParseSweepCsv(header + "ma,1,0.3,1,1,1,1,true,true,true,\r\n").ok());
}

TEST(TrajectoryCsvTest, OneLinePerIterate) {
  SimResult r;
  r.mean_loss_gap = {1.0, 0.5, 0.25};
  r.stderr_loss_gap = {0.0, 0.1, 0.05};
  r.mean_mse = {2.0, 1.0, 0.5};
  r.stderr_mse = {0.0, 0.2, 0.1};
  EXPECT_EQ(TrajectoryCsv(r), std::string(kTrajectoryCsvHeader) +
                                  "\n1,1,0,2,0\n2,0.5,0.10000000000000001,1,"
                                  "0.20000000000000001\n3,0.25,"
                                  "0.050000000000000003,0.5,"
                                  "0.10000000000000001\n");
}

TEST(FileTest, WriteReadAndErrors) {
  const std::string dir =
      (std::filesystem::temp_directory_path() / "ldpfl_io_test").string();
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/x.txt";
  ASSERT_TRUE(WriteFile(path, "hello\n").ok());
  EXPECT_EQ(*ReadFile(path), "hello\n");
  EXPECT_EQ(ReadFile(dir + "/missing").status().code(),
            absl::StatusCode::kNotFound);
  EXPECT_FALSE(WriteFile(dir + "/no/such/dir/x.txt", "x").ok());
  std::filesystem::remove_all(dir);
}

TEST(Sha256Test, KnownDigests) {
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(PlotTest, RendersSeriesCapsAndLogAxis) {
  PlotSpec spec;
  spec.title = "noise <&>";
  spec.x_label = "epsilon";
  spec.y_label = "sigma^2";
  spec.log_y = true;
  spec.series.push_back({"ma", {{0.1, 10.0}, {0.5, 1.0}, {1.0, 0.5}}, false});
  spec.series.push_back({"ac1", {{0.1, 100.0}, {1.0, 5.0}}, true});
  spec.caps.push_back({"cap", 50.0});
  const std::string svg = RenderSvg(spec);
  EXPECT_THAT(svg, HasSubstr("<svg"));
  EXPECT_THAT(svg, HasSubstr("</svg>"));
  EXPECT_THAT(svg, HasSubstr("<polyline"));
  EXPECT_THAT(svg, HasSubstr("stroke-dasharray"));
  EXPECT_THAT(svg, HasSubstr("noise &lt;&amp;&gt;"));
  EXPECT_EQ(svg, RenderSvg(spec));
}

TEST(PlotTest, SweepPanels) {
  absl::StatusOr<std::vector<TradeoffPoint>> rows = Sweep(DefaultStudy());
  ASSERT_TRUE(rows.ok());
  const SweepPlots plots = RenderSweepPlots(*rows, DefaultStudy());
  for (const std::string* svg : {&plots.noise, &plots.utility, &plots.rate}) {
    EXPECT_THAT(*svg, HasSubstr("<polyline"));
    EXPECT_THAT(*svg, HasSubstr("stroke-dasharray"));
  }
}

}  // namespace
}  // namespace ldpfl
