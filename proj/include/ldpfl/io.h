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

#ifndef LDPFL_IO_H_
#define LDPFL_IO_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ldpfl/fedsgd_sim.h"
#include "ldpfl/tradeoff.h"

// Artifact serialization. Numbers use 17 significant digits with a '.'
// decimal separator regardless of locale; non-finite values print as "nan",
// "inf" or "-inf".
namespace ldpfl {

std::string FormatNumber(double value);

inline constexpr std::string_view kSweepCsvHeader =
    "method,T,epsilon,sigma_k_sq,sigma_agg_sq,utility_lb,rate_ub_bits,q_ok,"
    "sigma_ok,epsilon_ok,error";
inline constexpr std::string_view kTrajectoryCsvHeader =
    "round,mean_loss_gap,stderr_loss_gap,mean_mse,stderr_mse";

std::string SweepCsv(std::span<const TradeoffPoint> rows);
// Inverse of SweepCsv; the header must match exactly.
absl::StatusOr<std::vector<TradeoffPoint>> ParseSweepCsv(std::string_view text);

// One row per iterate w^(t), t = 1..T+1.
std::string TrajectoryCsv(const SimResult& result);

absl::Status WriteFile(const std::string& path, std::string_view content);
absl::StatusOr<std::string> ReadFile(const std::string& path);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view content);

}  // namespace ldpfl

#endif  // LDPFL_IO_H_
