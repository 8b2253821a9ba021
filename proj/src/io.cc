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

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "absl/strings/str_cat.h"

namespace ldpfl {
namespace {

std::string CsvField(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(text);
  }
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

absl::StatusOr<std::vector<std::string>> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) return absl::InvalidArgumentError("unterminated quoted field");
  return fields;
}

absl::StatusOr<double> ParseNumber(std::string_view text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("not a number: '", std::string(text), "'"));
  }
  return value;
}

absl::StatusOr<bool> ParseBool(std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  return absl::InvalidArgumentError(
      absl::StrCat("not a boolean: '", std::string(text), "'"));
}

}  // namespace

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buffer;
  const auto [end, ec] = std::to_chars(buffer.data(),
                                       buffer.data() + buffer.size(), value,
                                       std::chars_format::general, 17);
  return std::string(buffer.data(), end);
}

std::string SweepCsv(std::span<const TradeoffPoint> rows) {
  std::string out = absl::StrCat(std::string(kSweepCsvHeader), "\n");
  auto flag = [](bool b) { return b ? "true" : "false"; };
  for (const TradeoffPoint& row : rows) {
    absl::StrAppend(&out, std::string(MethodName(row.method)), ",",
                    row.rounds, ",", FormatNumber(row.epsilon), ",",
                    FormatNumber(row.sigma_k_sq), ",",
                    FormatNumber(row.sigma_agg_sq), ",",
                    FormatNumber(row.utility_lb), ",",
                    FormatNumber(row.rate_ub_bits), ",");
    absl::StrAppend(&out, flag(row.validity.q_ok), ",",
                    flag(row.validity.sigma_ok), ",",
                    flag(row.validity.epsilon_ok), ",", CsvField(row.error),
                    "\n");
  }
  return out;
}

absl::StatusOr<std::vector<TradeoffPoint>> ParseSweepCsv(
    std::string_view text) {
  std::vector<TradeoffPoint> rows;
  std::vector<std::string_view> lines;
  for (size_t start = 0; start < text.size();) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty() || lines.front() != kSweepCsvHeader) {
    return absl::InvalidArgumentError(
        absl::StrCat("sweep CSV header must be: ", std::string(kSweepCsvHeader)));
  }
  for (size_t n = 1; n < lines.size(); ++n) {
    auto where = [n](const absl::Status& s) {
      return absl::InvalidArgumentError(
          absl::StrCat("sweep CSV line ", n + 1, ": ", s.message()));
    };
    absl::StatusOr<std::vector<std::string>> fields = SplitCsvLine(lines[n]);
    if (!fields.ok()) return where(fields.status());
    if (fields->size() != 11) {
      return where(absl::InvalidArgumentError(
          absl::StrCat("expected 11 fields, found ", fields->size())));
    }
    const std::vector<std::string>& f = *fields;
    TradeoffPoint row;
    absl::StatusOr<Method> method = ParseMethod(f[0]);
    if (!method.ok()) return where(method.status());
    row.method = *method;
    int64_t rounds = 0;
    const auto [end, ec] =
        std::from_chars(f[1].data(), f[1].data() + f[1].size(), rounds);
    if (ec != std::errc() || end != f[1].data() + f[1].size()) {
      return where(absl::InvalidArgumentError("T is not an integer"));
    }
    row.rounds = rounds;
    double* numbers[] = {&row.epsilon, &row.sigma_k_sq, &row.sigma_agg_sq,
                         &row.utility_lb, &row.rate_ub_bits};
    for (size_t i = 0; i < std::size(numbers); ++i) {
      absl::StatusOr<double> value = ParseNumber(f[2 + i]);
      if (!value.ok()) return where(value.status());
      *numbers[i] = *value;
    }
    bool* flags[] = {&row.validity.q_ok, &row.validity.sigma_ok,
                     &row.validity.epsilon_ok};
    for (size_t i = 0; i < std::size(flags); ++i) {
      absl::StatusOr<bool> value = ParseBool(f[7 + i]);
      if (!value.ok()) return where(value.status());
      *flags[i] = *value;
    }
    row.validity.overall =
        row.validity.q_ok && row.validity.sigma_ok && row.validity.epsilon_ok;
    row.error = f[10];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string TrajectoryCsv(const SimResult& result) {
  std::string out = absl::StrCat(std::string(kTrajectoryCsvHeader), "\n");
  for (size_t i = 0; i < result.mean_loss_gap.size(); ++i) {
    absl::StrAppend(&out, i + 1, ",", FormatNumber(result.mean_loss_gap[i]),
                    ",", FormatNumber(result.stderr_loss_gap[i]), ",",
                    FormatNumber(result.mean_mse[i]), ",",
                    FormatNumber(result.stderr_mse[i]), "\n");
  }
  return out;
}

absl::Status WriteFile(const std::string& path, std::string_view content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) return absl::PermissionDeniedError("cannot open " + path);
  file.write(content.data(), static_cast<std::streamsize>(content.size()));
  file.close();
  if (!file) return absl::DataLossError("failed writing " + path);
  return absl::OkStatus();
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) return absl::NotFoundError("cannot open " + path);
  std::ostringstream content;
  content << file.rdbuf();
  return content.str();
}

std::string Sha256Hex(std::string_view content) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
  unsigned int length = 0;
  EVP_Digest(content.data(), content.size(), digest.data(), &length,
             EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

}  // namespace ldpfl
