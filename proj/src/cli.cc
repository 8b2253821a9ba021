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

#include "ldpfl/cli.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <filesystem>
#include <optional>
#include <string_view>
#include <utility>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "ldpfl/accountants.h"
#include "ldpfl/checks.h"
#include "ldpfl/fedsgd_sim.h"
#include "ldpfl/io.h"
#include "ldpfl/plot.h"
#include "ldpfl/tradeoff.h"

#ifndef LDPFL_VERSION
#define LDPFL_VERSION "0.0.0"
#endif

namespace ldpfl {
namespace {

using nlohmann::ordered_json;

// Flags shared by the analytic commands, preloaded with the default study.
struct StudyFlags {
  double epsilon = 0.3;
  double delta = 1e-4;
  double q = 1e-3;
  int64_t rounds = 70000;
  double delta_tilde = kDefaultAc1DeltaTilde;
  int64_t users = 100;
  int64_t dim = 10000;
  double clip = 1.0;
  double grad_bound = 5.0;
  double lambda = 1.0;
  double mu = 1.0;

  LossRegularity Regularity() const {
    return LossRegularity{mu, lambda, grad_bound, clip, dim};
  }
};

void AddRegularityFlags(CLI::App* cmd, StudyFlags& f) {
  cmd->add_option("--users", f.users, "Homogeneous user count K")
      ->capture_default_str();
  cmd->add_option("--dim", f.dim, "Model dimension d")->capture_default_str();
  cmd->add_option("--clip", f.clip, "Clipping threshold C")
      ->capture_default_str();
  cmd->add_option("--grad-bound", f.grad_bound, "Gradient bound G")
      ->capture_default_str();
  cmd->add_option("--lambda", f.lambda, "Strong convexity lambda")
      ->capture_default_str();
  cmd->add_option("--mu", f.mu, "Smoothness mu")->capture_default_str();
}

std::string StatusCodeName(const absl::Status& status) {
  return absl::StatusCodeToString(status.code());
}

int ReportError(const absl::Status& status, std::string_view command,
                std::ostream& out, std::ostream& err) {
  ordered_json record;
  record["error"] = {{"command", std::string(command)},
                     {"code", StatusCodeName(status)},
                     {"message", std::string(status.message())}};
  out << record.dump() << "\n";
  err << "ldpfl " << command << ": " << status.message() << "\n";
  return ExitCodeFor(status);
}

ordered_json ValidityJson(const ValidityReport& v) {
  return {{"q_ok", v.q_ok},
          {"sigma_ok", v.sigma_ok},
          {"epsilon_ok", v.epsilon_ok},
          {"overall", v.overall}};
}

ordered_json CapsJson(const ValidityCaps& caps) {
  return {{"sigma_sq_cap", caps.sigma_sq_cap},
          {"utility_cap", caps.utility_cap},
          {"rate_cap_bits", caps.rate_cap_bits}};
}

ordered_json RegularityJson(const LossRegularity& reg) {
  return {{"mu", reg.mu},
          {"lambda", reg.lambda},
          {"grad_bound", reg.grad_bound},
          {"clip", reg.clip},
          {"dim", reg.dim}};
}

// Files of one command invocation, written together with a manifest that
// lists each by content digest.
class OutputSet {
 public:
  explicit OutputSet(std::string dir) : dir_(std::move(dir)) {}

  void Add(std::string name, std::string content) {
    files_.emplace_back(std::move(name), std::move(content));
  }

  absl::Status Commit(std::string_view command, ordered_json parameters,
                      std::optional<uint64_t> seed) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) {
      return absl::PermissionDeniedError(
          absl::StrCat("cannot create output directory ", dir_, ": ",
                       ec.message()));
    }
    ordered_json manifest;
    manifest["command"] = std::string(command);
    manifest["tool_version"] = LDPFL_VERSION;
    manifest["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
    manifest["parameters"] = std::move(parameters);
    manifest["outputs"] = ordered_json::array();
    for (const auto& [name, content] : files_) {
      if (absl::Status s = WriteFile(Path(name), content); !s.ok()) return s;
      manifest["outputs"].push_back({{"file", name},
                                     {"sha256", Sha256Hex(content)},
                                     {"bytes", content.size()}});
    }
    return WriteFile(Path("manifest.json"), manifest.dump(2) + "\n");
  }

  std::string Path(std::string_view name) const {
    return (std::filesystem::path(dir_) / name).string();
  }

 private:
  std::string dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

// ---------------------------------------------------------------- calibrate

int Calibrate(const std::string& method_name, const StudyFlags& f,
              std::ostream& out, std::ostream& err) {
  absl::StatusOr<Method> method = ParseMethod(method_name);
  if (!method.ok()) return ReportError(method.status(), "calibrate", out, err);
  const LossRegularity reg = f.Regularity();
  if (absl::Status s = ValidateRegularity(reg); !s.ok()) {
    return ReportError(s, "calibrate", out, err);
  }
  if (f.users < 1) {
    return ReportError(absl::InvalidArgumentError("users must be at least 1"),
                       "calibrate", out, err);
  }
  const CalibrationRequest request{{f.epsilon, f.delta}, f.q, f.rounds,
                                   *method, f.delta_tilde};
  absl::StatusOr<CalibrationResult> result = ldpfl::Calibrate(request);
  if (!result.ok()) return ReportError(result.status(), "calibrate", out, err);

  const double sigma_agg_sq = result->sigma_sq / static_cast<double>(f.users);
  ordered_json json;
  json["method"] = std::string(MethodName(*method));
  json["request"] = {{"epsilon", f.epsilon},
                     {"delta", f.delta},
                     {"q", f.q},
                     {"rounds", f.rounds}};
  if (*method == Method::kAc1) json["request"]["delta_tilde"] = f.delta_tilde;
  json["sigma_sq"] = result->sigma_sq;
  json["sigma"] = std::sqrt(result->sigma_sq);
  json["validity"] = ValidityJson(result->validity);
  json["caps"] = CapsJson(ComputeValidityCaps(f.q, f.rounds, reg, f.users));
  json["users"] = f.users;
  json["sigma_agg_sq"] = sigma_agg_sq;
  json["utility_lb"] = UtilityLowerBound(f.rounds, reg, sigma_agg_sq);
  json["rate_ub_bits"] = RateUpperBound(reg, std::sqrt(result->sigma_sq));
  out << json.dump(2) << "\n";
  return kExitOk;
}

// -------------------------------------------------------------------- sweep

ordered_json SweepConfigJson(const SweepConfig& config) {
  ordered_json methods = ordered_json::array();
  for (Method m : config.methods) methods.push_back(std::string(MethodName(m)));
  return {{"methods", methods},
          {"epsilons", config.epsilons},
          {"rounds", config.rounds},
          {"delta", config.delta},
          {"q", config.q},
          {"users", config.users},
          {"regularity", RegularityJson(config.reg)},
          {"delta_tilde", config.ac1_delta_tilde}};
}

ordered_json SweepReport(const SweepConfig& config,
                         const std::vector<TradeoffPoint>& rows) {
  ordered_json report;
  report["config"] = SweepConfigJson(config);
  report["rows"] = rows.size();
  report["caps"] = ordered_json::array();
  for (int64_t t : config.rounds) {
    ordered_json caps =
        CapsJson(ComputeValidityCaps(config.q, t, config.reg, config.users));
    caps["T"] = t;
    report["caps"].push_back(std::move(caps));
  }
  const std::vector<ReferenceComparison> comparisons =
      CompareWithReference(rows);
  ordered_json entries = ordered_json::array();
  for (const ReferenceComparison& c : comparisons) {
    entries.push_back(
        {{"method", std::string(MethodName(c.method))},
         {"reference_utility", c.reference_utility},
         {"computed_utility", c.computed_utility
                                  ? ordered_json(*c.computed_utility)
                                  : ordered_json(nullptr)},
         {"reference_rate_bits", c.reference_rate_bits},
         {"computed_rate_bits", c.computed_rate_bits
                                    ? ordered_json(*c.computed_rate_bits)
                                    : ordered_json(nullptr)}});
  }
  report["reference"] = {
      {"informational", true},
      {"epsilon", kReferenceEpsilon},
      {"T", kReferenceRounds},
      {"entries", std::move(entries)},
      {"ordering_reproduced", ReferenceOrderingReproduced(comparisons)}};
  return report;
}

SweepConfig SweepConfigFromFlags(const StudyFlags& f,
                                 const std::vector<Method>& methods,
                                 const std::vector<double>& epsilons,
                                 const std::vector<int64_t>& rounds) {
  SweepConfig config = DefaultStudy();
  if (!methods.empty()) config.methods = methods;
  if (!epsilons.empty()) config.epsilons = epsilons;
  if (!rounds.empty()) config.rounds = rounds;
  config.delta = f.delta;
  config.q = f.q;
  config.users = f.users;
  config.reg = f.Regularity();
  config.ac1_delta_tilde = f.delta_tilde;
  return config;
}

int Sweep(const SweepConfig& config, const std::string& out_dir, bool plot,
          std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::vector<TradeoffPoint>> rows = ldpfl::Sweep(config);
  if (!rows.ok()) return ReportError(rows.status(), "sweep", out, err);

  OutputSet outputs(out_dir);
  outputs.Add("sweep.csv", SweepCsv(*rows));
  outputs.Add("sweep_report.json", SweepReport(config, *rows).dump(2) + "\n");
  if (plot) {
    SweepPlots plots = RenderSweepPlots(*rows, config);
    outputs.Add("noise.svg", std::move(plots.noise));
    outputs.Add("utility.svg", std::move(plots.utility));
    outputs.Add("rate.svg", std::move(plots.rate));
  }
  ordered_json parameters = SweepConfigJson(config);
  parameters["plot"] = plot;
  if (absl::Status s = outputs.Commit("sweep", std::move(parameters),
                                      std::nullopt);
      !s.ok()) {
    return ReportError(s, "sweep", out, err);
  }
  out << "wrote " << rows->size() << " rows to " << outputs.Path("sweep.csv")
      << "\n";
  return kExitOk;
}

// --------------------------------------------------------------------- plot

int Plot(const std::string& in_path, const SweepConfig& config,
         const std::string& out_dir, std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::string> text = ReadFile(in_path);
  if (!text.ok()) return ReportError(text.status(), "plot", out, err);
  absl::StatusOr<std::vector<TradeoffPoint>> rows = ParseSweepCsv(*text);
  if (!rows.ok()) return ReportError(rows.status(), "plot", out, err);
  SweepPlots plots = RenderSweepPlots(*rows, config);
  OutputSet outputs(out_dir);
  outputs.Add("noise.svg", std::move(plots.noise));
  outputs.Add("utility.svg", std::move(plots.utility));
  outputs.Add("rate.svg", std::move(plots.rate));
  ordered_json parameters = {{"input", in_path},
                             {"input_sha256", Sha256Hex(*text)},
                             {"q", config.q},
                             {"users", config.users},
                             {"regularity", RegularityJson(config.reg)}};
  if (absl::Status s =
          outputs.Commit("plot", std::move(parameters), std::nullopt);
      !s.ok()) {
    return ReportError(s, "plot", out, err);
  }
  out << "wrote 3 plots to " << out_dir << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------- simulate

absl::Status FieldError(std::string_view field, std::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat(std::string(field), ": ", std::string(what)));
}

absl::StatusOr<double> ReadReal(const ordered_json& value,
                                std::string_view field) {
  if (!value.is_number()) return FieldError(field, "expected a number");
  return value.get<double>();
}

absl::StatusOr<int64_t> ReadInteger(const ordered_json& value,
                                    std::string_view field) {
  if (!value.is_number_integer()) {
    return FieldError(field, "expected an integer");
  }
  if (value.is_number_unsigned() &&
      value.get<uint64_t>() >
          static_cast<uint64_t>(std::numeric_limits<int64_t>::max())) {
    return FieldError(field, "out of range");
  }
  return value.get<int64_t>();
}

template <typename T, typename Reader>
absl::StatusOr<std::vector<T>> ReadPerUser(const ordered_json& value,
                                           std::string_view field,
                                           int64_t users, Reader read) {
  if (!value.is_array()) {
    absl::StatusOr<T> scalar = read(value, field);
    if (!scalar.ok()) return scalar.status();
    return std::vector<T>(static_cast<size_t>(users), *scalar);
  }
  if (static_cast<int64_t>(value.size()) != users) {
    return FieldError(field, absl::StrCat("expected ", users,
                                          " entries (one per user), found ",
                                          value.size()));
  }
  std::vector<T> out;
  for (const ordered_json& item : value) {
    absl::StatusOr<T> v = read(item, field);
    if (!v.ok()) return v.status();
    out.push_back(*v);
  }
  return out;
}

constexpr std::string_view kRequiredSimFields[] = {
    "users", "dim", "per_user_data", "q", "sigma", "rounds", "grad_bound"};
constexpr std::string_view kOptionalSimFields[] = {
    "clip", "lambda", "mu", "seed", "repetitions", "enforce_grad_bound"};

// Config schema: a JSON object with the fields above. per_user_data, q and
// sigma take a scalar (shared by all users) or an array with one entry per
// user. Defaults: clip 1, lambda 1, mu 1, seed 0, repetitions 1,
// enforce_grad_bound true.
absl::StatusOr<SimConfig> SimConfigFromJson(const ordered_json& j) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    const auto known = [&](std::string_view name) { return key == name; };
    if (std::none_of(std::begin(kRequiredSimFields),
                     std::end(kRequiredSimFields), known) &&
        std::none_of(std::begin(kOptionalSimFields),
                     std::end(kOptionalSimFields), known)) {
      return FieldError(key, "unknown field");
    }
  }
  for (std::string_view field : kRequiredSimFields) {
    if (!j.contains(std::string(field))) {
      return FieldError(field, "required field missing");
    }
  }
  auto integer = [&](std::string_view field) {
    return ReadInteger(j.at(std::string(field)), field);
  };
  auto real = [&](std::string_view field) {
    return ReadReal(j.at(std::string(field)), field);
  };

  SimConfig cfg;
  absl::StatusOr<int64_t> users = integer("users");
  if (!users.ok()) return users.status();
  if (*users < 1) return FieldError("users", "must be at least 1");
  cfg.users = *users;
  absl::StatusOr<int64_t> dim = integer("dim");
  if (!dim.ok()) return dim.status();
  cfg.dim = *dim;
  absl::StatusOr<int64_t> rounds = integer("rounds");
  if (!rounds.ok()) return rounds.status();
  cfg.rounds = *rounds;
  absl::StatusOr<double> grad_bound = real("grad_bound");
  if (!grad_bound.ok()) return grad_bound.status();
  cfg.grad_bound = *grad_bound;

  absl::StatusOr<std::vector<int64_t>> sizes = ReadPerUser<int64_t>(
      j.at("per_user_data"), "per_user_data", cfg.users, ReadInteger);
  if (!sizes.ok()) return sizes.status();
  cfg.per_user_data = *sizes;
  absl::StatusOr<std::vector<double>> q =
      ReadPerUser<double>(j.at("q"), "q", cfg.users, ReadReal);
  if (!q.ok()) return q.status();
  cfg.q = *q;
  absl::StatusOr<std::vector<double>> sigma =
      ReadPerUser<double>(j.at("sigma"), "sigma", cfg.users, ReadReal);
  if (!sigma.ok()) return sigma.status();
  cfg.sigma = *sigma;

  for (auto [field, target] : {std::pair<std::string_view, double*>{
                                   "clip", &cfg.clip},
                               {"lambda", &cfg.lambda},
                               {"mu", &cfg.mu}}) {
    if (!j.contains(std::string(field))) continue;
    absl::StatusOr<double> v = real(field);
    if (!v.ok()) return v.status();
    *target = *v;
  }
  if (j.contains("seed")) {
    const ordered_json& seed = j.at("seed");
    if (!seed.is_number_integer() ||
        (!seed.is_number_unsigned() && seed.get<int64_t>() < 0)) {
      return FieldError("seed", "expected a nonnegative integer");
    }
    cfg.seed = seed.get<uint64_t>();
  }
  if (j.contains("repetitions")) {
    absl::StatusOr<int64_t> reps = integer("repetitions");
    if (!reps.ok()) return reps.status();
    cfg.repetitions = *reps;
  }
  if (j.contains("enforce_grad_bound")) {
    if (!j.at("enforce_grad_bound").is_boolean()) {
      return FieldError("enforce_grad_bound", "expected a boolean");
    }
    cfg.enforce_grad_bound = j.at("enforce_grad_bound").get<bool>();
  }
  if (absl::Status s = ValidateSimConfig(cfg); !s.ok()) return s;
  return cfg;
}

struct SimFlags {
  std::string config_path;
  int64_t users = 0;
  int64_t dim = 0;
  int64_t per_user_data = 0;
  int64_t rounds = 0;
  int64_t repetitions = 0;
  double q = 0.0;
  double sigma = 0.0;
  double clip = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double grad_bound = 0.0;
  uint64_t seed = 0;
  int threads = 0;
  bool allow_violations = false;
  std::string out = ".";
};

int Simulate(const ordered_json& resolved, int threads,
             const std::string& out_dir, std::ostream& out,
             std::ostream& err) {
  absl::StatusOr<SimConfig> cfg = SimConfigFromJson(resolved);
  if (!cfg.ok()) return ReportError(cfg.status(), "simulate", out, err);
  cfg->threads = threads;
  absl::StatusOr<SimResult> result = RunSimulation(*cfg);
  if (!result.ok()) return ReportError(result.status(), "simulate", out, err);

  std::vector<UserSpec> users;
  for (int64_t k = 0; k < cfg->users; ++k) {
    users.push_back({cfg->per_user_data[k], cfg->q[k], cfg->sigma[k], {}});
  }
  absl::StatusOr<double> sigma_agg_sq = AggregateSigmaSq(users);
  if (!sigma_agg_sq.ok()) {
    return ReportError(sigma_agg_sq.status(), "simulate", out, err);
  }
  const LossRegularity reg{cfg->mu, cfg->lambda, cfg->grad_bound, cfg->clip,
                           cfg->dim};
  const double bound = UtilityLowerBound(cfg->rounds, reg, *sigma_agg_sq);

  int64_t runs_meeting = 0;
  for (const std::vector<double>& gaps : result->loss_gap_by_repetition) {
    if (1.0 / gaps.back() >= bound) ++runs_meeting;
  }
  const double a1 =
      2.0 * std::max(2.0, 1.0 + static_cast<double>(cfg->dim) * *sigma_agg_sq);
  const double scale =
      cfg->grad_bound * cfg->grad_bound / (cfg->lambda * cfg->lambda);
  int64_t mse_violations = 0;
  for (size_t i = 0; i < result->mean_mse.size(); ++i) {
    const double limit = a1 * scale / static_cast<double>(i + 1) +
                         3.0 * result->stderr_mse[i];
    if (result->mean_mse[i] > limit) ++mse_violations;
  }

  ordered_json summary;
  summary["sigma_agg_sq"] = *sigma_agg_sq;
  summary["utility_bound"] = bound;
  summary["empirical_utility"] = result->empirical_utility;
  summary["margin"] = result->empirical_utility - bound;
  summary["bound_met"] = result->empirical_utility >= bound;
  summary["runs_meeting_bound"] = runs_meeting;
  summary["repetitions"] = cfg->repetitions;
  summary["final_mean_loss_gap"] = result->mean_loss_gap.back();
  summary["final_mean_mse"] = result->mean_mse.back();
  summary["mse_bound_violations"] = mse_violations;
  summary["realized_grad_norm_max"] = result->realized_grad_norm_max;
  summary["grad_bound"] = cfg->grad_bound;
  summary["grad_bound_violations"] = result->grad_bound_violations;

  OutputSet outputs(out_dir);
  outputs.Add("trajectory.csv", TrajectoryCsv(*result));
  outputs.Add("summary.json", summary.dump(2) + "\n");
  if (absl::Status s = outputs.Commit("simulate", resolved, cfg->seed);
      !s.ok()) {
    return ReportError(s, "simulate", out, err);
  }
  out << summary.dump(2) << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------- validate

int Validate(bool skip_simulation, const SimBoundOptions& sim,
             std::ostream& out) {
  std::vector<CheckResult> results = {
      CheckValidityCapExact(), CheckUtilityCaps(), CheckAccountantOrdering(),
      CheckAc1Inversion(),     CheckRdpOracle(),   CheckAggregationIdentity(),
      CheckNoiseAggregation(), CheckReferenceOrdering()};
  if (!skip_simulation) results.push_back(CheckSimulationBound(sim));
  bool all = true;
  for (const CheckResult& r : results) {
    all = all && r.passed;
    out << (r.passed ? "PASS  " : "FAIL  ") << r.name << ": " << r.summary
        << "\n";
    for (const std::string& line : r.details) out << "      " << line << "\n";
  }
  out << (all ? "all checks passed" : "some checks failed") << "\n";
  return all ? kExitOk : kExitDomainError;
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kNotFound:
      return kExitDomainError;
    default:
      return kExitInternalError;
  }
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Noise calibration, trade-off bounds and FedSGD simulation "
               "for locally differentially private federated learning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LDPFL_VERSION);

  // calibrate
  StudyFlags cal;
  std::string cal_method;
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Noise variance for one budget");
  calibrate->add_option("--method", cal_method, "proposed, ma, ac1 or ac2")
      ->required();
  calibrate->add_option("--epsilon", cal.epsilon, "Target epsilon")
      ->capture_default_str();
  calibrate->add_option("--delta", cal.delta, "Target delta")
      ->capture_default_str();
  calibrate->add_option("--q", cal.q, "Sampling probability")
      ->capture_default_str();
  calibrate->add_option("--rounds", cal.rounds, "Rounds T")
      ->capture_default_str();
  calibrate->add_option("--delta-tilde", cal.delta_tilde, "AC1 slack delta")
      ->capture_default_str();
  AddRegularityFlags(calibrate, cal);

  // sweep
  StudyFlags sw;
  std::vector<std::string> sw_methods;
  std::vector<double> sw_epsilons;
  std::vector<int64_t> sw_rounds;
  std::string sw_out = ".";
  bool sw_plot = false;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Epsilon by T sweep of all bounds");
  sweep->add_option("--method", sw_methods, "Methods (default: all)")
      ->delimiter(',');
  sweep->add_option("--epsilon", sw_epsilons,
                    "Epsilon grid (default 0.10, 0.15, ..., 1.00)")
      ->delimiter(',');
  sweep->add_option("--rounds", sw_rounds, "Round counts (default 70000,700000)")
      ->delimiter(',');
  sweep->add_option("--delta", sw.delta, "Target delta")->capture_default_str();
  sweep->add_option("--q", sw.q, "Sampling probability")->capture_default_str();
  sweep->add_option("--delta-tilde", sw.delta_tilde, "AC1 slack delta")
      ->capture_default_str();
  AddRegularityFlags(sweep, sw);
  sweep->add_option("--out", sw_out, "Output directory")->capture_default_str();
  sweep->add_flag("--plot", sw_plot, "Also write SVG panels");

  // plot
  StudyFlags pl;
  std::string pl_in;
  std::string pl_out = ".";
  CLI::App* plot = app.add_subcommand("plot", "Re-plot an existing sweep CSV");
  plot->add_option("--in", pl_in, "Sweep CSV")->required();
  plot->add_option("--q", pl.q, "Sampling probability for caps")
      ->capture_default_str();
  AddRegularityFlags(plot, pl);
  plot->add_option("--out", pl_out, "Output directory")->capture_default_str();

  // simulate
  SimFlags sim;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Seeded noisy FedSGD simulation");
  simulate->add_option("--config", sim.config_path, "JSON config file");
  CLI::Option* o_users = simulate->add_option("--users", sim.users, "K");
  CLI::Option* o_dim = simulate->add_option("--dim", sim.dim, "d");
  CLI::Option* o_data =
      simulate->add_option("--per-user-data", sim.per_user_data, "|D_k|");
  CLI::Option* o_q = simulate->add_option("--q", sim.q, "q_k");
  CLI::Option* o_sigma = simulate->add_option("--sigma", sim.sigma, "sigma_k");
  CLI::Option* o_clip = simulate->add_option("--clip", sim.clip, "C");
  CLI::Option* o_rounds = simulate->add_option("--rounds", sim.rounds, "T");
  CLI::Option* o_lambda = simulate->add_option("--lambda", sim.lambda, "lambda");
  CLI::Option* o_mu = simulate->add_option("--mu", sim.mu, "mu");
  CLI::Option* o_grad =
      simulate->add_option("--grad-bound", sim.grad_bound, "G");
  CLI::Option* o_seed = simulate->add_option("--seed", sim.seed, "Root seed");
  CLI::Option* o_reps =
      simulate->add_option("--repetitions", sim.repetitions, "Repetitions");
  simulate->add_option("--threads", sim.threads,
                       "Worker threads (0: hardware concurrency)")
      ->capture_default_str();
  simulate->add_flag("--allow-grad-bound-violations", sim.allow_violations,
                     "Report rather than fail when a gradient norm exceeds G");
  simulate->add_option("--out", sim.out, "Output directory")
      ->capture_default_str();

  // validate
  bool val_skip_sim = false;
  SimBoundOptions val_sim;
  CLI::App* validate =
      app.add_subcommand("validate", "Run the end-to-end check suite");
  validate->add_flag("--skip-simulation", val_skip_sim,
                     "Skip the simulation-versus-bound check");
  validate->add_option("--repetitions", val_sim.repetitions,
                       "Simulation repetitions per sigma")
      ->capture_default_str();
  validate->add_option("--seed", val_sim.seed, "Simulation root seed")
      ->capture_default_str();
  validate->add_option("--threads", val_sim.threads, "Worker threads")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitDomainError;
  }

  if (calibrate->parsed()) return Calibrate(cal_method, cal, out, err);

  if (sweep->parsed()) {
    std::vector<Method> methods;
    for (const std::string& name : sw_methods) {
      absl::StatusOr<Method> m = ParseMethod(name);
      if (!m.ok()) return ReportError(m.status(), "sweep", out, err);
      methods.push_back(*m);
    }
    if (absl::Status s = ValidateRegularity(sw.Regularity()); !s.ok()) {
      return ReportError(s, "sweep", out, err);
    }
    return Sweep(SweepConfigFromFlags(sw, methods, sw_epsilons, sw_rounds),
                 sw_out, sw_plot, out, err);
  }

  if (plot->parsed()) {
    return Plot(pl_in, SweepConfigFromFlags(pl, {}, {}, {}), pl_out, out, err);
  }

  if (simulate->parsed()) {
    ordered_json resolved = ordered_json::object();
    if (!sim.config_path.empty()) {
      absl::StatusOr<std::string> text = ReadFile(sim.config_path);
      if (!text.ok()) return ReportError(text.status(), "simulate", out, err);
      resolved = ordered_json::parse(*text, nullptr, false);
      if (resolved.is_discarded()) {
        return ReportError(absl::InvalidArgumentError(absl::StrCat(
                               "config ", sim.config_path,
                               " is not valid JSON")),
                           "simulate", out, err);
      }
      if (!resolved.is_object()) {
        return ReportError(
            absl::InvalidArgumentError("config must be a JSON object"),
            "simulate", out, err);
      }
    }
    auto set = [&](CLI::Option* opt, const char* key, auto value) {
      if (opt->count() > 0) resolved[key] = value;
    };
    set(o_users, "users", sim.users);
    set(o_dim, "dim", sim.dim);
    set(o_data, "per_user_data", sim.per_user_data);
    set(o_q, "q", sim.q);
    set(o_sigma, "sigma", sim.sigma);
    set(o_clip, "clip", sim.clip);
    set(o_rounds, "rounds", sim.rounds);
    set(o_lambda, "lambda", sim.lambda);
    set(o_mu, "mu", sim.mu);
    set(o_grad, "grad_bound", sim.grad_bound);
    set(o_seed, "seed", sim.seed);
    set(o_reps, "repetitions", sim.repetitions);
    if (sim.allow_violations) resolved["enforce_grad_bound"] = false;
    return Simulate(resolved, sim.threads, sim.out, out, err);
  }

  if (validate->parsed()) return Validate(val_skip_sim, val_sim, out);
  return kExitInternalError;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  std::vector<const char*> argv = {"ldpfl"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ldpfl
