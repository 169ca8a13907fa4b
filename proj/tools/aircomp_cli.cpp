// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


// aircomp: command-line front end.
//
//   aircomp sweep    --config FILE [--schemes a,b] [--trials T] [--seed S] [--threads J] --out CSV
//   aircomp bounds   --config FILE --out CSV
//   aircomp validate [--fast] [--seed S] [--threads J]
//   aircomp single   --config FILE --n N --scheme ID [--trials T] [--seed S]
//
// Exit status: 0 success, 1 validation failure, 2 configuration or I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aircomp/aircomp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;

struct CommonArgs {
  std::string config;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

aircomp::ExperimentConfig load_with_overrides(const CommonArgs& args) {
  aircomp::ExperimentConfig cfg = aircomp::load_config(args.config);
  if (args.trials) cfg.trials = *args.trials;
  if (args.seed) cfg.seed = *args.seed;
  if (args.threads) cfg.threads = *args.threads;
  aircomp::validate(cfg);
  return cfg;
}

std::vector<aircomp::SchemeId> parse_scheme_list(const std::string& text) {
  std::vector<aircomp::SchemeId> out;
  for (std::string_view name : aircomp::detail::split(text, ',')) {
    const auto id = aircomp::parse_scheme(aircomp::detail::trim(name));
    if (!id) throw aircomp::ConfigError("unknown scheme '" + std::string(name) + "'");
    out.push_back(*id);
  }
  if (out.empty()) throw aircomp::ConfigError("--schemes is empty");
  return out;
}

int run_sweep_command(const CommonArgs& args, const std::string& schemes_arg, std::string out) {
  const aircomp::ExperimentConfig cfg = load_with_overrides(args);
  std::vector<aircomp::SchemeId> schemes;
  if (schemes_arg.empty()) {
    for (const auto& s : aircomp::kSchemes) schemes.push_back(s.id);
  } else {
    schemes = parse_scheme_list(schemes_arg);
  }
  if (out.empty()) out = cfg.output;
  if (out.empty()) throw aircomp::ConfigError("no output path: pass --out or set 'output' in the config");

  const aircomp::SweepResult result = aircomp::run_sweep(cfg, schemes);
  if (result.rejected_draws() > 0) {
    std::fprintf(stderr, "note: %d degenerate channel draws were rejected and redrawn\n",
                 result.rejected_draws());
  }
  try {
    aircomp::write_csv(result, out);
  } catch (const aircomp::IoError&) {
    // keep the computed results
    std::fputs(aircomp::to_csv(result).c_str(), stdout);
    throw;
  }
  return kExitOk;
}

int run_bounds_command(const CommonArgs& args, const std::string& out) {
  const aircomp::ExperimentConfig cfg = load_with_overrides(args);
  aircomp::RngStream geo_stream(cfg.seed, aircomp::kGeometryStreamId);
  const aircomp::Geometry geo = aircomp::make_geometry(cfg.system, geo_stream);

  std::string csv = "N,approx_array_gain,mse_upper_bound,n_threshold,min_gamma_sq_approx,mse_lower_bound\n";
  for (int N : cfg.n_sweep) {
    aircomp::SystemConfig sys = cfg.system;
    sys.N = N;
    const aircomp::AsymptoticParams p = aircomp::detail::asymptotic_params(sys, geo, cfg.epsilon);
    const double g1 = aircomp::min_gamma_sq_approx(p, p.rho_min);
    csv += std::to_string(N);
    for (double x : {aircomp::approx_array_gain(N, sys.K), aircomp::mse_upper_bound(p),
                     aircomp::n_threshold(p, p.rho_min), g1,
                     aircomp::mse_lower_bound(g1, sys.p_max, sys.sigma2)}) {
      csv += ',';
      csv += aircomp::format_double(x);
    }
    csv += '\n';
  }
  std::ofstream os(out, std::ios::binary | std::ios::trunc);
  os << csv;
  os.flush();
  if (!os) {
    std::fputs(csv.c_str(), stdout);
    throw aircomp::IoError("cannot write '" + out + "'");
  }
  return kExitOk;
}

int run_validate_command(bool fast, const aircomp::validation::Options& opt) {
  namespace v = aircomp::validation;
  bool all = true;
  for (const std::string& id : fast ? v::fast_ids() : v::full_ids()) {
    const v::CheckResult r = v::run_check(id, opt);
    std::printf("%s\n", v::format_result(r).c_str());
    std::fflush(stdout);
    all = all && r.passed;
  }
  return all ? kExitOk : kExitValidation;
}

int run_single_command(const CommonArgs& args, int n, const std::string& scheme_name) {
  aircomp::ExperimentConfig cfg = load_with_overrides(args);
  const auto scheme = aircomp::parse_scheme(scheme_name);
  if (!scheme) throw aircomp::ConfigError("unknown scheme '" + scheme_name + "'");
  cfg.n_sweep = {n};
  const aircomp::SchemeId schemes[1] = {*scheme};
  const aircomp::SweepResult result = aircomp::run_sweep(cfg, schemes);
  std::printf("%s\n%s\n", std::string(aircomp::kCsvHeader).c_str(),
              aircomp::format_csv_row(result.rows.front()).c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-assisted over-the-air computation simulator"};
  app.require_subcommand(1);

  CommonArgs sweep_args;
  std::string sweep_schemes;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo MSE sweep over N");
  sweep->add_option("--config", sweep_args.config, "config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--schemes", sweep_schemes, "comma-separated scheme ids (default: all)");
  sweep->add_option("--trials", sweep_args.trials, "trials per point");
  sweep->add_option("--seed", sweep_args.seed, "master seed");
  sweep->add_option("--threads", sweep_args.threads, "worker threads, 0 = all cores");
  sweep->add_option("--out", sweep_out, "output CSV");

  CommonArgs bounds_args;
  std::string bounds_out;
  auto* bounds = app.add_subcommand("bounds", "closed-form asymptotic curves over the N sweep");
  bounds->add_option("--config", bounds_args.config, "config file")->required()->check(CLI::ExistingFile);
  bounds->add_option("--seed", bounds_args.seed, "master seed (geometry draw)");
  bounds->add_option("--out", bounds_out, "output CSV")->required();

  bool fast = false;
  aircomp::validation::Options vopt;
  auto* validate = app.add_subcommand("validate", "run the oracle, invariant and acceptance checks");
  validate->add_flag("--fast", fast, "oracle and invariant checks only");
  validate->add_option("--seed", vopt.seed, "base seed");
  validate->add_option("--threads", vopt.threads, "worker threads, 0 = all cores");

  CommonArgs single_args;
  int single_n = 0;
  std::string single_scheme;
  auto* single = app.add_subcommand("single", "one (scheme, N) point, row printed to stdout");
  single->add_option("--config", single_args.config, "config file")->required()->check(CLI::ExistingFile);
  single->add_option("--n", single_n, "IRS elements")->required()->check(CLI::PositiveNumber);
  single->add_option("--scheme", single_scheme, "scheme id")->required();
  single->add_option("--trials", single_args.trials, "trials");
  single->add_option("--seed", single_args.seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sweep) return run_sweep_command(sweep_args, sweep_schemes, sweep_out);
    if (*bounds) return run_bounds_command(bounds_args, bounds_out);
    if (*validate) return run_validate_command(fast, vopt);
    if (*single) return run_single_command(single_args, single_n, single_scheme);
  } catch (const aircomp::ConfigError& e) {
    std::fprintf(stderr, "aircomp: %s\n", e.what());
    return kExitConfig;
  } catch (const aircomp::IoError& e) {
    std::fprintf(stderr, "aircomp: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "aircomp: %s\n", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
