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

#ifndef AIRCOMP_EXPERIMENTS_HPP
#define AIRCOMP_EXPERIMENTS_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "aircomp/analysis.hpp"
#include "aircomp/channel.hpp"
#include "aircomp/numerics.hpp"
#include "aircomp/protocol.hpp"

namespace aircomp {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Schemes
// ---------------------------------------------------------------------------

enum class SchemeId { kOptPcIrs, kInvPcIrs, kOptPcNoIrs, kInvPcNoIrs, kFixedPhaseOptPc };

struct SchemeSpec {
  SchemeId id;
  std::string_view name;
  std::string_view description;
};

inline constexpr std::array<SchemeSpec, 5> kSchemes{{
    {SchemeId::kOptPcIrs, "OPT_PC_IRS", "optimal power control, voted IRS phases, MRC to the IRS"},
    {SchemeId::kInvPcIrs, "INV_PC_IRS", "channel-inversion power control, voted IRS phases"},
    {SchemeId::kOptPcNoIrs, "OPT_PC_NO_IRS",
     "optimal power control on direct links, dominant-eigenvector combiner"},
    {SchemeId::kInvPcNoIrs, "INV_PC_NO_IRS",
     "channel-inversion power control on direct links, dominant-eigenvector combiner"},
    {SchemeId::kFixedPhaseOptPc, "FIXED_PHASE_OPT_PC",
     "optimal power control, all IRS phases 0, MRC to the IRS"},
}};

inline const SchemeSpec& scheme_spec(SchemeId id) {
  for (const SchemeSpec& s : kSchemes) {
    if (s.id == id) return s;
  }
  throw std::invalid_argument("unknown scheme id");
}

inline std::string_view scheme_name(SchemeId id) { return scheme_spec(id).name; }

inline std::optional<SchemeId> parse_scheme(std::string_view name) {
  for (const SchemeSpec& s : kSchemes) {
    if (s.name == name) return s.id;
  }
  return std::nullopt;
}

inline bool uses_irs(SchemeId id) {
  return id == SchemeId::kOptPcIrs || id == SchemeId::kInvPcIrs || id == SchemeId::kFixedPhaseOptPc;
}

inline bool uses_channel_inversion(SchemeId id) {
  return id == SchemeId::kInvPcIrs || id == SchemeId::kInvPcNoIrs;
}

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  SystemConfig system;
  std::vector<int> n_sweep{32, 64, 128, 256, 512};
  int trials = 10000;
  std::uint64_t seed = 1;
  bool redraw_geometry = false;  // fresh positions and angles every trial
  double epsilon = 0.9;          // target ratio for the n_threshold column
  PhaseRule phase_rule = PhaseRule::kArrayConsistent;
  unsigned threads = 1;  // 0 = hardware concurrency
  std::string output;
};

inline void validate(const ExperimentConfig& c) {
  validate(c.system);
  if (c.trials < 1) throw ConfigError("invalid configuration: trials must be >= 1");
  if (c.n_sweep.empty()) throw ConfigError("invalid configuration: n_sweep is empty");
  for (std::size_t i = 0; i < c.n_sweep.size(); ++i) {
    if (c.n_sweep[i] < 1) throw ConfigError("invalid configuration: n_sweep entries must be >= 1");
    if (i > 0 && c.n_sweep[i] <= c.n_sweep[i - 1]) {
      throw ConfigError("invalid configuration: n_sweep must be strictly increasing");
    }
  }
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) {
    throw ConfigError("invalid configuration: epsilon must lie in (0, 1)");
  }
}

// ---------------------------------------------------------------------------
// Trials
// ---------------------------------------------------------------------------

/// Long-term variables fixed for as long as the geometry is: the MRC
/// combiner towards the IRS and the voted IRS phases.
struct LongTermDesign {
  ComplexVector beamformer;
  PhaseShiftVector phases;
};

inline LongTermDesign design_long_term(const SystemConfig& config, const Geometry& geometry,
                                       PhaseRule rule = PhaseRule::kArrayConsistent) {
  return {receive_beamformer(geometry.phi_r, config.M, config.spacing_ratio),
          design_phases(geometry.phi_t, geometry.nu, config.N, config.L, config.spacing_ratio, rule)};
}

/// Unit vector along the principal eigenvector of sum_k h_d,k h_d,k^H.
inline ComplexVector dominant_direct_direction(const ChannelRealization& realization) {
  const auto M = static_cast<Eigen::Index>(realization.antennas());
  Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(M, M);
  for (const ComplexVector& h : realization.h_direct) {
    const Eigen::Map<const Eigen::VectorXcd> hv(h.data(), M);
    cov.noalias() += hv * hv.adjoint();
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(cov);
  const Eigen::VectorXcd top = solver.eigenvectors().col(M - 1).normalized();
  return ComplexVector(top.data(), top.data() + M);
}

struct TrialOutcome {
  double mse = 0.0;
  int critical_number = 0;
  int rejected_draws = 0;  // realizations discarded for a zero effective channel
};

inline constexpr int kMaxChannelDraws = 64;

inline std::vector<Complex> scheme_gammas(SchemeId scheme, const ChannelRealization& realization,
                                          const LongTermDesign& design) {
  switch (scheme) {
    case SchemeId::kOptPcIrs:
    case SchemeId::kInvPcIrs:
      return effective_scalar_channel(realization, design.beamformer, design.phases);
    case SchemeId::kFixedPhaseOptPc:
      return effective_scalar_channel(
          realization, design.beamformer,
          PhaseShiftVector::zeros(static_cast<int>(design.phases.size()), design.phases.levels()));
    case SchemeId::kOptPcNoIrs:
    case SchemeId::kInvPcNoIrs: {
      if (realization.antennas() == 1) return direct_scalar_channel(realization, ComplexVector{1.0});
      return direct_scalar_channel(realization, dominant_direct_direction(realization));
    }
  }
  throw std::invalid_argument("scheme_gammas: unknown scheme");
}

/// One coherence block under `scheme`. Realizations with any zero effective
/// channel are discarded and redrawn from the same stream.
inline TrialOutcome run_trial(const SystemConfig& config, const Geometry& geometry,
                              const LongTermDesign& design, SchemeId scheme, RngStream& stream) {
  TrialOutcome out;
  for (int attempt = 0; attempt < kMaxChannelDraws; ++attempt) {
    const ChannelRealization realization = sample_channels(geometry, config, stream);
    const std::vector<Complex> gammas = scheme_gammas(scheme, realization, design);
    const bool degenerate =
        std::any_of(gammas.begin(), gammas.end(), [](Complex g) { return !(std::norm(g) > 0.0); });
    if (degenerate) {
      ++out.rejected_draws;
      continue;
    }
    const PowerSolution sol = uses_channel_inversion(scheme)
                                  ? channel_inversion_power_control(gammas, config.p_max, config.sigma2)
                                  : optimal_power_control(gammas, config.p_max, config.sigma2);
    out.mse = sol.mse;
    out.critical_number = sol.critical_number;
    return out;
  }
  throw DegenerateChannelError("run_trial: " + std::to_string(kMaxChannelDraws) +
                               " consecutive realizations had a zero effective channel under " +
                               std::string(scheme_name(scheme)));
}

inline TrialOutcome run_trial(const SystemConfig& config, const Geometry& geometry, SchemeId scheme,
                              RngStream& stream, PhaseRule rule = PhaseRule::kArrayConsistent) {
  return run_trial(config, geometry, design_long_term(config, geometry, rule), scheme, stream);
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepRow {
  SchemeId scheme = SchemeId::kOptPcIrs;
  int N = 0;
  int M = 0;
  int K = 0;
  int trials = 0;
  double mean_mse = 0.0;
  double stderr_mse = 0.0;
  double mean_ktilde = 0.0;
  double stderr_ktilde = 0.0;  // in memory only, not part of the CSV
  double bound_mse = std::numeric_limits<double>::quiet_NaN();
  double n_threshold = std::numeric_limits<double>::quiet_NaN();
  int rejected_draws = 0;

  // NaN columns compare equal to NaN so identical sweeps compare equal.
  bool operator==(const SweepRow& o) const {
    auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
    return scheme == o.scheme && N == o.N && M == o.M && K == o.K && trials == o.trials &&
           same(mean_mse, o.mean_mse) && same(stderr_mse, o.stderr_mse) &&
           same(mean_ktilde, o.mean_ktilde) && same(stderr_ktilde, o.stderr_ktilde) &&
           same(bound_mse, o.bound_mse) && same(n_threshold, o.n_threshold) &&
           rejected_draws == o.rejected_draws;
  }
};

struct SweepResult {
  std::vector<SweepRow> rows;

  int rejected_draws() const {
    int total = 0;
    for (const SweepRow& r : rows) total += r.rejected_draws;
    return total;
  }
  const SweepRow* find(SchemeId scheme, int N) const {
    for (const SweepRow& r : rows) {
      if (r.scheme == scheme && r.N == N) return &r;
    }
    return nullptr;
  }
};

/// Stream id reserved for the single geometry draw of a sweep. Trial t
/// uses stream id t, independent of N and scheme, so every sweep point and
/// scheme sees common random numbers.
inline constexpr std::uint64_t kGeometryStreamId = std::uint64_t{1} << 63;

namespace detail {

struct MeanAndError {
  double mean;
  double stderr_;
};

inline MeanAndError mean_and_stderr(std::span<const double> xs) {
  CompensatedSum sum;
  for (double x : xs) sum += x;
  const double n = static_cast<double>(xs.size());
  const double mean = sum.value() / n;
  if (xs.size() < 2) return {mean, 0.0};
  CompensatedSum sq;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq.value() / (n - 1.0)) / std::sqrt(n)};
}

/// Runs body(t) for t in [0, count) on `threads` workers and rethrows the
/// first failure.
template <typename Body>
void parallel_for(int count, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(count, 1)));
  if (threads <= 1) {
    for (int t = 0; t < count; ++t) body(t);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int t = static_cast<int>(w); t < count; t += static_cast<int>(threads)) body(t);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

inline AsymptoticParams asymptotic_params(const SystemConfig& c, const Geometry& g, double epsilon) {
  return {c.M, c.N, c.K, c.p_max, c.sigma2, g.rho_1 * g.rho_r_min(), epsilon};
}

}  // namespace detail

/// Runs every (scheme, N) point. Per-trial results are stored by trial
/// index and reduced in that order, so the result does not depend on the
/// thread count.
inline SweepResult run_sweep(const ExperimentConfig& config, std::span<const SchemeId> schemes) {
  validate(config);
  SweepResult result;
  std::optional<Geometry> shared_geometry;
  if (!config.redraw_geometry) {
    RngStream geo_stream(config.seed, kGeometryStreamId);
    shared_geometry = make_geometry(config.system, geo_stream);
  }

  for (int N : config.n_sweep) {
    SystemConfig sys = config.system;
    sys.N = N;
    std::optional<LongTermDesign> shared_design;
    if (shared_geometry) shared_design = design_long_term(sys, *shared_geometry, config.phase_rule);

    const auto T = static_cast<std::size_t>(config.trials);
    std::vector<std::vector<double>> mse(schemes.size(), std::vector<double>(T));
    std::vector<std::vector<double>> ktilde(schemes.size(), std::vector<double>(T));
    std::vector<std::vector<int>> rejected(schemes.size(), std::vector<int>(T));
    std::vector<double> bound(T);
    std::vector<double> threshold(T);

    detail::parallel_for(config.trials, config.threads, [&](int t) {
      RngStream trial_stream(config.seed, static_cast<std::uint64_t>(t));
      std::optional<Geometry> own_geometry;
      std::optional<LongTermDesign> own_design;
      if (!shared_geometry) {
        own_geometry = make_geometry(sys, trial_stream);
        own_design = design_long_term(sys, *own_geometry, config.phase_rule);
      }
      const Geometry& geometry = own_geometry ? *own_geometry : *shared_geometry;
      const LongTermDesign& design = own_design ? *own_design : *shared_design;

      const AsymptoticParams ap = detail::asymptotic_params(sys, geometry, config.epsilon);
      bound[t] = mse_upper_bound(ap);
      threshold[t] = n_threshold(ap, ap.rho_min);

      for (std::size_t s = 0; s < schemes.size(); ++s) {
        RngStream stream = trial_stream;
        const TrialOutcome o = run_trial(sys, geometry, design, schemes[s], stream);
        mse[s][t] = o.mse;
        ktilde[s][t] = o.critical_number;
        rejected[s][t] = o.rejected_draws;
      }
    });

    const double mean_bound = detail::mean_and_stderr(bound).mean;
    const double mean_threshold = detail::mean_and_stderr(threshold).mean;
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      SweepRow row;
      row.scheme = schemes[s];
      row.N = N;
      row.M = sys.M;
      row.K = sys.K;
      row.trials = config.trials;
      const detail::MeanAndError m = detail::mean_and_stderr(mse[s]);
      row.mean_mse = m.mean;
      row.stderr_mse = m.stderr_;
      const detail::MeanAndError k = detail::mean_and_stderr(ktilde[s]);
      row.mean_ktilde = k.mean;
      row.stderr_ktilde = k.stderr_;
      for (int r : rejected[s]) row.rejected_draws += r;
      if (schemes[s] == SchemeId::kOptPcIrs || schemes[s] == SchemeId::kInvPcIrs) {
        row.bound_mse = mean_bound;
        row.n_threshold = mean_threshold;
      }
      result.rows.push_back(row);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// CSV persistence
// ---------------------------------------------------------------------------

inline constexpr std::string_view kCsvHeader =
    "scheme,N,M,K,trials,mean_mse,stderr_mse,mean_ktilde,bound_mse,n_threshold";

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

inline std::vector<SweepRow> sorted_rows(const SweepResult& result) {
  std::vector<SweepRow> rows = result.rows;
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    const std::string_view na = scheme_name(a.scheme);
    const std::string_view nb = scheme_name(b.scheme);
    return na != nb ? na < nb : a.N < b.N;
  });
  return rows;
}

inline std::string format_csv_row(const SweepRow& r) {
  std::string line;
  line += scheme_name(r.scheme);
  for (int v : {r.N, r.M, r.K, r.trials}) {
    line += ',';
    line += std::to_string(v);
  }
  for (double v : {r.mean_mse, r.stderr_mse, r.mean_ktilde, r.bound_mse, r.n_threshold}) {
    line += ',';
    line += format_double(v);
  }
  return line;
}

inline std::string to_csv(const SweepResult& result) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const SweepRow& r : sorted_rows(result)) {
    out += format_csv_row(r);
    out += '\n';
  }
  return out;
}

inline void write_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << to_csv(result);
  os.flush();
  if (!os) throw IoError("write to '" + path.string() + "' failed");
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

}  // namespace detail

inline SweepResult parse_csv(std::string_view text) {
  SweepResult result;
  std::vector<std::string_view> lines = detail::split(text, '\n');
  if (lines.empty() || detail::trim(lines.front()) != kCsvHeader) {
    throw IoError("CSV header mismatch");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = detail::trim(lines[i]);
    if (line.empty()) continue;
    const std::vector<std::string_view> f = detail::split(line, ',');
    if (f.size() != 10) throw IoError("CSV line " + std::to_string(i + 1) + ": expected 10 fields");
    const auto scheme = parse_scheme(f[0]);
    if (!scheme) throw IoError("CSV line " + std::to_string(i + 1) + ": unknown scheme");
    SweepRow r;
    r.scheme = *scheme;
    auto need_int = [&](std::string_view s) {
      const auto v = detail::parse_number<int>(s);
      if (!v) throw IoError("CSV line " + std::to_string(i + 1) + ": bad integer '" + std::string(s) + "'");
      return *v;
    };
    auto need_double = [&](std::string_view s) {
      const auto v = detail::parse_number<double>(s);
      if (!v) throw IoError("CSV line " + std::to_string(i + 1) + ": bad number '" + std::string(s) + "'");
      return *v;
    };
    r.N = need_int(f[1]);
    r.M = need_int(f[2]);
    r.K = need_int(f[3]);
    r.trials = need_int(f[4]);
    r.mean_mse = need_double(f[5]);
    r.stderr_mse = need_double(f[6]);
    r.mean_ktilde = need_double(f[7]);
    r.bound_mse = need_double(f[8]);
    r.n_threshold = need_double(f[9]);
    result.rows.push_back(r);
  }
  return result;
}

inline SweepResult read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_csv(buf.str());
}

// ---------------------------------------------------------------------------
// Configuration files
// ---------------------------------------------------------------------------

/// W = 10^((dBm - 30) / 10).
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Flat `key = value` text with `#` comments. Unknown keys are errors.
///
///   M, N, K, L                 antennas, IRS elements, devices, phase levels
///   pmax | pmax_dbm            peak device power (W or dBm)
///   sigma2 | sigma2_dbm        noise power (W or dBm)
///   rician_delta | rician_delta_db
///   pure_los, block_direct, redraw_geometry     booleans
///   spacing_ratio              d / lambda
///   pathloss_exponent_reflected, pathloss_exponent_direct
///   ref_loss | ref_loss_db     attenuation at 1 m (linear gain, or loss in dB)
///   disk_radius                device disk radius in meters
///   phi_r, phi_t               fixed IRS-AP angles (radians)
///   nu                         comma-separated device angles (K entries)
///   n_sweep                    comma-separated, strictly increasing N values
///   trials, seed, epsilon, threads
///   phase_rule                 array_consistent | literal
///   output                     default CSV path
inline ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  SystemConfig& sys = cfg.system;
  int line_no = 0;
  for (std::string_view raw : detail::split(text, '\n')) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view line = detail::trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));

    auto bad = [&](const char* what) {
      return ConfigError(where + ": cannot parse " + what + " for key '" + key + "' from '" +
                         std::string(value) + "'");
    };
    auto as_int = [&] {
      const auto v = detail::parse_number<int>(value);
      if (!v) throw bad("integer");
      return *v;
    };
    auto as_u64 = [&] {
      const auto v = detail::parse_number<std::uint64_t>(value);
      if (!v) throw bad("unsigned integer");
      return *v;
    };
    auto as_double = [&] {
      const auto v = detail::parse_number<double>(value);
      if (!v || !std::isfinite(*v)) throw bad("number");
      return *v;
    };
    auto as_bool = [&] {
      if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
      if (value == "false" || value == "0" || value == "no" || value == "off") return false;
      throw bad("boolean");
    };
    auto as_doubles = [&] {
      std::vector<double> out;
      for (std::string_view item : detail::split(value, ',')) {
        const auto v = detail::parse_number<double>(item);
        if (!v) throw bad("number list");
        out.push_back(*v);
      }
      return out;
    };
    auto as_ints = [&] {
      std::vector<int> out;
      for (std::string_view item : detail::split(value, ',')) {
        const auto v = detail::parse_number<int>(item);
        if (!v) throw bad("integer list");
        out.push_back(*v);
      }
      return out;
    };

    if (key == "M") sys.M = as_int();
    else if (key == "N") sys.N = as_int();
    else if (key == "K") sys.K = as_int();
    else if (key == "L") sys.L = as_int();
    else if (key == "pmax") sys.p_max = as_double();
    else if (key == "pmax_dbm") sys.p_max = dbm_to_watts(as_double());
    else if (key == "sigma2") sys.sigma2 = as_double();
    else if (key == "sigma2_dbm") sys.sigma2 = dbm_to_watts(as_double());
    else if (key == "rician_delta") sys.rician_delta = as_double();
    else if (key == "rician_delta_db") sys.rician_delta = std::pow(10.0, as_double() / 10.0);
    else if (key == "pure_los") sys.pure_los = as_bool();
    else if (key == "block_direct") sys.block_direct = as_bool();
    else if (key == "spacing_ratio") sys.spacing_ratio = as_double();
    else if (key == "pathloss_exponent_reflected") sys.pathloss_exponent_reflected = as_double();
    else if (key == "pathloss_exponent_direct") sys.pathloss_exponent_direct = as_double();
    else if (key == "ref_loss") sys.ref_loss_linear = as_double();
    else if (key == "ref_loss_db") sys.ref_loss_linear = std::pow(10.0, -as_double() / 10.0);
    else if (key == "disk_radius") sys.disk_radius = as_double();
    else if (key == "phi_r") sys.phi_r = as_double();
    else if (key == "phi_t") sys.phi_t = as_double();
    else if (key == "nu") sys.nu = as_doubles();
    else if (key == "n_sweep") cfg.n_sweep = as_ints();
    else if (key == "trials") cfg.trials = as_int();
    else if (key == "seed") cfg.seed = as_u64();
    else if (key == "epsilon") cfg.epsilon = as_double();
    else if (key == "threads") cfg.threads = static_cast<unsigned>(std::max(0, as_int()));
    else if (key == "redraw_geometry") cfg.redraw_geometry = as_bool();
    else if (key == "phase_rule") {
      if (value == "array_consistent") cfg.phase_rule = PhaseRule::kArrayConsistent;
      else if (value == "literal") cfg.phase_rule = PhaseRule::kLiteral;
      else throw bad("phase rule");
    } else if (key == "output") cfg.output = std::string(value);
    else throw ConfigError(where + ": unknown key '" + key + "'");
  }
  validate(cfg);
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read configuration file '" + path.string() + "'");
  std::stringstream buf;
  buf << is.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace aircomp

#endif  // AIRCOMP_EXPERIMENTS_HPP
