/*
   Copyright 2026 The levyfn Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <variant>
#include <vector>

#include "levyfn/functional.hpp"
#include "levyfn/levy_model.hpp"
#include "levyfn/rng.hpp"

namespace levyfn {

struct PathConfig {
  double dt = 1e-3;
  double horizon = 100.0;
  /// Survival is declared once the path reaches this level.
  double barrier = std::numeric_limits<double>::infinity();
  /// Paths stop at the first passage below this level (0 gives zeta).
  double lower_level = 0.0;
  /// Jumps below eps are replaced by their compensated mean (and variance).
  double eps = 1e-3;
  bool gaussian_compensation = true;
  std::uint64_t seed = 0;

  /// Rejects degenerate configurations for a start at x.
  void check(double x) const;
};

enum class PathStatus { HitZero, HitBarrier, Censored };

std::string_view to_string(PathStatus s);

/// Euler skeleton of Z started at x. HitZero means the path crossed
/// lower_level; the final point is then the interpolated crossing.
struct PathSample {
  std::vector<double> times;
  std::vector<double> values;
  PathStatus status = PathStatus::Censored;
  /// Crossing time, barrier time, or horizon depending on status.
  double stop_time = 0.0;
  double lower_level = 0.0;
  /// Local scaling index of the driving process (used on the final panel).
  double local_index = 1.0;
  std::uint64_t stream_id = 0;
};

struct FunctionalSample {
  PathStatus status = PathStatus::Censored;
  /// A_t = int_0^t f(Z_s) ds at the path grid points.
  std::vector<double> a_values;
  /// A at the stopping time; +inf when the final panel diverges.
  double a_final = 0.0;
  /// True when the path did not reach the lower level (A_final is a lower bound).
  bool censored = true;
  /// Time-changed skeleton: X at functional times x_times equals Z at eta_times.
  std::vector<double> x_times;
  std::vector<double> x_values;
  std::vector<double> eta_times;
  /// T_0^- on HitZero, otherwise a lower bound for T_inf^+.
  double boundary_time = std::numeric_limits<double>::quiet_NaN();
  bool boundary_is_lower_bound = true;

  /// eta_f(t): piecewise-linear inverse of A.
  double eta(double t) const;
  /// X_t = Z_{eta_f(t)}.
  double x_at(double t) const;
};

/// Precomputed jump law and step coefficients for one (model, config) pair.
class PathSimulator {
 public:
  PathSimulator(const LevyModel& model, const PathConfig& cfg);

  PathSample sample(double x, std::uint64_t stream_id) const;

  const PathConfig& config() const noexcept { return cfg_; }
  double jump_rate() const noexcept { return jump_rate_; }
  double step_drift() const noexcept { return drift_; }
  double step_variance() const noexcept { return variance_; }

  /// One jump from pi restricted to [eps, inf), normalized.
  double sample_jump(Philox4x32& gen) const;

 private:
  LevyModel model_;
  PathConfig cfg_;
  double jump_rate_ = 0.0;
  double drift_ = 0.0;
  double variance_ = 0.0;
};

PathSample sample_path(const LevyModel& model, double x, const PathConfig& cfg, std::uint64_t stream_id);

FunctionalSample functional_along_path(const PathSample& path, const FunctionalSpec& f);

/// Fills the time-changed skeleton and the boundary time.
FunctionalSample time_change(FunctionalSample sample, const PathSample& path);

struct HitProb {};
struct MeanPassage {
  double level;
};
struct CondExpFunctional {
  double lam;
};
struct FunctionalFiniteness {};

using Estimator = std::variant<HitProb, MeanPassage, CondExpFunctional, FunctionalFiniteness>;

std::string_view estimator_name(const Estimator& e);

struct PathRecord {
  std::uint64_t path_id = 0;
  PathStatus status = PathStatus::Censored;
  double zeta = std::numeric_limits<double>::quiet_NaN();
  double a_final = 0.0;
  double t_boundary = 0.0;
};

struct MCSummary {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  /// Paths entering the estimate (HitZero paths only for CondExpFunctional).
  std::size_t n_used = 0;
  double censoring_fraction = 0.0;
  double hit_fraction = 0.0;
  double barrier_fraction = 0.0;
  std::uint64_t seed = 0;
  double wall_clock_seconds = 0.0;
  /// FunctionalFiniteness diagnostics over all paths (inf counted as largest).
  double median_a_final = std::numeric_limits<double>::quiet_NaN();
  double finite_fraction_of_hits = std::numeric_limits<double>::quiet_NaN();
  std::vector<PathRecord> records;
};

/// Runs n independent paths on substreams keyed by (seed, path index) and
/// reduces them in index order, so the result is independent of `workers`.
MCSummary mc_estimate(const LevyModel& model, double x, const FunctionalSpec& f, const Estimator& estimator,
                      std::size_t n, const PathConfig& cfg, unsigned workers = 1);

}  // namespace levyfn
