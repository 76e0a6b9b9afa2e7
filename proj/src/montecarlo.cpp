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

#include "levyfn/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "levyfn/error.hpp"
#include "levyfn/integral_tests.hpp"

namespace levyfn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_0^tau f(Z_s) ds on the final panel, where Z runs from z down to 0 along
// the self-similar profile Z = z * u^{1/beta}, u = 1 - s/tau. beta = 1 is the
// linear (drift) segment.
double final_panel(const FunctionalSpec& f, double z, double tau, double beta) {
  if (tau <= 0.0) return 0.0;
  if (const auto* p = std::get_if<PowerLaw>(&f)) {
    if (p->theta >= beta) return kInf;
    return tau * p->weight * std::pow(z, -p->theta) / (1.0 - p->theta / beta);
  }
  if (const auto* g = std::get_if<Generic>(&f); g && g->constant) return tau * *g->constant;
  auto integrand = [&](double u) { return evaluate(f, z * std::pow(u, 1.0 / beta)); };
  const TestVerdict v = improper_integral_verdict(integrand, Endpoint::at_zero_plus(1.0));
  if (v.verdict != Verdict::Converges) return kInf;
  return tau * v.value;
}

}  // namespace

std::string_view to_string(PathStatus s) {
  switch (s) {
    case PathStatus::HitZero: return "HitZero";
    case PathStatus::HitBarrier: return "HitBarrier";
    case PathStatus::Censored: return "Censored";
  }
  return "Unknown";
}

void PathConfig::check(double x) const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, m); };
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) fail("horizon must be finite and > 0");
  if (!(eps > 0.0 && eps <= 1.0)) fail("small-jump cutoff eps must lie in (0, 1]");
  if (!(lower_level >= 0.0)) fail("lower level must be >= 0");
  if (!(x > lower_level)) fail("start must lie above the lower level");
  if (!(barrier > x)) fail("barrier must lie above the start");
}

PathSimulator::PathSimulator(const LevyModel& model, const PathConfig& cfg) : model_(model), cfg_(cfg) {
  if (!(cfg.eps > 0.0 && cfg.eps <= 1.0)) throw Error(ErrorCode::InvalidConfig, "eps must lie in (0, 1]");
  jump_rate_ = model.jump_tail_mass(cfg.eps);
  const double compensator = cfg.eps < 1.0 ? model.jump_first_moment(cfg.eps, 1.0) : 0.0;
  drift_ = -model.drift() - compensator;
  variance_ = 2.0 * model.gaussian();
  if (cfg.gaussian_compensation) variance_ += model.jump_second_moment_below(cfg.eps);
}

double PathSimulator::sample_jump(Philox4x32& gen) const {
  const double eps = cfg_.eps;
  return std::visit(
      [&](const auto& j) -> double {
        using J = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<J, StablePositive>) {
          return eps * std::pow(uniform_open(gen), -1.0 / j.alpha);
        } else if constexpr (std::is_same_v<J, CompoundPoissonExp>) {
          return eps - j.jump_mean * std::log(uniform_open(gen));
        } else if constexpr (std::is_same_v<J, TemperedStable>) {
          // Pareto envelope, accept with e^{-q (z - eps)}.
          for (;;) {
            const double z = eps * std::pow(uniform_open(gen), -1.0 / j.alpha);
            if (uniform_open(gen) <= std::exp(-j.tempering * (z - eps))) return z;
          }
        } else {
          return 0.0;
        }
      },
      model_.jumps());
}

PathSample PathSimulator::sample(double x, std::uint64_t stream_id) const {
  cfg_.check(x);
  Philox4x32 gen = Philox4x32::substream(cfg_.seed, stream_id);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double dt = cfg_.dt;
  const double mean_jumps = jump_rate_ * dt;
  std::poisson_distribution<long> jumps(mean_jumps > 0.0 ? mean_jumps : 1.0);
  const double sd = std::sqrt(variance_ * dt);
  const double step_drift = drift_ * dt;
  const double level = cfg_.lower_level;

  PathSample out;
  out.lower_level = level;
  out.local_index = model_.local_index();
  out.stream_id = stream_id;
  const auto max_steps = static_cast<std::uint64_t>(std::ceil(cfg_.horizon / dt - 1e-9));
  out.times.reserve(std::min<std::uint64_t>(max_steps + 2, 1u << 16));
  out.values.reserve(out.times.capacity());
  out.times.push_back(0.0);
  out.values.push_back(x);

  double z = x;
  for (std::uint64_t k = 1;; ++k) {
    double next = z + step_drift;
    if (sd > 0.0) next += sd * normal(gen);
    if (mean_jumps > 0.0) {
      for (long n = jumps(gen); n > 0; --n) next += sample_jump(gen);
    }
    const double t_prev = static_cast<double>(k - 1) * dt;
    const double t = static_cast<double>(k) * dt;
    if (next <= level) {
      // Downward passage is continuous; interpolate the crossing inside the step.
      const double zeta = t_prev + dt * (z - level) / (z - next);
      out.times.push_back(zeta);
      out.values.push_back(level);
      out.status = PathStatus::HitZero;
      out.stop_time = zeta;
      return out;
    }
    out.times.push_back(t);
    out.values.push_back(next);
    if (next >= cfg_.barrier) {
      out.status = PathStatus::HitBarrier;
      out.stop_time = t;
      return out;
    }
    if (k >= max_steps) {
      out.status = PathStatus::Censored;
      out.stop_time = t;
      return out;
    }
    z = next;
  }
}

PathSample sample_path(const LevyModel& model, double x, const PathConfig& cfg, std::uint64_t stream_id) {
  return PathSimulator(model, cfg).sample(x, stream_id);
}

FunctionalSample functional_along_path(const PathSample& path, const FunctionalSpec& f) {
  check_functional(f);
  FunctionalSample out;
  out.status = path.status;
  out.censored = path.status != PathStatus::HitZero;
  const std::size_t n = path.values.size();
  out.a_values.resize(n);
  out.a_values[0] = 0.0;
  if (n == 1) return out;
  double prev_f = evaluate(f, path.values[0]);
  double a = 0.0;
  const bool singular_end = path.status == PathStatus::HitZero && path.lower_level == 0.0;
  const std::size_t regular = singular_end ? n - 1 : n;
  for (std::size_t k = 1; k < regular; ++k) {
    const double fk = evaluate(f, path.values[k]);
    a += 0.5 * (prev_f + fk) * (path.times[k] - path.times[k - 1]);
    out.a_values[k] = a;
    prev_f = fk;
  }
  if (singular_end) {
    const double tau = path.times[n - 1] - path.times[n - 2];
    a += final_panel(f, path.values[n - 2], tau, path.local_index);
    out.a_values[n - 1] = a;
  }
  out.a_final = a;
  return out;
}

FunctionalSample time_change(FunctionalSample sample, const PathSample& path) {
  sample.x_times = sample.a_values;
  sample.x_values = path.values;
  sample.eta_times = path.times;
  sample.boundary_time = sample.a_final;
  sample.boundary_is_lower_bound = path.status != PathStatus::HitZero;
  return sample;
}

double FunctionalSample::eta(double t) const {
  if (eta_times.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (t <= 0.0) return eta_times.front();
  const auto it = std::upper_bound(x_times.begin(), x_times.end(), t);
  if (it == x_times.end()) return eta_times.back();
  const std::size_t k = static_cast<std::size_t>(it - x_times.begin());
  const double a0 = x_times[k - 1];
  const double a1 = x_times[k];
  // An infinite final node leaves X at the last grid value.
  if (!std::isfinite(a1) || a1 == a0) return eta_times[k - 1];
  const double frac = (t - a0) / (a1 - a0);
  return eta_times[k - 1] + frac * (eta_times[k] - eta_times[k - 1]);
}

double FunctionalSample::x_at(double t) const {
  if (x_values.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (t <= 0.0) return x_values.front();
  const auto it = std::upper_bound(x_times.begin(), x_times.end(), t);
  if (it == x_times.end()) return x_values.back();
  const std::size_t k = static_cast<std::size_t>(it - x_times.begin());
  const double a0 = x_times[k - 1];
  const double a1 = x_times[k];
  if (!std::isfinite(a1) || a1 == a0) return x_values[k - 1];
  const double frac = (t - a0) / (a1 - a0);
  return x_values[k - 1] + frac * (x_values[k] - x_values[k - 1]);
}

std::string_view estimator_name(const Estimator& e) {
  return std::visit(
      [](const auto& est) -> std::string_view {
        using E = std::decay_t<decltype(est)>;
        if constexpr (std::is_same_v<E, HitProb>) return "hitprob";
        if constexpr (std::is_same_v<E, MeanPassage>) return "meanpassage";
        if constexpr (std::is_same_v<E, CondExpFunctional>) return "condexp";
        return "finiteness";
      },
      e);
}

MCSummary mc_estimate(const LevyModel& model, double x, const FunctionalSpec& f, const Estimator& estimator,
                      std::size_t n, const PathConfig& cfg, unsigned workers) {
  if (n < 100) throw Error(ErrorCode::InvalidConfig, "Monte Carlo needs at least 100 paths");
  check_functional(f);
  const auto started = std::chrono::steady_clock::now();

  PathConfig run = cfg;
  if (const auto* mp = std::get_if<MeanPassage>(&estimator)) {
    if (!(mp->level >= 0.0 && mp->level < x)) throw Error(ErrorCode::InvalidConfig, "passage level must lie in [0, x)");
    run.lower_level = mp->level;
  }
  run.check(x);

  FunctionalSpec effective = f;
  if (const auto* ce = std::get_if<CondExpFunctional>(&estimator)) {
    if (!(ce->lam > 0.0)) throw Error(ErrorCode::InvalidConfig, "condexp needs lam > 0");
    const double lam = ce->lam;
    FunctionalSpec base = f;
    effective = Generic{[base, lam](double z) { return evaluate(base, z) * std::exp(-lam * z); }, false, true, std::nullopt};
  }

  const PathSimulator sim(model, run);
  std::vector<PathRecord> records(n);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++) {
        const PathSample path = sim.sample(x, i);
        const FunctionalSample fs = time_change(functional_along_path(path, effective), path);
        PathRecord& r = records[i];
        r.path_id = i;
        r.status = path.status;
        r.zeta = path.status == PathStatus::HitZero ? path.stop_time : std::numeric_limits<double>::quiet_NaN();
        r.a_final = fs.a_final;
        r.t_boundary = fs.boundary_time;
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  MCSummary out;
  out.n_paths = n;
  out.seed = cfg.seed;
  std::size_t hits = 0, barrier = 0, censored = 0;
  for (const auto& r : records) {
    hits += r.status == PathStatus::HitZero;
    barrier += r.status == PathStatus::HitBarrier;
    censored += r.status == PathStatus::Censored;
  }
  if (hits + barrier == 0) throw Error(ErrorCode::AllCensored, "no path reached the lower level or the barrier");
  out.hit_fraction = static_cast<double>(hits) / n;
  out.barrier_fraction = static_cast<double>(barrier) / n;
  out.censoring_fraction = static_cast<double>(censored) / n;

  std::vector<double> sample;
  sample.reserve(n);
  std::visit(
      [&](const auto& est) {
        using E = std::decay_t<decltype(est)>;
        for (const auto& r : records) {
          const bool hit = r.status == PathStatus::HitZero;
          if constexpr (std::is_same_v<E, HitProb>) {
            sample.push_back(hit ? 1.0 : 0.0);
          } else if constexpr (std::is_same_v<E, MeanPassage>) {
            sample.push_back(r.a_final);
          } else if constexpr (std::is_same_v<E, CondExpFunctional>) {
            if (hit) sample.push_back(r.a_final);
          } else {
            if (hit) sample.push_back(std::isfinite(r.a_final) ? 1.0 : 0.0);
          }
        }
      },
      estimator);

  out.n_used = sample.size();
  if (!sample.empty()) {
    double sum = 0.0;
    for (double v : sample) sum += v;
    const double mean = sum / sample.size();
    double ss = 0.0;
    for (double v : sample) ss += (v - mean) * (v - mean);
    out.estimate = mean;
    out.std_error = sample.size() > 1 ? std::sqrt(ss / (sample.size() - 1) / sample.size()) : 0.0;
    if (!std::isfinite(mean)) out.std_error = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.estimate = std::numeric_limits<double>::quiet_NaN();
    out.std_error = std::numeric_limits<double>::quiet_NaN();
  }

  std::vector<double> finals;
  finals.reserve(n);
  std::size_t finite_hits = 0;
  for (const auto& r : records) {
    finals.push_back(r.a_final);
    if (r.status == PathStatus::HitZero && std::isfinite(r.a_final)) ++finite_hits;
  }
  std::nth_element(finals.begin(), finals.begin() + n / 2, finals.end());
  out.median_a_final = finals[n / 2];
  if (hits > 0) out.finite_fraction_of_hits = static_cast<double>(finite_hits) / hits;

  out.records = std::move(records);
  out.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace levyfn
