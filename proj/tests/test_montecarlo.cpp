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

#include <algorithm>
#include <cmath>
#include <cstring>

#include "doctest.h"
#include "families.hpp"
#include "levyfn/error.hpp"
#include "levyfn/montecarlo.hpp"
#include "levyfn/scale_fn.hpp"

using namespace levyfn;
using namespace levyfn::testing;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

TEST_CASE("path configuration is validated") {
  PathConfig c;
  CHECK_NOTHROW(c.check(1.0));
  c.dt = 0.0;
  CHECK_THROWS_AS(c.check(1.0), Error);
  c = {};
  c.barrier = 0.5;
  CHECK_THROWS_AS(c.check(1.0), Error);
  c = {};
  CHECK_THROWS_AS(c.check(0.0), Error);
  c.eps = 2.0;
  CHECK_THROWS_AS(PathSimulator(stable15(), c), Error);
  CHECK_THROWS_AS(mc_estimate(bm(), 1.0, constant_functional(), HitProb{}, 50, PathConfig{}), Error);
}

TEST_CASE("euler coefficients") {
  PathConfig c;
  c.eps = 0.01;
  const PathSimulator plain(bm_drift_down(), c);
  CHECK(plain.step_drift() == 1.0);
  CHECK(plain.step_variance() == 2.0);
  CHECK(plain.jump_rate() == 0.0);
  const LevyModel st = stable15();
  const PathSimulator s(st, c);
  CHECK(s.jump_rate() == doctest::Approx(st.jump_tail_mass(0.01)).epsilon(1e-12));
  CHECK(s.step_drift() == doctest::Approx(-st.drift() - st.jump_first_moment(0.01, 1.0)).epsilon(1e-12));
  c.gaussian_compensation = false;
  CHECK(PathSimulator(st, c).step_variance() == 0.0);
}

TEST_CASE("jump samplers follow the truncated law") {
  PathConfig c;
  c.eps = 0.05;
  for (const auto& [name, m] : example_families()) {
    if (std::holds_alternative<NoJumps>(m.jumps())) continue;
    CAPTURE(name);
    const PathSimulator sim(m, c);
    auto gen = Philox4x32::substream(17, 0);
    const int n = 100000;
    const double probe = 2.5 * c.eps;
    int above = 0;
    for (int i = 0; i < n; ++i) {
      const double j = sim.sample_jump(gen);
      REQUIRE(j >= c.eps);
      above += j > probe;
    }
    const double p = m.jump_tail_mass(probe) / m.jump_tail_mass(c.eps);
    CHECK(std::abs(double(above) / n - p) <= 4.0 * std::sqrt(p * (1.0 - p) / n));
  }
}

TEST_CASE("skeleton mean increment matches -psi'(0+)") {
  PathConfig c;
  c.eps = 0.01;
  c.horizon = 1.0;
  for (const auto& [name, m] : example_families()) {
    const double slope = m.laplace_exponent_derivative(0.0);
    if (!std::isfinite(slope) || m.pure_power()) continue;
    CAPTURE(name);
    const PathSimulator sim(m, c);
    const int n = 2000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const PathSample p = sim.sample(1000.0, i);
      REQUIRE(p.status == PathStatus::Censored);
      const double inc = p.values.back() - 1000.0;
      sum += inc;
      sq += inc * inc;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sq / n - mean * mean) / n);
    CHECK(std::abs(mean + slope) <= 4.0 * se);
  }
}

TEST_CASE("path invariants") {
  PathConfig c;
  c.eps = 0.01;
  c.horizon = 20.0;
  c.barrier = 8.0;
  for (const auto& [name, m] : example_families()) {
    CAPTURE(name);
    const PathSimulator sim(m, c);
    for (std::uint64_t id = 0; id < 40; ++id) {
      const PathSample p = sim.sample(1.0, id);
      for (const FunctionalSpec& f : {FunctionalSpec{PowerLaw{0.7}}, FunctionalSpec{PowerLaw{1.7}}, constant_functional(2.0)}) {
        const FunctionalSample fs = time_change(functional_along_path(p, f), p);
        REQUIRE(fs.a_values.size() == p.values.size());
        for (std::size_t k = 1; k < fs.a_values.size(); ++k) REQUIRE(fs.a_values[k] >= fs.a_values[k - 1]);
        // Time change reorders time, never values.
        std::vector<double> xs = fs.x_values, zs = p.values;
        std::sort(xs.begin(), xs.end());
        std::sort(zs.begin(), zs.end());
        REQUIRE(xs == zs);
        if (p.status == PathStatus::HitZero) {
          REQUIRE(same_bits(fs.boundary_time, fs.a_final));
          REQUIRE_FALSE(fs.boundary_is_lower_bound);
          REQUIRE(p.values.back() == 0.0);
        } else {
          REQUIRE(fs.boundary_is_lower_bound);
        }
      }
    }
  }
}

TEST_CASE("time change inverts the additive functional") {
  PathConfig c;
  c.horizon = 5.0;
  const PathSample p = sample_path(bm_drift_up(), 2.0, c, 3);
  const FunctionalSample fs = time_change(functional_along_path(p, constant_functional(2.0)), p);
  // f = 2 runs X at twice the speed: eta(t) = t / 2.
  for (double t : {0.1, 0.5, 1.7}) {
    if (t >= fs.a_final) continue;
    CHECK(fs.eta(t) == doctest::Approx(t / 2.0).epsilon(1e-9));
  }
  CHECK(fs.x_at(0.0) == 2.0);
}

TEST_CASE("final panel follows the local index") {
  PathSample p;
  p.times = {0.0, 1.0};
  p.values = {0.5, 0.0};
  p.status = PathStatus::HitZero;
  p.lower_level = 0.0;
  p.local_index = 1.5;
  CHECK(functional_along_path(p, PowerLaw{1.0}).a_final == doctest::Approx(std::pow(0.5, -1.0) / (1.0 - 1.0 / 1.5)));
  CHECK(functional_along_path(p, PowerLaw{1.5}).a_final == std::numeric_limits<double>::infinity());
  p.local_index = 1.0;
  CHECK(functional_along_path(p, PowerLaw{0.5}).a_final == doctest::Approx(std::sqrt(2.0) * 2.0));
  const Generic g{[](double z) { return 1.0 / std::sqrt(z); }, true, true, std::nullopt};
  CHECK(functional_along_path(p, g).a_final == doctest::Approx(std::sqrt(2.0) * 2.0).epsilon(1e-6));
}

TEST_CASE("seed determinism across worker counts") {
  PathConfig c;
  c.eps = 0.01;
  c.barrier = 10.0;
  c.horizon = 20.0;
  c.seed = 1234;
  const LevyModel m = LevyModel::validate({-0.3, 0.4, TemperedStable{1.0, 0.3, 0.5}});
  const MCSummary one = mc_estimate(m, 1.0, PowerLaw{0.8}, FunctionalFiniteness{}, 300, c, 1);
  for (unsigned w : {2u, 3u, 8u}) {
    const MCSummary many = mc_estimate(m, 1.0, PowerLaw{0.8}, FunctionalFiniteness{}, 300, c, w);
    CHECK(same_bits(one.estimate, many.estimate));
    CHECK(same_bits(one.median_a_final, many.median_a_final));
    REQUIRE(one.records.size() == many.records.size());
    for (std::size_t i = 0; i < one.records.size(); ++i) {
      REQUIRE(one.records[i].status == many.records[i].status);
      REQUIRE(same_bits(one.records[i].a_final, many.records[i].a_final));
      REQUIRE(same_bits(one.records[i].t_boundary, many.records[i].t_boundary));
    }
  }
  c.seed = 1235;
  CHECK_FALSE(same_bits(mc_estimate(m, 1.0, PowerLaw{0.8}, FunctionalFiniteness{}, 300, c, 1).median_a_final,
                        one.median_a_final));
}

TEST_CASE("all-censored runs are an error") {
  PathConfig c;
  c.horizon = 0.01;
  try {
    mc_estimate(bm_drift_up(), 5.0, constant_functional(), HitProb{}, 100, c);
    FAIL("expected AllCensored");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AllCensored);
  }
}

TEST_CASE("hitting probability: halving dt reduces the bias") {
  const LevyModel m = bm_drift_down();
  const double oracle = std::exp(-1.0);
  std::vector<double> est;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    PathConfig c;
    c.dt = dt;
    c.barrier = 5.0;
    c.seed = 11;
    est.push_back(mc_estimate(m, 1.0, constant_functional(), HitProb{}, 100000, c).estimate);
  }
  CHECK(est[0] < est[1]);
  CHECK(est[1] < est[2]);
  CHECK(est[2] < oracle);
}

TEST_CASE("agreement with analytic oracles") {
  SUBCASE("hitting probability") {
    for (const auto& [name, m] : example_families()) {
      const double phi = m.phi_zero().value;
      if (!(phi > 0.0)) continue;
      CAPTURE(name);
      PathConfig c;
      c.eps = 0.01;
      c.seed = 5;
      c.barrier = 1.0 + 8.0 / phi;
      const MCSummary s = mc_estimate(m, 1.0, constant_functional(), HitProb{}, 4000, c);
      // Grid-monitoring bias plus barrier misdeclaration.
      const double budget = 0.015 + std::exp(-phi * (c.barrier - 1.0));
      CHECK(std::abs(s.estimate - m.hit_probability(1.0)) <= 3.0 * s.std_error + budget);
    }
  }
  SUBCASE("mean passage") {
    for (const auto& [name, m] : example_families()) {
      const double slope = m.laplace_exponent_derivative(0.0);
      if (m.phi_zero().value > 0.0 || !(slope > 0.0) || !std::isfinite(slope)) continue;
      CAPTURE(name);
      PathConfig c;
      c.eps = 0.01;
      c.seed = 5;
      c.horizon = 4000.0;
      const MCSummary s = mc_estimate(m, 1.0, constant_functional(), MeanPassage{0.01}, 4000, c);
      const double oracle = 0.99 / slope;
      CHECK(std::abs(s.estimate - oracle) <= 3.0 * s.std_error + 0.03 * oracle);
    }
  }
  SUBCASE("occupation with a power functional") {
    const LevyModel up = bm_drift_up();
    const ScaleEvaluator ev(up);
    PathConfig c;
    c.seed = 9;
    const MCSummary s = mc_estimate(up, 1.0, PowerLaw{0.5}, MeanPassage{0.01}, 4000, c);
    const double quad = occupation_expectation(ev, PowerLaw{0.5}, 1.0, 0.01).value;
    CHECK(std::abs(s.estimate - quad) <= 3.0 * s.std_error + 0.03 * quad);
  }
  SUBCASE("conditional exponential functional given extinction") {
    const LevyModel down = bm_drift_down();
    const ScaleEvaluator ev(down);
    PathConfig c;
    c.seed = 3;
    c.barrier = 9.0;
    const MCSummary s = mc_estimate(down, 1.0, constant_functional(), CondExpFunctional{2.0}, 4000, c);
    const double exact = *conditional_exp_functional(ev, constant_functional(), 1.0, 2.0).closed_form;
    CHECK(std::abs(s.estimate - exact) <= 3.0 * s.std_error + 0.01);
  }
}
