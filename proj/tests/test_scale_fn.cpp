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

#include <chrono>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "families.hpp"
#include "levyfn/error.hpp"
#include "levyfn/scale_fn.hpp"

using namespace levyfn;
using namespace levyfn::testing;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return xs;
}

}  // namespace

TEST_CASE("closed forms for elementary exponents") {
  const ScaleEvaluator down(bm_drift_down());
  CHECK(down.w(1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  const ScaleEvaluator plain(bm());
  CHECK(plain.w(3.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(plain.w(-1.0) == 0.0);
  const ScaleEvaluator up(bm_drift_up());
  CHECK(up.w(2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
  const ScaleEvaluator stable(stable15());
  CHECK(stable.w(4.0) == doctest::Approx(2.0 / std::tgamma(1.5)).epsilon(1e-12));
}

TEST_CASE("inversion reproduces stable closed forms") {
  for (double alpha : {1.2, 1.5, 1.8}) {
    CAPTURE(alpha);
    const ScaleEvaluator ev(LevyModel::critical_stable(alpha));
    REQUIRE(ev.has_closed_form());
    double worst = 0.0;
    for (double x : log_grid(0.1, 10.0, 50)) {
      const double exact = *ev.closed_form(x);
      worst = std::max(worst, std::abs(ev.w_inverted(x) - exact) / exact);
    }
    CHECK(worst <= 1e-4);
  }
}

TEST_CASE("inversion with drift and a positive root") {
  for (const auto& m : {bm_drift_up(), bm_drift_down()}) {
    const ScaleEvaluator ev(m);
    for (double x : log_grid(0.1, 10.0, 25)) {
      CAPTURE(x);
      const double exact = *ev.closed_form(x);
      CHECK(std::abs(ev.w_inverted(x) - exact) <= 1e-6 * exact);
    }
  }
}

TEST_CASE("scale function basic invariants") {
  for (const auto& [name, m] : example_families()) {
    CAPTURE(name);
    const ScaleEvaluator ev(m);
    double prev = 0.0;
    for (double x : log_grid(0.01, 20.0, 30)) {
      const double w = ev.w(x);
      REQUIRE(w > 0.0);
      REQUIRE(w >= prev * (1.0 - 1e-7));  // inversion noise on the plateau
      prev = w;
    }
    // W(0+) = 1/d for bounded variation, 0 otherwise.
    if (m.bounded_variation()) {
      CHECK(ev.w(1e-8) == doctest::Approx(m.scale_at_zero()).epsilon(2e-3));
    } else {
      CHECK(ev.w(1e-8) < ev.w(1e-5));
      CHECK(ev.w(1e-8) < 0.05);
    }
  }
}

TEST_CASE("laplace identity") {
  for (const auto& [name, m] : example_families()) {
    CAPTURE(name);
    const ScaleEvaluator ev(m, {}, GridSpec{});
    const double phi = m.phi_zero().value;
    for (double shift : {1.0, 2.0, 5.0}) {
      CAPTURE(shift);
      const LaplaceCheck lc = laplace_identity(ev, phi + shift);
      CHECK(std::abs(lc.residual) <= 1e-3);
    }
  }
}

TEST_CASE("grid cache agrees with direct inversion") {
  const LevyModel m = LevyModel::validate({0.5, 0.5, CompoundPoissonExp{2.0, 0.5}});
  const ScaleEvaluator cached(m, {}, GridSpec{1e-4, 50.0, 400});
  REQUIRE(cached.has_grid());
  for (double x : {1e-3, 0.05, 0.9, 3.3, 17.0}) {
    CAPTURE(x);
    CHECK(cached.w(x) == doctest::Approx(cached.w_inverted(x)).epsilon(1e-5));
  }
}

TEST_CASE("potential density") {
  const ScaleEvaluator ev(bm_drift_up());
  CHECK(ev.potential_density(1.0, 0.5) == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-12));
  const double y = 3.0;
  const double expected = (1.0 - std::exp(-y)) - (1.0 - std::exp(-(y - 1.0)));
  CHECK(ev.potential_density(1.0, y) == doctest::Approx(expected).epsilon(1e-12));
  for (const auto& [name, m] : example_families()) {
    CAPTURE(name);
    const ScaleEvaluator e2(m);
    for (double yy : {0.2, 0.9, 1.5, 4.0}) REQUIRE(e2.potential_density(1.0, yy) >= -1e-10);
  }
}

TEST_CASE("occupation expectation") {
  const ScaleEvaluator up(bm_drift_up());
  const ExpectationResult r = occupation_expectation(up, constant_functional(), 1.0, 0.01);
  REQUIRE(r.closed_form);
  CHECK(*r.closed_form == doctest::Approx(0.99).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(0.99).epsilon(1e-6));
  const ScaleEvaluator down(bm_drift_down());
  CHECK(occupation_expectation(down, constant_functional(), 1.0, 0.01).value == std::numeric_limits<double>::infinity());
  const ScaleEvaluator st(stable15());
  CHECK(occupation_expectation(st, constant_functional(), 1.0, 0.01).value == std::numeric_limits<double>::infinity());
  // A recurrent-downward path spends finite time up high whatever the power.
  const ExpectationResult p = occupation_expectation(up, PowerLaw{0.5}, 1.0, 0.01);
  CHECK(p.finite());
  CHECK(p.value > 0.0);
  CHECK(p.value < 0.99 / std::sqrt(0.01));
  // With positive survival the density tends to a constant: finite iff f is integrable at infinity.
  CHECK(occupation_expectation(down, PowerLaw{0.5}, 1.0, 0.01).value == std::numeric_limits<double>::infinity());
  const ExpectationResult e = occupation_expectation(down, PowerLaw{2.0}, 1.0, 0.01);
  CHECK(e.finite());
}

TEST_CASE("conditional exponential functional") {
  const ScaleEvaluator plain(bm());
  const ExpectationResult r = conditional_exp_functional(plain, constant_functional(), 1.0, 1.0);
  REQUIRE(r.closed_form);
  CHECK(*r.closed_form == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(0.632121).epsilon(1e-3));
  CHECK(std::abs(r.value - *r.closed_form) <= 1e-6);
  const ScaleEvaluator down(bm_drift_down());
  const ExpectationResult d = conditional_exp_functional(down, constant_functional(), 1.0, 2.0);
  CHECK(d.value == doctest::Approx(*d.closed_form).epsilon(1e-6));
  // W(y) ~ y near 0, so y^{-theta} is integrable iff theta < 2.
  const ExpectationResult s = conditional_exp_functional(plain, PowerLaw{2.5}, 1.0, 1.0);
  CHECK(s.value == std::numeric_limits<double>::infinity());
  CHECK(conditional_exp_functional(plain, PowerLaw{1.5}, 1.0, 1.0).finite());
}

TEST_CASE("scale residual") {
  const ScaleEvaluator down(bm_drift_down());
  CHECK(down.residual(3.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (const auto& [name, m] : example_families()) {
    if (!(m.phi_zero().value > 0.0) || std::holds_alternative<NoJumps>(m.jumps())) continue;
    CAPTURE(name);
    const ScaleEvaluator ev(m);
    const double phi = m.phi_zero().value;
    for (double x : {0.2, 1.0, 3.0}) {
      const double direct = std::exp(phi * x) / m.laplace_exponent_derivative(phi) - ev.w_inverted(x);
      CHECK(ev.residual(x) == doctest::Approx(direct).epsilon(1e-6));
      CHECK(ev.residual(x) > 0.0);
    }
  }
}

TEST_CASE("scaling of the stable scale function") {
  const ScaleEvaluator ev(stable15());
  for (double x : {0.3, 1.0, 2.0}) {
    CHECK(ev.w_inverted(4.0 * x) == doctest::Approx(2.0 * ev.w_inverted(x)).epsilon(1e-6));
  }
}
