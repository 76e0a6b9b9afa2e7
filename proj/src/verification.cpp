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

#include "levyfn/verification.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "levyfn/error.hpp"
#include "levyfn/integral_tests.hpp"
#include "levyfn/model_io.hpp"
#include "levyfn/montecarlo.hpp"
#include "levyfn/quadrature.hpp"
#include "levyfn/scale_fn.hpp"

namespace levyfn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* f, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return xs;
}

struct Context {
  const VerifyOptions& opts;
  double tol(double t) const { return t * opts.tol_multiplier; }
  LevyModel shipped(const std::string& name) const { return load_model(opts.model_dir + "/" + name + ".json"); }
};

InversionOptions inversion_only() {
  InversionOptions o;
  o.use_closed_form = false;
  return o;
}

void scale_oracle(const Context& ctx, CriterionResult& r) {
  r.name = "scale-function oracle";
  r.time_limit = 5.0;
  const auto xs = log_grid(0.1, 10.0, 50);
  std::string measured;
  bool ok = true;
  for (double alpha : {1.2, 1.5, 1.8}) {
    const ScaleEvaluator ev(LevyModel::critical_stable(alpha));
    double worst = 0.0;
    for (double x : xs) {
      const double exact = std::pow(x, alpha - 1.0) / std::tgamma(alpha);
      worst = std::max(worst, std::abs(ev.w_inverted(x) - exact) / exact);
    }
    ok = ok && worst <= ctx.tol(1e-4);
    measured += fmt("a=%.1f:%.2e ", alpha, worst);
  }
  const ScaleEvaluator up(LevyModel::validate({1.0, 1.0, NoJumps{}}));
  double worst = 0.0;
  for (double x : xs) {
    const double exact = -std::expm1(-x);
    worst = std::max(worst, std::abs(up.w_inverted(x) - exact) / exact);
  }
  ok = ok && worst <= ctx.tol(1e-6);
  measured += fmt("lam^2+lam:%.2e", worst);
  r.passed = ok;
  r.measured = "max rel err " + measured;
  r.expected = fmt("stable <= %.1e, lam^2+lam <= %.1e", ctx.tol(1e-4), ctx.tol(1e-6));
}

void laplace(const Context& ctx, CriterionResult& r) {
  r.name = "Laplace identity of W";
  r.time_limit = 10.0;
  double worst = 0.0;
  std::string where;
  for (const char* name : {"stable15", "bmdrift", "bmup", "tempered"}) {
    const LevyModel m = ctx.shipped(name);
    const ScaleEvaluator ev(m, inversion_only(), GridSpec{1e-6, 200.0, 400});
    const double phi = m.phi_zero().value;
    for (double shift : {1.0, 2.0, 5.0}) {
      const double res = std::abs(laplace_identity(ev, phi + shift).residual);
      if (res >= worst) {
        worst = res;
        where = fmt("%s, lam=Phi+%g", name, shift);
      }
    }
  }
  r.passed = worst <= ctx.tol(1e-3);
  r.measured = fmt("max |psi*L[W]-1| = %.2e (%s)", worst, where.c_str());
  r.expected = fmt("<= %.1e on 4 models x 3 lambdas", ctx.tol(1e-3));
}

void hitting(const Context& ctx, CriterionResult& r) {
  r.name = "hitting law";
  r.time_limit = 120.0;
  const LevyModel m = ctx.shipped("bmdrift");
  PathConfig c;
  c.dt = 1e-3;
  c.barrier = 30.0;
  c.seed = 20260301;
  const MCSummary s = mc_estimate(m, 1.0, constant_functional(), HitProb{}, 20000, c, ctx.opts.workers);
  const double target = std::exp(-1.0);
  const double gap = std::abs(s.estimate - target);
  const double allowed = ctx.tol(3.0 * s.std_error + 0.01);
  r.passed = gap <= allowed;
  r.measured = fmt("p=%.5f SE=%.5f |p-e^-1|=%.5f", s.estimate, s.std_error, gap);
  r.expected = fmt("|p-0.367879| <= 3SE+0.01 = %.5f", allowed);
}

void conditional(const Context& ctx, CriterionResult& r) {
  r.name = "conditional exponential functional";
  r.time_limit = 120.0;
  const LevyModel m = LevyModel::validate({0.0, 1.0, NoJumps{}});
  const double target = -std::expm1(-1.0);
  const ScaleEvaluator ev(m, inversion_only(), GridSpec{1e-6, 200.0, 400});
  const ExpectationResult q = conditional_exp_functional(ev, constant_functional(), 1.0, 1.0);
  PathConfig c;
  c.dt = 1e-3;
  c.horizon = 1e4;
  c.seed = 20260302;
  const MCSummary s = mc_estimate(m, 1.0, constant_functional(), CondExpFunctional{1.0}, 4000, c, ctx.opts.workers);
  const double mc_gap = std::abs(s.estimate - target);
  const double quad_rel = std::abs(q.value - target) / target;
  r.passed = mc_gap <= ctx.tol(3.0 * s.std_error + 0.01) && quad_rel <= ctx.tol(1e-3);
  r.measured = fmt("MC=%.5f SE=%.5f (censored %.3f), quad=%.7f rel %.1e", s.estimate, s.std_error,
                   s.censoring_fraction, q.value, quad_rel);
  r.expected = fmt("MC within %.4f of 0.632121, quad rel <= %.0e", ctx.tol(3.0 * s.std_error + 0.01), ctx.tol(1e-3));
}

void occupation(const Context& ctx, CriterionResult& r) {
  r.name = "occupation formula";
  r.time_limit = 120.0;
  const LevyModel m = ctx.shipped("bmup");
  const double x = 1.0, y = 0.01, d = x - y;
  // Independent oracle from W(z) = 1 - e^{-z}: int_0^inf W(z) - W(z - d) dz.
  QuadratureOptions qo;
  qo.abs_tol = 1e-13;
  qo.rel_tol = 1e-12;
  const double oracle = integrate_checked([](double z) { return -std::expm1(-z); }, 0.0, d, qo) +
                        integrate_checked([d](double z) { return std::exp(-(z - d)) - std::exp(-z); }, d, 80.0, qo);
  const ScaleEvaluator ev(m, inversion_only(), GridSpec{1e-6, 200.0, 400});
  const ExpectationResult q = occupation_expectation(ev, constant_functional(), x, y);
  PathConfig c;
  c.dt = 1e-3;
  c.seed = 20260303;
  const MCSummary s = mc_estimate(m, x, constant_functional(), MeanPassage{y}, 4000, c, ctx.opts.workers);
  const double mc_rel = std::abs(s.estimate - q.value) / q.value;
  const double oracle_rel = std::abs(q.value - oracle) / oracle;
  r.passed = mc_rel <= ctx.tol(0.05) && oracle_rel <= ctx.tol(0.02);
  r.measured = fmt("quad=%.6f MC=%.5f (SE %.5f) rel %.2e, oracle=%.6f rel %.1e", q.value, s.estimate, s.std_error,
                   mc_rel, oracle, oracle_rel);
  r.expected = fmt("MC vs quad <= %.0f%%, quad vs oracle <= %.0f%%", 100 * ctx.tol(0.05), 100 * ctx.tol(0.02));
}

void classification(const Context&, CriterionResult& r) {
  r.name = "classification table";
  r.time_limit = 5.0;
  const LevyModel stable = LevyModel::critical_stable(1.5);
  const LevyModel down = LevyModel::validate({-1.0, 1.0, NoJumps{}});
  bool ok = true;
  std::string measured;
  for (double theta : {0.5, 1.0, 1.4, 1.5, 2.0}) {
    const BoundaryReport b = classify_boundary(stable, PowerLaw{theta}, 1.0);
    const Verdict want = theta < 1.5 ? Verdict::Converges : Verdict::Diverges;
    ok = ok && b.decisive() && b.extinction.verdict == want;
    measured += fmt("th=%.1f:%s ", theta, std::string(to_string(b.extinction.verdict)).c_str());
  }
  for (double theta : {2.0, 1.0}) {
    const BoundaryReport b = classify_boundary(down, PowerLaw{theta}, 1.0);
    const bool want = theta == 2.0;
    ok = ok && b.decisive() && b.explosion_possible == want;
    measured += fmt("expl(th=%.0f)=%s ", theta, b.explosion_possible ? (*b.explosion_possible ? "true" : "false") : "?");
  }
  r.passed = ok;
  r.measured = measured;
  r.expected = "th<1.5 Converges, th>=1.5 Diverges; expl(2)=true, expl(1)=false; all decisive";
}

void corroboration(const Context& ctx, CriterionResult& r) {
  r.name = "time-changed paths";
  r.time_limit = 300.0;
  const LevyModel m = ctx.shipped("stable15");
  PathConfig c;
  c.dt = 1e-3;
  c.eps = 1e-2;
  c.horizon = 50.0;
  c.seed = 20260304;
  const MCSummary fin = mc_estimate(m, 1.0, PowerLaw{1.0}, FunctionalFiniteness{}, 5000, c, ctx.opts.workers);
  const bool finite_ok = fin.finite_fraction_of_hits >= 1.0 - ctx.tol(0.01);

  // Same seeds at each horizon, so the paths are prefixes of one another.
  std::vector<double> med_div, med_ctl;
  for (double T : {0.25, 0.5, 1.0, 2.0}) {
    c.horizon = T;
    med_div.push_back(mc_estimate(m, 1.0, PowerLaw{1.6}, FunctionalFiniteness{}, 5000, c, ctx.opts.workers).median_a_final);
    med_ctl.push_back(mc_estimate(m, 1.0, PowerLaw{1.0}, FunctionalFiniteness{}, 5000, c, ctx.opts.workers).median_a_final);
  }
  bool growing = true;
  for (std::size_t i = 1; i < med_div.size(); ++i) growing = growing && (med_div[i] > med_div[i - 1] || med_div[i] == kInf);
  const bool control_finite = std::isfinite(med_ctl.back());
  r.passed = finite_ok && growing && control_finite;
  auto seq = [](const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += std::isfinite(x) ? fmt("%.3g ", x) : std::string("inf ");
    return s;
  };
  r.measured = fmt("th=1: %.4f of %zu hits finite; th=1.6 medians %sat T=0.25..2; th=1 control %s",
                   fin.finite_fraction_of_hits, static_cast<std::size_t>(fin.hit_fraction * fin.n_paths + 0.5),
                   seq(med_div).c_str(), seq(med_ctl).c_str());
  r.expected = fmt(">= %.3f finite; th=1.6 median strictly increasing or inf; control finite", 1.0 - ctx.tol(0.01));
}

std::vector<LevyModel> property_models(const Context& ctx) {
  std::vector<LevyModel> out;
  for (const char* name : {"stable15", "bmdrift", "bmup", "tempered"}) out.push_back(ctx.shipped(name));
  out.push_back(LevyModel::validate({0.5, 0.5, CompoundPoissonExp{2.0, 0.5}}));
  out.push_back(LevyModel::validate({1.0, 0.0, StablePositive{0.6, 0.5}}));
  out.push_back(LevyModel::validate({0.2, 0.1, TemperedStable{1.5, 0.5, 1.0}}));
  return out;
}

void properties(const Context& ctx, CriterionResult& r) {
  r.name = ctx.opts.suite == Suite::Analytic ? "property suites (no MC)" : "property suites";
  r.time_limit = 60.0;
  const auto models = property_models(ctx);
  std::vector<std::string> failed;
  auto require = [&](bool cond, const std::string& what) {
    if (!cond) failed.push_back(what);
  };
  const auto lams = log_grid(1e-3, 1e4, 60);
  const auto xs = log_grid(1e-3, 30.0, 40);
  int convex_checks = 0, mono_checks = 0, density_checks = 0, scale_checks = 0, theta_checks = 0;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const LevyModel& m = models[mi];
    const std::string tag = fmt("model %zu", mi);
    bool convex = true;
    for (std::size_t i = 0; i + 2 < lams.size(); ++i) {
      const double p1 = m.laplace_exponent(lams[i]), p2 = m.laplace_exponent(lams[i + 1]), p3 = m.laplace_exponent(lams[i + 2]);
      const double chord = p1 + (p3 - p1) * (lams[i + 1] - lams[i]) / (lams[i + 2] - lams[i]);
      convex = convex && p2 <= chord;
      ++convex_checks;
    }
    require(convex, tag + ": psi convexity");

    const ScaleEvaluator ev(m);
    bool mono = true, dens = true;
    double prev = 0.0;
    for (double x : xs) {
      const double w = ev.w(x);
      mono = mono && w > 0.0 && w >= prev * (1.0 - ctx.tol(1e-7));
      prev = w;
      ++mono_checks;
      for (double start : {0.5, 2.0}) {
        dens = dens && ev.potential_density(start, x) >= -ctx.tol(1e-10);
        ++density_checks;
      }
    }
    require(mono, tag + ": W monotone");
    require(dens, tag + ": potential density >= 0");

    Verdict last = Verdict::Converges;
    bool theta_mono = true, scaling = true;
    for (double theta : {0.3, 0.8, 1.3, 1.9, 2.6}) {
      auto generic = [theta](double k) {
        return Generic{[theta, k](double z) { return k * std::pow(z, -theta); }, true, true, std::nullopt};
      };
      const TestVerdict base = extinction_test(m, generic(1.0));
      for (double k : {1e-3, 1e3}) {
        const TestVerdict sc = extinction_test(m, generic(k));
        scaling = scaling && sc.verdict == base.verdict;
        if (base.verdict == Verdict::Converges) {
          scaling = scaling && std::abs(sc.value - k * base.value) <= ctx.tol(1e-6) * std::abs(k * base.value);
        }
        ++scale_checks;
      }
      if (base.verdict == Verdict::Inconclusive) continue;
      theta_mono = theta_mono && !(last == Verdict::Diverges && base.verdict == Verdict::Converges);
      last = base.verdict;
      ++theta_checks;
    }
    require(scaling, tag + ": verdict scaling invariance");
    require(theta_mono, tag + ": verdict theta-monotonicity");
  }

  std::string mc_note = "skipped";
  if (ctx.opts.suite != Suite::Analytic) {
    PathConfig c;
    c.eps = 1e-2;
    c.barrier = 10.0;
    c.horizon = 20.0;
    c.seed = 20260305;
    const LevyModel m = ctx.shipped("tempered");
    const MCSummary one = mc_estimate(m, 1.0, PowerLaw{0.8}, FunctionalFiniteness{}, 400, c, 1);
    bool same = true;
    for (unsigned w : {2u, 4u}) {
      const MCSummary many = mc_estimate(m, 1.0, PowerLaw{0.8}, FunctionalFiniteness{}, 400, c, w);
      for (std::size_t i = 0; i < one.records.size(); ++i) {
        same = same && one.records[i].status == many.records[i].status &&
               std::memcmp(&one.records[i].a_final, &many.records[i].a_final, sizeof(double)) == 0;
      }
    }
    require(same, "MC determinism across 1/2/4 workers");
    mc_note = same ? "identical" : "differs";
  }
  r.passed = failed.empty();
  std::string fail_list;
  for (const auto& f : failed) fail_list += f + "; ";
  r.measured = fmt("%d convexity, %d W, %d density, %d scaling, %d theta checks; workers %s%s%s", convex_checks,
                   mono_checks, density_checks, scale_checks, theta_checks, mc_note.c_str(),
                   failed.empty() ? "" : "; FAILED: ", fail_list.c_str());
  r.expected = "all invariants hold";
}

using Runner = void (*)(const Context&, CriterionResult&);

struct Criterion {
  int id;
  bool monte_carlo;
  Runner run;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts) {
  const Context ctx{opts};
  const std::vector<Criterion> all = {
      {1, false, scale_oracle}, {2, false, laplace},        {3, true, hitting},        {4, true, conditional},
      {5, true, occupation},    {6, false, classification}, {7, true, corroboration}, {8, false, properties},
  };
  std::vector<CriterionResult> out;
  for (const auto& c : all) {
    if (opts.suite == Suite::Analytic && c.monte_carlo) continue;
    if (opts.suite == Suite::MonteCarlo && !c.monte_carlo && c.id != 8) continue;
    CriterionResult r;
    r.id = c.id;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(ctx, r);
    } catch (const std::exception& e) {
      r.passed = false;
      r.measured = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > r.time_limit) {
      r.passed = false;
      r.measured += " [over time budget]";
    }
    if (opts.on_result) opts.on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name << " | measured: " << r.measured
    << " | expected: " << r.expected << fmt(" | %.1f s (limit %.0f s)", r.seconds, r.time_limit);
  return s.str();
}

}  // namespace levyfn
