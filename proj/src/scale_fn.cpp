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

#include "levyfn/scale_fn.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <sstream>

#include "levyfn/error.hpp"
#include "levyfn/quadrature.hpp"

namespace levyfn {

namespace {

namespace mp = boost::multiprecision;
// 64 digits carry Gaver-Stehfest up to 48 terms.
using Real = mp::number<mp::mpfr_float_backend<64>, mp::et_off>;

constexpr int kMaxBaseOrder = 24;

Real factorial(int n) {
  Real r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<Real> stehfest_weights(int n) {
  const int half = n / 2;
  std::vector<Real> v(n + 1);
  for (int k = 1; k <= n; ++k) {
    Real s = 0;
    for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
      s += mp::pow(Real(j), half) * factorial(2 * j) /
           (factorial(half - j) * factorial(j) * factorial(j - 1) * factorial(k - j) * factorial(2 * j - k));
    }
    v[k] = ((k + half) % 2 == 1) ? Real(-s) : s;
  }
  return v;
}

}  // namespace

struct ScaleEvaluator::Impl {
  Real phi;
  Real ln2;
  std::vector<Real> base_weights;
  std::vector<Real> fine_weights;
  std::optional<boost::math::interpolators::cardinal_cubic_b_spline<double>> log_grid;
  double grid_lo = 0.0;
  double grid_hi = 0.0;

  // psi'(Phi(0)) in working precision, used by the residual transform.
  Real slope_at_phi;
  std::optional<boost::math::interpolators::cardinal_cubic_b_spline<double>> residual_grid;

  template <class Transform>
  Real stehfest(const Transform& F, const std::vector<Real>& weights, double x) const {
    const Real a = ln2 / Real(x);
    Real sum = 0;
    for (std::size_t k = 1; k < weights.size(); ++k) sum += weights[k] * F(a * Real(static_cast<int>(k)));
    return a * sum;
  }
};

ScaleEvaluator::ScaleEvaluator(const LevyModel& model, InversionOptions opts, std::optional<GridSpec> grid)
    : model_(model), opts_(opts), impl_(std::make_unique<Impl>()) {
  if (opts_.order < 4 || opts_.order > kMaxBaseOrder || opts_.order % 2 != 0) {
    throw Error(ErrorCode::InvalidParameter, "inversion order must be even and in [4, 24]");
  }
  impl_->ln2 = mp::log(Real(2));
  impl_->base_weights = stehfest_weights(opts_.order);
  impl_->fine_weights = stehfest_weights(2 * opts_.order);

  // Polish Phi(0) in extended precision so psi^natural(0) vanishes to working accuracy.
  Real phi = model_.phi_zero().value;
  if (!model_.phi_zero().exact_zero) {
    for (int it = 0; it < 8; ++it) {
      const Real h = phi * Real(1e-20);
      const Real f0 = model_.laplace_exponent_as(phi);
      const Real d = (model_.laplace_exponent_as(Real(phi + h)) - model_.laplace_exponent_as(Real(phi - h))) /
                     (2 * h);
      if (d <= 0) break;
      const Real step = f0 / d;
      phi -= step;
      if (mp::abs(step) <= mp::abs(phi) * Real(1e-50)) break;
    }
  }
  impl_->phi = phi;
  if (phi > 0) {
    const Real h = phi * Real(1e-25);
    impl_->slope_at_phi =
        (model_.laplace_exponent_as(Real(phi + h)) - model_.laplace_exponent_as(Real(phi - h))) / (2 * h);
  }

  if (grid) {
    if (!(grid->x_min > 0.0 && grid->x_max > grid->x_min && grid->count >= 8)) {
      throw Error(ErrorCode::InvalidParameter, "grid needs 0 < x_min < x_max and count >= 8");
    }
    const double t0 = std::log(grid->x_min);
    const double h = (std::log(grid->x_max) - t0) / (grid->count - 1);
    std::vector<double> values(grid->count);
    for (int i = 0; i < grid->count; ++i) {
      const double x = std::exp(t0 + h * i);
      const double wn = has_closed_form() && opts_.use_closed_form ? *closed_form(x) * std::exp(-model_.phi_zero().value * x)
                                                               : w_natural_inverted(x);
      if (!(wn > 0.0)) {
        std::ostringstream msg;
        msg << "W^natural(" << x << ") = " << wn << " is not positive";
        throw Error(ErrorCode::InversionUnstable, msg.str());
      }
      // Inversion noise on the flat part is far below this; larger drops mean trouble.
      if (i > 0 && std::log(wn) < values[i - 1] - 1e-6) {
        std::ostringstream msg;
        msg << "W^natural decreases at x = " << x;
        throw Error(ErrorCode::InversionUnstable, msg.str());
      }
      values[i] = std::log(wn);
    }
    impl_->log_grid.emplace(values.begin(), values.end(), t0, h);
    if (model_.phi_zero().value > 0.0 && !has_closed_form()) {
      for (int i = 0; i < grid->count; ++i) {
        const double r = residual_inverted(std::exp(t0 + h * i));
        if (!(r > 0.0)) {
          std::ostringstream msg;
          msg << "scale residual is not positive at x = " << std::exp(t0 + h * i);
          throw Error(ErrorCode::InversionUnstable, msg.str());
        }
        values[i] = std::log(r);
      }
      impl_->residual_grid.emplace(values.begin(), values.end(), t0, h);
    }
    impl_->grid_lo = grid->x_min;
    impl_->grid_hi = grid->x_max;
  }
}

ScaleEvaluator::~ScaleEvaluator() = default;
ScaleEvaluator::ScaleEvaluator(ScaleEvaluator&&) noexcept = default;
ScaleEvaluator& ScaleEvaluator::operator=(ScaleEvaluator&&) noexcept = default;

bool ScaleEvaluator::has_grid() const { return impl_->log_grid.has_value(); }

bool ScaleEvaluator::has_closed_form() const {
  if (model_.pure_power()) return true;
  return std::holds_alternative<NoJumps>(model_.jumps());
}

std::optional<double> ScaleEvaluator::closed_form(double x) const {
  if (x < 0.0) return 0.0;
  if (auto p = model_.pure_power()) {
    if (x == 0.0) return 0.0;
    return std::pow(x, p->alpha - 1.0) / (p->kappa * std::tgamma(p->alpha));
  }
  if (!std::holds_alternative<NoJumps>(model_.jumps())) return std::nullopt;
  const double c = model_.gaussian();
  const double b = model_.linear_coefficient();
  if (c == 0.0) return 1.0 / b;  // pure drift, b > 0 after validation
  if (b == 0.0) return x / c;
  return -std::expm1(-b * x / c) / b;
}

double ScaleEvaluator::w_natural_inverted(double x) const {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return model_.scale_at_zero();
  const Real& phi = impl_->phi;
  auto F = [&](const Real& s) { return Real(1) / model_.laplace_exponent_as(Real(s + phi)); };
  return checked_inversion(F, x);
}

template <class Transform>
double ScaleEvaluator::checked_inversion(const Transform& F, double x) const {
  const double c = static_cast<double>(impl_->stehfest(F, impl_->base_weights, x));
  const double f = static_cast<double>(impl_->stehfest(F, impl_->fine_weights, x));
  if (!std::isfinite(f) || std::abs(c - f) > opts_.agreement_tol * std::abs(f)) {
    std::ostringstream msg;
    msg << "orders " << opts_.order << " and " << 2 * opts_.order << " disagree at x = " << x << " (" << c
        << " vs " << f << ")";
    throw Error(ErrorCode::InversionUnstable, msg.str());
  }
  return f;
}

double ScaleEvaluator::residual_inverted(double x) const {
  if (!(model_.phi_zero().value > 0.0)) throw Error(ErrorCode::NotApplicable, "scale residual needs Phi(0) > 0");
  if (!(x > 0.0)) throw Error(ErrorCode::InvalidParameter, "scale residual needs x > 0");
  // Laplace transform of e^{Phi x}/psi'(Phi) - W(x); the pole at s = Phi cancels.
  const Real& phi = impl_->phi;
  const Real& d = impl_->slope_at_phi;
  auto F = [&](const Real& s) { return Real(1) / (d * (s - phi)) - Real(1) / model_.laplace_exponent_as(s); };
  return checked_inversion(F, x);
}

double ScaleEvaluator::residual(double x) const {
  const double phi = model_.phi_zero().value;
  if (!(phi > 0.0)) throw Error(ErrorCode::NotApplicable, "scale residual needs Phi(0) > 0");
  if (x < 0.0) return std::exp(phi * x) / model_.laplace_exponent_derivative(phi);
  if (std::holds_alternative<NoJumps>(model_.jumps())) return 1.0 / (model_.gaussian() * phi);
  if (x == 0.0) return 1.0 / model_.laplace_exponent_derivative(phi) - model_.scale_at_zero();
  if (impl_->residual_grid && x >= impl_->grid_lo && x <= impl_->grid_hi) {
    return std::exp((*impl_->residual_grid)(std::log(x)));
  }
  return residual_inverted(x);
}

double ScaleEvaluator::natural_increment(double y, double x) const {
  if (y < x) return w_natural(y);
  const double phi = model_.phi_zero().value;
  double d;
  if (phi > 0.0) {
    d = std::exp(-phi * (y - x)) * residual(y - x) - std::exp(-phi * y) * residual(y);
  } else {
    d = w(y) - w(y - x);
  }
  // Rounding can push a tiny increment negative; the exact value never is.
  return std::max(d, 0.0);
}

double ScaleEvaluator::w_inverted(double x) const {
  if (x < 0.0) return 0.0;
  return std::exp(model_.phi_zero().value * x) * w_natural_inverted(x);
}

double ScaleEvaluator::w_natural(double x) const {
  if (x < 0.0) return 0.0;
  if (opts_.use_closed_form) {
    if (auto cf = closed_form(x)) return *cf * std::exp(-model_.phi_zero().value * x);
  }
  if (x == 0.0) return model_.scale_at_zero();
  if (impl_->log_grid && x >= impl_->grid_lo && x <= impl_->grid_hi) {
    return std::exp((*impl_->log_grid)(std::log(x)));
  }
  return w_natural_inverted(x);
}

double ScaleEvaluator::w(double x) const {
  if (x < 0.0) return 0.0;
  return std::exp(model_.phi_zero().value * x) * w_natural(x);
}

double ScaleEvaluator::potential_density(double x, double y) const {
  if (!(x > 0.0)) throw Error(ErrorCode::NonPositiveStart, "potential density needs x > 0");
  if (!(y > 0.0)) throw Error(ErrorCode::InvalidParameter, "potential density needs y > 0");
  // e^{-phi x} W(y) - W(y - x) = e^{phi (y - x)} [W^n(y) - W^n(y - x)]
  const double phi = model_.phi_zero().value;
  if (y >= x && phi > 0.0) return std::max(residual(y - x) - std::exp(-phi * x) * residual(y), 0.0);
  return std::exp(phi * (y - x)) * natural_increment(y, x);
}

namespace {

QuadratureOptions expectation_quadrature() {
  QuadratureOptions q;
  q.abs_tol = 1e-10;
  q.rel_tol = 1e-9;
  q.singular_at_a = true;
  return q;
}

void accumulate(ExpectationResult& out, const QuadratureResult& q) {
  if (!q.converged) {
    std::ostringstream msg;
    msg << "adaptive quadrature error " << q.error << " after " << q.subdivisions << " subdivisions";
    throw Error(ErrorCode::QuadratureFailure, msg.str());
  }
  out.value += q.value;
  out.quadrature_error += q.error;
}

void finish_with_tail(ExpectationResult& out) {
  if (out.tail.verdict == Verdict::Diverges) {
    out.value = std::numeric_limits<double>::infinity();
  } else if (out.tail.verdict == Verdict::Inconclusive) {
    out.value = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.value += out.tail.value;
  }
}

}  // namespace

ExpectationResult occupation_expectation(const ScaleEvaluator& ev, const FunctionalSpec& f, double x, double y) {
  check_functional(f);
  if (!(y > 0.0 && y < x)) throw Error(ErrorCode::InvalidParameter, "occupation expectation needs 0 < y < x");
  const double d = x - y;
  auto integrand = [&](double z) {
    if (z <= 0.0) return 0.0;
    return evaluate(f, z + y) * ev.potential_density(d, z);
  };
  ExpectationResult out;
  out.near_zero.verdict = Verdict::Converges;
  out.near_zero.value = 0.0;
  out.near_zero.method = "bounded near 0";
  const QuadratureOptions q = expectation_quadrature();
  accumulate(out, integrate(integrand, 0.0, d, q));
  const double from = std::max(2.0 * d, d + 1.0);
  accumulate(out, integrate(integrand, d, from, q));
  out.tail = improper_integral_verdict(integrand, Endpoint::at_infinity(from));
  finish_with_tail(out);

  if (const auto* g = std::get_if<Generic>(&f); g && g->constant) {
    const LevyModel& m = ev.model();
    const double slope = m.laplace_exponent_derivative(0.0);
    if (m.phi_zero().value > 0.0 || !(slope > 0.0)) {
      out.closed_form = std::numeric_limits<double>::infinity();
    } else {
      out.closed_form = *g->constant * d / slope;
    }
  }
  return out;
}

ExpectationResult conditional_exp_functional(const ScaleEvaluator& ev, const FunctionalSpec& f, double x,
                                             double lam) {
  check_functional(f);
  if (!(x > 0.0)) throw Error(ErrorCode::NonPositiveStart, "conditional functional needs x > 0");
  if (!(lam > 0.0)) throw Error(ErrorCode::InvalidParameter, "conditional functional needs lam > 0");
  // f(y) e^{-(lam+phi) y}[W(y) - e^{phi x} W(y - x)] = f(y) e^{-lam y}[W^n(y) - W^n(y - x)]
  auto integrand = [&](double y) {
    if (y <= 0.0) return 0.0;
    const double diff = ev.natural_increment(y, x);
    if (diff == 0.0) return 0.0;
    return evaluate(f, y) * std::exp(-lam * y) * diff;
  };
  ExpectationResult out;
  const double head = 0.5 * std::min(x, 1.0);
  out.near_zero = improper_integral_verdict(integrand, Endpoint::at_zero_plus(head));
  if (out.near_zero.verdict != Verdict::Converges) {
    out.value = out.near_zero.verdict == Verdict::Diverges ? std::numeric_limits<double>::infinity()
                                                           : std::numeric_limits<double>::quiet_NaN();
  } else {
    out.value = out.near_zero.value;
    QuadratureOptions q = expectation_quadrature();
    q.singular_at_a = false;
    accumulate(out, integrate(integrand, head, x, q));
    const double from = x + std::max(1.0, 25.0 / lam);
    accumulate(out, integrate(integrand, x, from, expectation_quadrature()));
    out.tail = improper_integral_verdict(integrand, Endpoint::at_infinity(from));
    finish_with_tail(out);
  }

  if (const auto* g = std::get_if<Generic>(&f); g && g->constant) {
    const LevyModel& m = ev.model();
    out.closed_form = *g->constant * -std::expm1(-lam * x) / m.laplace_exponent(lam + m.phi_zero().value);
  }
  return out;
}

LaplaceCheck laplace_identity(const ScaleEvaluator& ev, double lam, double cutoff) {
  const LevyModel& m = ev.model();
  const double phi = m.phi_zero().value;
  if (!(lam > phi)) throw Error(ErrorCode::InvalidParameter, "Laplace identity needs lam > Phi(0)");
  const double rate = lam - phi;
  double top = 1.0;
  while (std::exp(-rate * top) * ev.w_natural(top) >= cutoff) {
    top *= 2.0;
    if (top > 1e6) throw Error(ErrorCode::QuadratureFailure, "no truncation point found below 1e6");
  }
  QuadratureOptions q;
  q.abs_tol = 1e-12;
  q.rel_tol = 1e-10;
  q.singular_at_a = true;
  LaplaceCheck out;
  out.truncation = top;
  out.transform = integrate_checked([&](double y) { return std::exp(-rate * y) * ev.w_natural(y); }, 0.0, top, q);
  out.residual = m.laplace_exponent(lam) * out.transform - 1.0;
  return out;
}

}  // namespace levyfn
