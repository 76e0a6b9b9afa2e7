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

#include "levyfn/levy_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "levyfn/error.hpp"
#include "levyfn/quadrature.hpp"

namespace levyfn {

namespace {

constexpr double kRootTolerance = 1e-10;
constexpr double kProbeStart = 1e-6;
constexpr double kProbeEnd = 1e8;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    std::ostringstream msg;
    msg << "jump index alpha = " << alpha << " outside (0, 2)";
    throw Error(ErrorCode::InvalidJumpIndex, msg.str());
  }
}

void require_positive(double v, const char* name) {
  if (!positive_finite(v)) {
    std::ostringstream msg;
    msg << name << " = " << v << " must be finite and > 0";
    throw Error(ErrorCode::InvalidParameter, msg.str());
  }
}

QuadratureOptions tight() {
  QuadratureOptions o;
  o.abs_tol = 1e-14;
  o.rel_tol = 1e-12;
  return o;
}

// e^{-x} - 1 + x without cancellation for small x.
double compensated_exp(double x) {
  if (x < 1e-3) return x * x * (0.5 - x * (1.0 / 6.0 - x * (1.0 / 24.0 - x / 120.0)));
  return std::expm1(-x) + x;
}

}  // namespace

LevyModel LevyModel::validate(const Triplet& triplet) {
  if (!std::isfinite(triplet.drift)) throw Error(ErrorCode::InvalidParameter, "drift must be finite");
  std::visit(
      [](const auto& j) {
        using J = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<J, StablePositive> || std::is_same_v<J, TemperedStable>) {
          check_alpha(j.alpha);
        }
      },
      triplet.jumps);
  if (!(triplet.gaussian >= 0.0) || !std::isfinite(triplet.gaussian)) {
    std::ostringstream msg;
    msg << "gaussian coefficient c = " << triplet.gaussian << " must be >= 0";
    throw Error(ErrorCode::NegativeGaussian, msg.str());
  }
  std::visit(
      [](const auto& j) {
        using J = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<J, StablePositive>) {
          require_positive(j.scale, "scale");
        } else if constexpr (std::is_same_v<J, CompoundPoissonExp>) {
          require_positive(j.rate, "rate");
          require_positive(j.jump_mean, "jump_mean");
        } else if constexpr (std::is_same_v<J, TemperedStable>) {
          require_positive(j.scale, "scale");
          require_positive(j.tempering, "tempering");
        }
      },
      triplet.jumps);

  LevyModel model;
  model.triplet_ = triplet;
  model.finalize();
  return model;
}

LevyModel LevyModel::critical_stable(double alpha, double kappa) {
  require_positive(kappa, "kappa");
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw Error(ErrorCode::InvalidJumpIndex, "critical stable index must lie in (1, 2]");
  }
  if (alpha == 2.0) return validate(Triplet{0.0, kappa, NoJumps{}});
  const double scale = kappa / std::tgamma(-alpha);
  return validate(Triplet{scale / (alpha - 1.0), 0.0, StablePositive{alpha, scale}});
}

void LevyModel::finalize() {
  gaussian_ = triplet_.gaussian;
  const double b = triplet_.drift;
  std::visit(
      [&](const auto& j) {
        using J = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<J, NoJumps>) {
          family_ = Family::None;
          linear_ = b;
        } else if constexpr (std::is_same_v<J, StablePositive>) {
          alpha_ = j.alpha;
          scale_ = j.scale;
          if (alpha_ == 1.0) {
            family_ = Family::StableUnit;
            linear_ = b + scale_ * (std::numbers::egamma - 1.0);
          } else {
            family_ = Family::Stable;
            jump_coef_ = scale_ * std::tgamma(-alpha_);
            // Full compensation for alpha > 1 moves int_{u>1} u pi(du) into the
            // linear term; for alpha < 1 the (0,1] compensator is added back.
            linear_ = alpha_ > 1.0 ? b - scale_ / (alpha_ - 1.0) : b + scale_ / (1.0 - alpha_);
          }
        } else if constexpr (std::is_same_v<J, CompoundPoissonExp>) {
          family_ = Family::CompoundPoisson;
          rate_ = j.rate;
          mu_ = 1.0 / j.jump_mean;
          // int_0^1 u rho mu e^{-mu u} du
          const double small = rate_ * (-std::expm1(-mu_) - mu_ * std::exp(-mu_)) / mu_;
          linear_ = b + small;
        } else if constexpr (std::is_same_v<J, TemperedStable>) {
          alpha_ = j.alpha;
          scale_ = j.scale;
          tempering_ = j.tempering;
          const double q = tempering_;
          q_pow_alpha_ = std::pow(q, alpha_);
          q_pow_alpha1_ = std::pow(q, alpha_ - 1.0);
          if (alpha_ >= 1.0) {
            family_ = alpha_ == 1.0 ? Family::TemperedUnit : Family::Tempered;
            if (alpha_ != 1.0) jump_coef_ = scale_ * std::tgamma(-alpha_);
            const double tail = scale_ * integrate_checked(
                                             [&](double u) { return std::exp(-q * u) * std::pow(u, -alpha_); },
                                             1.0, 1.0 + 60.0 / q, tight());
            linear_ = b - tail;
          } else {
            family_ = Family::Tempered;
            jump_coef_ = scale_ * std::tgamma(-alpha_);
            const double p = 1.0 / (1.0 - alpha_);
            const double small =
                scale_ * p *
                integrate_checked([&](double t) { return std::exp(-q * std::pow(t, p)); }, 0.0, 1.0, tight());
            linear_ = b + small;
          }
        }
      },
      triplet_.jumps);

  if (std::abs(linear_) <= 1e-12 * std::max(1.0, std::abs(b))) linear_ = 0.0;

  bool positive_somewhere = false;
  for (double lam = kProbeStart; lam <= kProbeEnd; lam *= 2.0) {
    if (laplace_exponent_as<double>(lam) > 0.0) {
      positive_somewhere = true;
      break;
    }
  }
  if (!positive_somewhere) {
    throw Error(ErrorCode::Subordinator, "psi(lam) <= 0 on the whole probe grid [1e-6, 1e8]");
  }

  const double slope = laplace_exponent_derivative(0.0);
  if (slope >= 0.0) {
    phi_zero_ = {0.0, true};
    return;
  }
  double lo = 0.0;
  double hi = kProbeStart;
  while (laplace_exponent_as<double>(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > kProbeEnd) throw Error(ErrorCode::BracketNotFound, "no sign change of psi below 1e8");
  }
  while (hi - lo > kRootTolerance * 0.5) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (laplace_exponent_as<double>(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  double root = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double d = laplace_exponent_derivative(root);
    if (!(d > 0.0)) break;
    const double next = root - laplace_exponent_as<double>(root) / d;
    if (!(next > lo - kRootTolerance && next < hi + kRootTolerance)) break;
    root = next;
  }
  phi_zero_ = {root, false};
}

double LevyModel::laplace_exponent(double lam) const {
  if (!(lam >= 0.0)) throw Error(ErrorCode::InvalidParameter, "psi requires lam >= 0");
  if (lam == 0.0) return 0.0;
  const double v = laplace_exponent_as<double>(lam);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "psi(" << lam << ") is not representable";
    throw Error(ErrorCode::NumericalOverflow, msg.str());
  }
  return v;
}

double LevyModel::laplace_exponent_derivative(double lam) const {
  if (!(lam >= 0.0)) throw Error(ErrorCode::InvalidParameter, "psi' requires lam >= 0");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double d = linear_ + 2.0 * gaussian_ * lam;
  switch (family_) {
    case Family::None:
      break;
    case Family::Stable:
      if (lam == 0.0) {
        if (alpha_ < 1.0) return -kInf;
      } else {
        d += jump_coef_ * alpha_ * std::pow(lam, alpha_ - 1.0);
      }
      break;
    case Family::StableUnit:
      if (lam == 0.0) return -kInf;
      d += scale_ * (std::log(lam) + 1.0);
      break;
    case Family::CompoundPoisson:
      d -= rate_ * mu_ / ((mu_ + lam) * (mu_ + lam));
      break;
    case Family::Tempered:
      if (alpha_ > 1.0) {
        d += jump_coef_ * alpha_ * (std::pow(lam + tempering_, alpha_ - 1.0) - q_pow_alpha1_);
      } else {
        d += jump_coef_ * alpha_ * std::pow(lam + tempering_, alpha_ - 1.0);
      }
      break;
    case Family::TemperedUnit:
      d += scale_ * std::log1p(lam / tempering_);
      break;
  }
  if (std::isnan(d)) throw Error(ErrorCode::NumericalOverflow, "psi' is not representable");
  return d;
}

double LevyModel::shifted_exponent(double lam) const {
  if (!(lam >= 0.0)) throw Error(ErrorCode::InvalidParameter, "shifted exponent requires lam >= 0");
  if (lam == 0.0) return 0.0 * laplace_exponent(phi_zero_.value);
  return laplace_exponent(lam + phi_zero_.value);
}

double LevyModel::hit_probability(double x) const {
  if (!(x > 0.0)) throw Error(ErrorCode::NonPositiveStart, "starting point must be > 0");
  return std::exp(-phi_zero_.value * x);
}

std::optional<PurePower> LevyModel::pure_power() const {
  if (linear_ != 0.0) return std::nullopt;
  if (family_ == Family::None && gaussian_ > 0.0) return PurePower{gaussian_, 2.0};
  if (family_ == Family::Stable && gaussian_ == 0.0 && alpha_ > 1.0) return PurePower{jump_coef_, alpha_};
  return std::nullopt;
}

double LevyModel::local_index() const {
  if (gaussian_ > 0.0) return 2.0;
  if ((family_ == Family::Stable || family_ == Family::Tempered) && alpha_ > 1.0) return alpha_;
  return 1.0;
}

bool LevyModel::bounded_variation() const {
  if (gaussian_ > 0.0) return false;
  switch (family_) {
    case Family::None:
    case Family::CompoundPoisson:
      return true;
    case Family::Stable:
    case Family::Tempered:
      return alpha_ < 1.0;
    default:
      return false;
  }
}

double LevyModel::scale_at_zero() const { return bounded_variation() ? 1.0 / linear_ : 0.0; }

double LevyModel::jump_density(double u) const {
  if (!(u > 0.0)) return 0.0;
  switch (family_) {
    case Family::None:
      return 0.0;
    case Family::Stable:
    case Family::StableUnit:
      return scale_ * std::pow(u, -1.0 - alpha_);
    case Family::CompoundPoisson:
      return rate_ * mu_ * std::exp(-mu_ * u);
    case Family::Tempered:
    case Family::TemperedUnit:
      return scale_ * std::exp(-tempering_ * u) * std::pow(u, -1.0 - alpha_);
  }
  return 0.0;
}

double LevyModel::jump_tail_mass(double eps) const {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidParameter, "tail mass requires eps > 0");
  switch (family_) {
    case Family::None:
      return 0.0;
    case Family::Stable:
    case Family::StableUnit:
      return scale_ * std::pow(eps, -alpha_) / alpha_;
    case Family::CompoundPoisson:
      return rate_ * std::exp(-mu_ * eps);
    case Family::Tempered:
    case Family::TemperedUnit: {
      // u = eps * e^s
      const double top = std::log1p(60.0 / (tempering_ * eps));
      return integrate_checked(
          [&](double s) {
            const double u = eps * std::exp(s);
            return jump_density(u) * u;
          },
          0.0, top, tight());
    }
  }
  return 0.0;
}

double LevyModel::jump_first_moment(double lo, double hi) const {
  if (!(lo > 0.0 && hi >= lo)) throw Error(ErrorCode::InvalidParameter, "first moment requires 0 < lo <= hi");
  switch (family_) {
    case Family::None:
      return 0.0;
    case Family::Stable:
    case Family::StableUnit:
      if (alpha_ == 1.0) return scale_ * std::log(hi / lo);
      return scale_ * (std::pow(hi, 1.0 - alpha_) - std::pow(lo, 1.0 - alpha_)) / (1.0 - alpha_);
    case Family::CompoundPoisson:
      return rate_ * ((lo + 1.0 / mu_) * std::exp(-mu_ * lo) - (hi + 1.0 / mu_) * std::exp(-mu_ * hi));
    case Family::Tempered:
    case Family::TemperedUnit:
      return integrate_checked(
          [&](double s) {
            const double u = lo * std::exp(s);
            return jump_density(u) * u * u;
          },
          0.0, std::log(hi / lo), tight());
  }
  return 0.0;
}

double LevyModel::jump_second_moment_below(double eps) const {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidParameter, "second moment requires eps > 0");
  switch (family_) {
    case Family::None:
      return 0.0;
    case Family::Stable:
    case Family::StableUnit:
      return scale_ * std::pow(eps, 2.0 - alpha_) / (2.0 - alpha_);
    case Family::CompoundPoisson:
      return integrate_checked([&](double u) { return u * u * jump_density(u); }, 0.0, eps, tight());
    case Family::Tempered:
    case Family::TemperedUnit: {
      // u = eps * t^{1/(2-alpha)} makes u^{1-alpha} du = eps^{2-alpha}/(2-alpha) dt.
      const double p = 1.0 / (2.0 - alpha_);
      return scale_ * std::pow(eps, 2.0 - alpha_) * p *
             integrate_checked([&](double t) { return std::exp(-tempering_ * eps * std::pow(t, p)); }, 0.0,
                               1.0, tight());
    }
  }
  return 0.0;
}

double LevyModel::laplace_exponent_by_quadrature(double lam) const {
  if (!(lam >= 0.0)) throw Error(ErrorCode::InvalidParameter, "psi requires lam >= 0");
  const double b = triplet_.drift;
  double value = b * lam + gaussian_ * lam * lam;
  if (family_ == Family::None || lam == 0.0) return value;

  // Write pi(du) = h(u) u^{-1-a} du with h smooth at 0.
  const double a = family_ == Family::CompoundPoisson ? -1.0 : alpha_;
  const double p = 1.0 / (2.0 - a);
  auto h = [&](double u) { return jump_density(u) * std::pow(u, 1.0 + a); };
  // int_0^1 (e^{-lam u} - 1 + lam u) pi(du), with t = u^{2-a}.
  const double small = p * integrate_checked(
                               [&](double t) {
                                 if (t <= 0.0) return 0.0;
                                 const double u = std::pow(t, p);
                                 return compensated_exp(lam * u) / (u * u) * h(u);
                               },
                               0.0, 1.0, tight());
  // int_1^inf (e^{-lam u} - 1) pi(du), with u = e^s.
  const double decay = family_ == Family::CompoundPoisson ? 1.0 : alpha_;
  const double top = family_ == Family::CompoundPoisson ? std::log1p(60.0 / mu_) : 60.0 / decay;
  QuadratureOptions opts = tight();
  opts.max_subdivisions = 20000;
  const double large = integrate_checked(
      [&](double s) {
        const double u = std::exp(s);
        return std::expm1(-lam * u) * jump_density(u) * u;
      },
      0.0, top, opts);
  return value + small + large;
}

}  // namespace levyfn
