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

#include <cmath>
#include <limits>
#include <optional>
#include <variant>

namespace levyfn {

/// Jump measures pi(dz) on (0, inf) supported by the library.
struct NoJumps {};

/// pi(dz) = scale * z^(-1-alpha) dz, alpha in (0, 2).
struct StablePositive {
  double alpha;
  double scale;
};

/// pi(dz) = rate * mu * exp(-mu z) dz with mu = 1 / jump_mean.
struct CompoundPoissonExp {
  double rate;
  double jump_mean;
};

/// pi(dz) = scale * exp(-tempering z) * z^(-1-alpha) dz, alpha in (0, 2).
struct TemperedStable {
  double alpha;
  double scale;
  double tempering;
};

using JumpSpec = std::variant<NoJumps, StablePositive, CompoundPoissonExp, TemperedStable>;

/// Raw, unvalidated Levy triplet. The process is
///   Z_t = x - drift*t + sqrt(2*gaussian) B_t + compensated jumps in (0,1] + jumps in (1,inf).
struct Triplet {
  double drift = 0.0;
  double gaussian = 0.0;
  JumpSpec jumps = NoJumps{};
};

struct PhiZero {
  double value = 0.0;
  bool exact_zero = true;
};

/// psi(lam) = kappa * lam^alpha exactly.
struct PurePower {
  double kappa;
  double alpha;
};

/// Validated spectrally positive Levy process, immutable after construction.
///
/// The Laplace exponent is stored as
///   psi(lam) = linear*lam + gaussian*lam^2 + J(lam)
/// where J is the closed-form jump part and `linear` absorbs every term that
/// is linear in lam (including the compensator discrepancy of the family).
class LevyModel {
 public:
  static LevyModel validate(const Triplet& triplet);

  /// Model with psi(lam) = kappa * lam^alpha, alpha in (1, 2].
  static LevyModel critical_stable(double alpha, double kappa = 1.0);

  const Triplet& triplet() const noexcept { return triplet_; }
  double drift() const noexcept { return triplet_.drift; }
  double gaussian() const noexcept { return triplet_.gaussian; }
  const JumpSpec& jumps() const noexcept { return triplet_.jumps; }

  double laplace_exponent(double lam) const;

  /// psi'(lam); at lam = 0 returns psi'(0+), which may be -infinity.
  double laplace_exponent_derivative(double lam) const;

  /// psi evaluated in an arbitrary real scalar type (used by the extended
  /// precision Laplace inversion). No range checks.
  template <class T>
  T laplace_exponent_as(const T& lam) const;

  const PhiZero& phi_zero() const noexcept { return phi_zero_; }

  /// psi(lam + Phi(0)).
  double shifted_exponent(double lam) const;

  /// P_x(zeta < inf) = exp(-Phi(0) x).
  double hit_probability(double x) const;

  /// Effective linear coefficient of psi.
  double linear_coefficient() const noexcept { return linear_; }

  std::optional<PurePower> pure_power() const;

  /// Blumenthal-Getoor type index: psi(lam) ~ lam^index as lam -> inf.
  double local_index() const;

  bool bounded_variation() const;

  /// W(0+) = lim lam/psi(lam): 1/d for bounded variation, else 0.
  double scale_at_zero() const;

  /// Density of pi at u > 0 (0 for NoJumps).
  double jump_density(double u) const;
  /// pi([eps, inf)).
  double jump_tail_mass(double eps) const;
  /// int_{[lo, hi]} u pi(du).
  double jump_first_moment(double lo, double hi) const;
  /// int_{(0, eps)} u^2 pi(du).
  double jump_second_moment_below(double eps) const;

  /// Numerical evaluation of the jump integral of psi by quadrature split at
  /// u = 1; independent of the closed forms and used to cross-check them.
  double laplace_exponent_by_quadrature(double lam) const;

 private:
  enum class Family { None, Stable, StableUnit, CompoundPoisson, Tempered, TemperedUnit };

  LevyModel() = default;
  void finalize();

  Triplet triplet_;
  Family family_ = Family::None;
  double linear_ = 0.0;
  double gaussian_ = 0.0;
  double alpha_ = 0.0;
  double scale_ = 0.0;
  double tempering_ = 0.0;
  double rate_ = 0.0;
  double mu_ = 0.0;
  double jump_coef_ = 0.0;      // scale * Gamma(-alpha) for the stable-like families
  double q_pow_alpha_ = 0.0;    // tempering^alpha
  double q_pow_alpha1_ = 0.0;   // tempering^(alpha-1)
  PhiZero phi_zero_;
};

template <class T>
T LevyModel::laplace_exponent_as(const T& lam) const {
  using std::log;
  using std::pow;
  T value = T(linear_) * lam + T(gaussian_) * lam * lam;
  switch (family_) {
    case Family::None:
      break;
    case Family::Stable:
      if (lam > 0) value += T(jump_coef_) * pow(lam, T(alpha_));
      break;
    case Family::StableUnit:
      if (lam > 0) value += T(scale_) * lam * log(lam);
      break;
    case Family::CompoundPoisson:
      value -= T(rate_) * lam / (T(mu_) + lam);
      break;
    case Family::Tempered: {
      const T q(tempering_);
      T jump = pow(lam + q, T(alpha_)) - T(q_pow_alpha_);
      if (alpha_ > 1.0) jump -= T(alpha_) * T(q_pow_alpha1_) * lam;
      value += T(jump_coef_) * jump;
      break;
    }
    case Family::TemperedUnit: {
      const T q(tempering_);
      value += T(scale_) * ((lam + q) * log((lam + q) / q) - lam);
      break;
    }
  }
  return value;
}

}  // namespace levyfn
