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
#include <memory>
#include <optional>
#include <vector>

#include "levyfn/functional.hpp"
#include "levyfn/integral_tests.hpp"
#include "levyfn/levy_model.hpp"

namespace levyfn {

struct InversionOptions {
  /// Base number of Gaver-Stehfest terms (even, 4..24). The value returned
  /// uses twice this order; the base order serves as the agreement check.
  int order = 14;
  /// Relative disagreement between the two orders that flags instability.
  double agreement_tol = 1e-3;
  bool use_closed_form = true;
};

/// Log-spaced abscissae on which W^natural is tabulated at construction.
struct GridSpec {
  double x_min = 1e-6;
  double x_max = 100.0;
  int count = 400;
};

/// Scale function W of a spectrally positive Levy process with
///   int_0^inf e^{-lam y} W(y) dy = 1/psi(lam),  lam > Phi(0).
///
/// W is computed as e^{Phi(0) x} W^natural(x), where W^natural inverts
/// 1/psi(lam + Phi(0)); that transform converges on lam > 0, which keeps the
/// real-axis inversion well conditioned. Immutable after construction.
class ScaleEvaluator {
 public:
  explicit ScaleEvaluator(const LevyModel& model, InversionOptions opts = {},
                          std::optional<GridSpec> grid = std::nullopt);
  ~ScaleEvaluator();
  ScaleEvaluator(ScaleEvaluator&&) noexcept;
  ScaleEvaluator& operator=(ScaleEvaluator&&) noexcept;

  const LevyModel& model() const noexcept { return model_; }
  const InversionOptions& options() const noexcept { return opts_; }

  /// W(x); zero for x < 0.
  double w(double x) const;
  /// W^natural(x) = e^{-Phi(0) x} W(x).
  double w_natural(double x) const;
  /// W^natural by inversion only, bypassing closed forms and the grid.
  double w_natural_inverted(double x) const;
  /// W by inversion only.
  double w_inverted(double x) const;

  bool has_closed_form() const;
  std::optional<double> closed_form(double x) const;

  /// Density of mu_x(dy) = E_x[int_0^zeta 1{Z_t in dy} dt]:
  ///   e^{-Phi(0) x} W(y) - W(y - x).
  double potential_density(double x, double y) const;

  /// R(x) = e^{Phi(0) x}/psi'(Phi(0)) - W(x), bounded and positive; needs Phi(0) > 0.
  double residual(double x) const;
  double residual_inverted(double x) const;

  /// W^natural(y) - W^natural(y - x) for x > 0, free of cancellation in the tail.
  double natural_increment(double y, double x) const;

  bool has_grid() const;

 private:
  template <class Transform>
  double checked_inversion(const Transform& F, double x) const;

  struct Impl;
  LevyModel model_;
  InversionOptions opts_;
  std::unique_ptr<Impl> impl_;
};

struct ExpectationResult {
  /// Extended real: +inf when the defining integral diverges, NaN when undecided.
  double value = 0.0;
  /// Closed form when one exists (constant f only).
  std::optional<double> closed_form;
  TestVerdict near_zero;
  TestVerdict tail;
  double quadrature_error = 0.0;

  bool finite() const { return std::isfinite(value); }
};

/// E_x[int_0^{tau_y^-} f(Z_t) dt] for 0 < y < x, via the potential density.
ExpectationResult occupation_expectation(const ScaleEvaluator& ev, const FunctionalSpec& f, double x,
                                         double y);

/// E_x[int_0^zeta f(Z_t) e^{-lam Z_t} dt | zeta < inf].
ExpectationResult conditional_exp_functional(const ScaleEvaluator& ev, const FunctionalSpec& f, double x,
                                             double lam);

struct LaplaceCheck {
  double transform = 0.0;   ///< int_0^M e^{-lam y} W(y) dy
  double truncation = 0.0;  ///< M
  double residual = 0.0;    ///< psi(lam) * transform - 1
};

/// Numerical Laplace transform of W at lam > Phi(0); M is the first doubling
/// with e^{-lam M} W(M) < cutoff.
LaplaceCheck laplace_identity(const ScaleEvaluator& ev, double lam, double cutoff = 1e-8);

}  // namespace levyfn
