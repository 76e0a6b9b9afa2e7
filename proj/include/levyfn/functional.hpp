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

#include <functional>
#include <optional>
#include <string>
#include <variant>

namespace levyfn {

/// f(x) = weight * x^(-theta).
struct PowerLaw {
  double theta;
  double weight = 1.0;
};

/// f(x) = int_0^inf e^{-xz} g(z) dz with g >= 0.
struct LaplaceRep {
  std::function<double(double)> g;
  /// Closed form of f when known; otherwise f is evaluated by quadrature.
  std::function<double(double)> f_closed;
};

/// Pointwise f with the structural flags that decide which tests apply.
struct Generic {
  std::function<double(double)> f;
  bool decreasing = false;
  /// sup_{x >= eps} f(x) < inf for every eps > 0.
  bool bounded_away_from_zero = false;
  /// Set when f is identically this constant; enables closed-form cross-checks.
  std::optional<double> constant;
};

using FunctionalSpec = std::variant<PowerLaw, LaplaceRep, Generic>;

/// Validates the functional invariants (theta > 0, callables present).
void check_functional(const FunctionalSpec& f);

double evaluate(const FunctionalSpec& f, double x);

bool is_decreasing(const FunctionalSpec& f);
bool is_bounded_away_from_zero(const FunctionalSpec& f);

/// g for the Laplace representation: PowerLaw gives g(z) = weight z^(theta-1)/Gamma(theta).
std::optional<std::function<double(double)>> laplace_density(const FunctionalSpec& f);

FunctionalSpec constant_functional(double value = 1.0);

std::string describe(const FunctionalSpec& f);

}  // namespace levyfn
