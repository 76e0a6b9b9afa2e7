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

namespace levyfn {

using RealFunction = std::function<double(double)>;

struct QuadratureOptions {
  double abs_tol = 1e-8;
  double rel_tol = 1e-6;
  int max_subdivisions = 10000;
  // When set, the first panel [a, a + first_panel_width*(b-a)] is mapped
  // through x = a + w*u^endpoint_power to soften x^-theta type singularities.
  bool singular_at_a = false;
  double endpoint_power = 4.0;
  double first_panel_width = 1.0 / 16.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on a finite interval.
/// The interval with the largest error estimate is bisected until the summed
/// error meets max(abs_tol, rel_tol*|value|) or the subdivision budget runs out.
QuadratureResult integrate(const RealFunction& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Same as integrate() but throws Error(QuadratureFailure) when the tolerance
/// is not met within budget.
double integrate_checked(const RealFunction& f, double a, double b,
                         const QuadratureOptions& opts = {});

}  // namespace levyfn
