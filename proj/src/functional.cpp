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

#include "levyfn/functional.hpp"

#include <cmath>
#include <sstream>

#include "levyfn/error.hpp"
#include "levyfn/integral_tests.hpp"
#include "levyfn/quadrature.hpp"

namespace levyfn {

void check_functional(const FunctionalSpec& f) {
  std::visit(
      [](const auto& spec) {
        using S = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<S, PowerLaw>) {
          if (!(spec.theta > 0.0) || !std::isfinite(spec.theta)) {
            throw Error(ErrorCode::InvalidParameter, "power law exponent theta must be > 0");
          }
          if (!(spec.weight > 0.0)) throw Error(ErrorCode::InvalidParameter, "power law weight must be > 0");
        } else if constexpr (std::is_same_v<S, LaplaceRep>) {
          if (!spec.g) throw Error(ErrorCode::InvalidParameter, "Laplace representation needs g");
        } else {
          if (!spec.f) throw Error(ErrorCode::InvalidParameter, "generic functional needs f");
        }
      },
      f);
}

double evaluate(const FunctionalSpec& f, double x) {
  return std::visit(
      [x](const auto& spec) -> double {
        using S = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<S, PowerLaw>) {
          return spec.weight * std::pow(x, -spec.theta);
        } else if constexpr (std::is_same_v<S, LaplaceRep>) {
          if (spec.f_closed) return spec.f_closed(x);
          // e^{-xz} g(z): head by quadrature, tail through the verdict engine.
          auto integrand = [&](double z) { return std::exp(-x * z) * spec.g(z); };
          const double split = 1.0 / x;
          QuadratureOptions opts;
          opts.abs_tol = 1e-12;
          opts.rel_tol = 1e-10;
          opts.singular_at_a = true;
          const double head = integrate_checked(integrand, 0.0, split, opts);
          const TestVerdict tail = improper_integral_verdict(integrand, Endpoint::at_infinity(split));
          if (tail.verdict != Verdict::Converges) return std::numeric_limits<double>::infinity();
          return head + tail.value;
        } else {
          return spec.f(x);
        }
      },
      f);
}

bool is_decreasing(const FunctionalSpec& f) {
  if (const auto* g = std::get_if<Generic>(&f)) return g->decreasing;
  return true;
}

bool is_bounded_away_from_zero(const FunctionalSpec& f) {
  if (const auto* g = std::get_if<Generic>(&f)) return g->bounded_away_from_zero;
  return true;
}

std::optional<std::function<double(double)>> laplace_density(const FunctionalSpec& f) {
  if (const auto* p = std::get_if<PowerLaw>(&f)) {
    const double theta = p->theta;
    const double norm = p->weight / std::tgamma(theta);
    return [theta, norm](double z) { return norm * std::pow(z, theta - 1.0); };
  }
  if (const auto* l = std::get_if<LaplaceRep>(&f)) return l->g;
  return std::nullopt;
}

FunctionalSpec constant_functional(double value) {
  return Generic{[value](double) { return value; }, true, true, value};
}

std::string describe(const FunctionalSpec& f) {
  std::ostringstream out;
  std::visit(
      [&](const auto& spec) {
        using S = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<S, PowerLaw>) {
          out << "power_law(theta=" << spec.theta;
          if (spec.weight != 1.0) out << ", weight=" << spec.weight;
          out << ")";
        } else if constexpr (std::is_same_v<S, LaplaceRep>) {
          out << "laplace_rep";
        } else if (spec.constant) {
          out << "constant(" << *spec.constant << ")";
        } else {
          out << "generic(decreasing=" << (spec.decreasing ? "true" : "false")
              << ", bounded=" << (spec.bounded_away_from_zero ? "true" : "false") << ")";
        }
      },
      f);
  return out.str();
}

}  // namespace levyfn
