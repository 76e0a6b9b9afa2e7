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

#include "levyfn/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <limits>
#include <vector>

#include "levyfn/error.hpp"

namespace levyfn {

namespace {

// Kronrod abscissae and weights on [-1, 1]; odd indices carry the Gauss points.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod_15(const RealFunction& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  double err = std::abs(kronrod - gauss);
  // QUADPACK-style error scaling; keeps estimates honest for smooth integrands.
  if (err > 0.0) err = std::max(err * std::min(1.0, std::pow(200.0 * err / std::max(std::abs(kronrod), 1e-300), 1.5)),
                                50.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod));
  return {a, b, kronrod, err};
}

QuadratureResult adaptive(const RealFunction& f, double a, double b, const QuadratureOptions& opts,
                          int budget) {
  std::priority_queue<Panel> heap;
  Panel first = gauss_kronrod_15(f, a, b);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  int used = 1;
  auto done = [&] { return total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  while (!done() && used < budget) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    Panel left = gauss_kronrod_15(f, worst.a, mid);
    Panel right = gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++used;
  }
  // Re-sum to shed accumulated cancellation in the running totals.
  double value = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  QuadratureResult res{value, err, used, false};
  res.converged = err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value)) && std::isfinite(value);
  return res;
}

}  // namespace

QuadratureResult integrate(const RealFunction& f, double a, double b, const QuadratureOptions& opts) {
  if (a == b) return {0.0, 0.0, 0, true};
  if (b < a) {
    QuadratureResult r = integrate(f, b, a, opts);
    r.value = -r.value;
    return r;
  }
  if (!opts.singular_at_a) return adaptive(f, a, b, opts, opts.max_subdivisions);

  const double m = opts.endpoint_power;
  const double w = (b - a) * opts.first_panel_width;
  auto mapped = [&](double u) {
    if (u <= 0.0) return 0.0;
    return f(a + w * std::pow(u, m)) * w * m * std::pow(u, m - 1.0);
  };
  QuadratureOptions sub = opts;
  sub.singular_at_a = false;
  QuadratureResult head = adaptive(mapped, 0.0, 1.0, sub, opts.max_subdivisions / 2);
  QuadratureResult rest = adaptive(f, a + w, b, sub, opts.max_subdivisions - head.subdivisions);
  QuadratureResult res{head.value + rest.value, head.error + rest.error,
                       head.subdivisions + rest.subdivisions, false};
  res.converged = res.error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(res.value)) &&
                  std::isfinite(res.value);
  return res;
}

double integrate_checked(const RealFunction& f, double a, double b, const QuadratureOptions& opts) {
  QuadratureResult r = integrate(f, a, b, opts);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "on [" << a << ", " << b << "] value " << r.value << " error " << r.error << " after "
        << r.subdivisions << " subdivisions";
    throw Error(ErrorCode::QuadratureFailure, msg.str());
  }
  return r.value;
}

}  // namespace levyfn
