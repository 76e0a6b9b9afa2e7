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

#include <string>

#include "json.hpp"
#include "levyfn/integral_tests.hpp"
#include "levyfn/levy_model.hpp"
#include "levyfn/montecarlo.hpp"

namespace levyfn {

using Json = nlohmann::json;

/// Model schema:
///   {"drift": b, "gaussian": c,
///    "jumps": {"family": "none"}
///           | {"family": "stable",   "alpha": a, "scale": C}
///           | {"family": "cpexp",    "rate": rho, "jump_mean": m}
///           | {"family": "tempered", "alpha": a, "scale": C, "tempering": q}}
Triplet triplet_from_json(const Json& j);
Json triplet_to_json(const Triplet& t);

LevyModel model_from_json(const Json& j);
LevyModel load_model(const std::string& path);

/// FNV-1a 64 of the canonical model JSON, as 16 hex digits.
std::string model_hash(const Triplet& t);

/// Extended reals: finite numbers stay numeric, infinities become "inf"/"-inf", NaN becomes null.
Json extended(double v);

Json to_json(const TestVerdict& v);
Json to_json(const BoundaryReport& r);
Json to_json(const MCSummary& s);

}  // namespace levyfn
