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

#include "levyfn/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "levyfn/error.hpp"

namespace levyfn {

namespace {

double number(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::InvalidConfig, std::string("missing field \"") + key + "\"");
  if (!j.at(key).is_number()) throw Error(ErrorCode::InvalidConfig, std::string("field \"") + key + "\" must be a number");
  return j.at(key).get<double>();
}

}  // namespace

Triplet triplet_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "model must be a JSON object");
  Triplet t;
  t.drift = number(j, "drift");
  t.gaussian = number(j, "gaussian");
  if (!j.contains("jumps")) {
    t.jumps = NoJumps{};
    return t;
  }
  const Json& jumps = j.at("jumps");
  if (!jumps.is_object() || !jumps.contains("family") || !jumps.at("family").is_string()) {
    throw Error(ErrorCode::InvalidConfig, "\"jumps\" needs a string \"family\"");
  }
  const std::string family = jumps.at("family").get<std::string>();
  if (family == "none") {
    t.jumps = NoJumps{};
  } else if (family == "stable") {
    t.jumps = StablePositive{number(jumps, "alpha"), number(jumps, "scale")};
  } else if (family == "cpexp") {
    t.jumps = CompoundPoissonExp{number(jumps, "rate"), number(jumps, "jump_mean")};
  } else if (family == "tempered") {
    t.jumps = TemperedStable{number(jumps, "alpha"), number(jumps, "scale"), number(jumps, "tempering")};
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown jump family \"" + family + "\"");
  }
  return t;
}

Json triplet_to_json(const Triplet& t) {
  Json j;
  j["drift"] = t.drift;
  j["gaussian"] = t.gaussian;
  std::visit(
      [&](const auto& jumps) {
        using J = std::decay_t<decltype(jumps)>;
        if constexpr (std::is_same_v<J, NoJumps>) {
          j["jumps"] = {{"family", "none"}};
        } else if constexpr (std::is_same_v<J, StablePositive>) {
          j["jumps"] = {{"family", "stable"}, {"alpha", jumps.alpha}, {"scale", jumps.scale}};
        } else if constexpr (std::is_same_v<J, CompoundPoissonExp>) {
          j["jumps"] = {{"family", "cpexp"}, {"rate", jumps.rate}, {"jump_mean", jumps.jump_mean}};
        } else {
          j["jumps"] = {{"family", "tempered"},
                        {"alpha", jumps.alpha},
                        {"scale", jumps.scale},
                        {"tempering", jumps.tempering}};
        }
      },
      t.jumps);
  return j;
}

LevyModel model_from_json(const Json& j) { return LevyModel::validate(triplet_from_json(j)); }

LevyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open model file " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, "model file " + path + ": " + e.what());
  }
  return model_from_json(j);
}

std::string model_hash(const Triplet& t) {
  const std::string canonical = triplet_to_json(t).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json extended(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json to_json(const TestVerdict& v) {
  Json j;
  j["verdict"] = std::string(to_string(v.verdict));
  j["value"] = extended(v.value);
  j["method"] = v.method;
  j["fitted_exponent"] = extended(v.fitted_exponent);
  Json partial = Json::array();
  for (double p : v.partial_integrals) partial.push_back(extended(p));
  j["partial_integrals"] = partial;
  Json exps = Json::array();
  for (double p : v.local_exponents) exps.push_back(extended(p));
  j["local_exponents"] = exps;
  if (!v.routes.empty()) {
    Json routes = Json::array();
    for (const auto& r : v.routes) routes.push_back(to_json(r));
    j["routes"] = routes;
  }
  return j;
}

Json to_json(const BoundaryReport& r) {
  auto tri = [](const std::optional<bool>& b) -> Json {
    if (!b) return "inconclusive";
    return *b;
  };
  Json j;
  j["start"] = r.start;
  j["phi_zero"] = r.phi_zero;
  j["hit_prob"] = r.hit_prob;
  j["survival_prob"] = r.survival_prob;
  j["extinction_possible"] = tri(r.extinction_possible);
  j["extinguishing_possible"] = tri(r.extinguishing_possible);
  j["explosion_possible"] = tri(r.explosion_possible);
  j["decisive"] = r.decisive();
  j["extinction_test"] = to_json(r.extinction);
  if (r.explosion) {
    j["explosion_test"] = to_json(*r.explosion);
  } else {
    j["explosion_test"] = {{"verdict", "NotApplicable"}, {"reason", "Phi(0) = 0"}};
  }
  return j;
}

Json to_json(const MCSummary& s) {
  Json j;
  j["estimate"] = extended(s.estimate);
  j["std_error"] = extended(s.std_error);
  j["n_paths"] = s.n_paths;
  j["n_used"] = s.n_used;
  j["censoring_fraction"] = s.censoring_fraction;
  j["hit_fraction"] = s.hit_fraction;
  j["barrier_fraction"] = s.barrier_fraction;
  j["seed"] = s.seed;
  j["median_A_final"] = extended(s.median_a_final);
  j["finite_fraction_of_hits"] = extended(s.finite_fraction_of_hits);
  return j;
}

}  // namespace levyfn
