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
#include <numbers>
#include <string>
#include <vector>

#include "levyfn/levy_model.hpp"

namespace levyfn::testing {

struct NamedModel {
  std::string name;
  LevyModel model;
};

inline LevyModel bm_drift_down() { return LevyModel::validate({-1.0, 1.0, NoJumps{}}); }  // lam^2 - lam
inline LevyModel bm_drift_up() { return LevyModel::validate({1.0, 1.0, NoJumps{}}); }     // lam^2 + lam
inline LevyModel bm() { return LevyModel::validate({0.0, 1.0, NoJumps{}}); }              // lam^2
inline LevyModel stable15() { return LevyModel::critical_stable(1.5); }                  // lam^1.5

/// Families covering every jump law and both signs of psi'(0+).
inline std::vector<NamedModel> example_families() {
  return {
      {"bm_drift_down", bm_drift_down()},
      {"bm_drift_up", bm_drift_up()},
      {"bm", bm()},
      {"stable15", stable15()},
      {"stable12", LevyModel::critical_stable(1.2)},
      {"stable15_raw", LevyModel::validate({0.0, 0.0, StablePositive{1.5, 3.0 / (4.0 * std::sqrt(std::numbers::pi))}})},
      {"stable06_bv", LevyModel::validate({1.0, 0.0, StablePositive{0.6, 0.5}})},
      {"stable10_gauss", LevyModel::validate({0.0, 0.3, StablePositive{1.0, 0.4}})},
      {"cpexp", LevyModel::validate({0.5, 0.5, CompoundPoissonExp{2.0, 0.5}})},
      {"cpexp_bv", LevyModel::validate({2.0, 0.0, CompoundPoissonExp{1.0, 1.0}})},
      {"tempered15", LevyModel::validate({0.2, 0.1, TemperedStable{1.5, 0.5, 1.0}})},
      {"tempered05", LevyModel::validate({0.5, 0.2, TemperedStable{0.5, 0.4, 2.0}})},
      {"tempered10", LevyModel::validate({-0.3, 0.4, TemperedStable{1.0, 0.3, 0.5}})},
  };
}

}  // namespace levyfn::testing
