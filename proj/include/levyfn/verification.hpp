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
#include <string>
#include <vector>

namespace levyfn {

enum class Suite { All, Analytic, MonteCarlo };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;
  std::string expected;
  double seconds = 0.0;
  double time_limit = 0.0;
};

struct VerifyOptions {
  Suite suite = Suite::All;
  /// Multiplies every numeric tolerance; 0 forces failures.
  double tol_multiplier = 1.0;
  std::string model_dir = LEVYFN_MODEL_DIR;
  unsigned workers = 1;
  /// Called as each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts);

/// One aligned line: "[PASS] 3 hitting law ... measured ... expected ... (1.2 s / 120 s)".
std::string format_result(const CriterionResult& r);

}  // namespace levyfn
