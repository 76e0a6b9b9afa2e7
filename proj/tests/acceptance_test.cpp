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

#include <cstdio>

#include "levyfn/verification.hpp"

int main() {
  levyfn::VerifyOptions opts;
  opts.on_result = [](const levyfn::CriterionResult& r) {
    std::printf("%s\n", levyfn::format_result(r).c_str());
    std::fflush(stdout);
  };
  const auto results = levyfn::run_acceptance(opts);
  int failed = 0;
  for (const auto& r : results) failed += !r.passed;
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
