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

#include "levyfn/error.hpp"

namespace levyfn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidJumpIndex: return "InvalidJumpIndex";
    case ErrorCode::NegativeGaussian: return "NegativeGaussian";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::Subordinator: return "Subordinator";
    case ErrorCode::NumericalOverflow: return "NumericalOverflow";
    case ErrorCode::BracketNotFound: return "BracketNotFound";
    case ErrorCode::NonPositiveStart: return "NonPositiveStart";
    case ErrorCode::InversionUnstable: return "InversionUnstable";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::SignChange: return "SignChange";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::AllCensored: return "AllCensored";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace levyfn
