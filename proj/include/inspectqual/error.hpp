// Copyright 2026 The InspectQual Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace inspectqual {

/// Raised when an operation's preconditions are violated (bad parameter,
/// malformed input document, inconsistent counts).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a sampling plan would need more samples than the hard cap.
class PlanInfeasible : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace inspectqual
