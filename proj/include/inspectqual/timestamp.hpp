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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace inspectqual {

/// An RFC 3339 instant normalised to UTC. Ordering ignores the original
/// offset spelling, so "2026-01-01T01:00:00+01:00" == "2026-01-01T00:00:00Z".
struct Instant {
  std::int64_t epoch_seconds = 0;
  std::int32_t nanos = 0;

  friend auto operator<=>(const Instant&, const Instant&) = default;
};

std::optional<Instant> parse_rfc3339(std::string_view text);

/// Same as parse_rfc3339 but raises DomainError naming `what` on failure.
Instant require_rfc3339(std::string_view text, std::string_view what);

/// "YYYY-MM-DDTHH:MM:SSZ" (whole seconds).
std::string format_rfc3339(std::int64_t epoch_seconds);

/// Current wall-clock time, whole seconds, UTC.
std::string now_rfc3339();

}  // namespace inspectqual
