// Copyright 2026 The LVW Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Enumerations for the variation points shared across modules, with their
// canonical spellings.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "lvw/error.hpp"

namespace lvw {

// Transition and initial-state notation of a concrete text.
enum class Notation { Arrow, Keyword };

// Extended constructs eliminated by reduction.
enum class Abbreviation { Hierarchy, MultiTrigger };

// Which of several enabled transitions with the same trigger wins when their
// sources sit at different nesting depths.
enum class Priority { InnerFirst, OuterFirst };

// Behavior on an input for which the current model state has no enabled
// transition. Unset leaves the variation point open.
enum class Unmatched { Chaos, Stutter, Unset };

// How states are realized in an implementation. Open accepts any realization.
enum class Realization { Open, Enum, Pattern, Unset };

// Realization carried by a machine of the semantic domain.
enum class RealizationTag { Enum, Pattern, Other };

inline constexpr std::array kAllTags = {RealizationTag::Enum,
                                        RealizationTag::Pattern,
                                        RealizationTag::Other};

inline std::string_view to_string(Notation n) {
  return n == Notation::Arrow ? "arrow" : "keyword";
}

inline std::string_view to_string(Abbreviation a) {
  return a == Abbreviation::Hierarchy ? "Hierarchy" : "MultiTrigger";
}

inline std::string_view to_string(Priority p) {
  return p == Priority::InnerFirst ? "InnerFirst" : "OuterFirst";
}

inline std::string_view to_string(Unmatched u) {
  switch (u) {
    case Unmatched::Chaos:
      return "chaos";
    case Unmatched::Stutter:
      return "stutter";
    case Unmatched::Unset:
      break;
  }
  return "unset";
}

inline std::string_view to_string(Realization r) {
  switch (r) {
    case Realization::Open:
      return "open";
    case Realization::Enum:
      return "enum";
    case Realization::Pattern:
      return "pattern";
    case Realization::Unset:
      break;
  }
  return "unset";
}

inline std::string_view to_string(RealizationTag t) {
  switch (t) {
    case RealizationTag::Enum:
      return "enum";
    case RealizationTag::Pattern:
      return "pattern";
    case RealizationTag::Other:
      break;
  }
  return "other";
}

inline Unmatched parse_unmatched(std::string_view s) {
  if (s == "chaos") return Unmatched::Chaos;
  if (s == "stutter") return Unmatched::Stutter;
  if (s == "unset" || s.empty()) return Unmatched::Unset;
  throw Error("unknown unmatched-event variant '" + std::string(s) + "'");
}

inline Realization parse_realization(std::string_view s) {
  if (s == "open") return Realization::Open;
  if (s == "enum") return Realization::Enum;
  if (s == "pattern") return Realization::Pattern;
  if (s == "unset" || s.empty()) return Realization::Unset;
  throw Error("unknown realization variant '" + std::string(s) + "'");
}

inline RealizationTag parse_tag(std::string_view s) {
  if (s == "enum") return RealizationTag::Enum;
  if (s == "pattern") return RealizationTag::Pattern;
  if (s == "other") return RealizationTag::Other;
  throw Error("unknown realization tag '" + std::string(s) + "'");
}

inline Priority parse_priority(std::string_view s) {
  if (s == "inner" || s == "InnerFirst") return Priority::InnerFirst;
  if (s == "outer" || s == "OuterFirst") return Priority::OuterFirst;
  throw Error("unknown priority '" + std::string(s) + "'");
}

}  // namespace lvw
