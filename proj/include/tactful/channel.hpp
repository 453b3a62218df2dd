// Copyright 2026 The Tactful Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Channel safety: which strategies survive transmission.
//
// Channel spec file: {"version", "label", "safety": {id: 0|1}}.
// Pair file: one JSON object per line {"original", "round_trip"}.

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "tactful/edit.hpp"
#include "tactful/error.hpp"
#include "tactful/extract.hpp"
#include "tactful/lexicon.hpp"
#include "tactful/perception.hpp"

namespace tactful {

struct ChannelSpec {
  std::map<StrategyId, bool> safety;  // true = safe
  std::string label;

  bool IsSafe(const StrategyId& id) const {
    auto it = safety.find(id);
    if (it == safety.end()) {
      throw Error(ErrorCode::kUnknownStrategy, "channel has no entry for strategy '" + id + "'");
    }
    return it->second;
  }

  StrategySet AtRisk() const {
    StrategySet out;
    for (const auto& [id, safe] : safety) {
      if (!safe) out.insert(id);
    }
    return out;
  }

  StrategySet Safe() const {
    StrategySet out;
    for (const auto& [id, safe] : safety) {
      if (safe) out.insert(id);
    }
    return out;
  }

  bool covers(const StrategyLexicon& lex) const {
    for (const Strategy& s : lex.strategies()) {
      if (!safety.count(s.id)) return false;
    }
    return true;
  }
};

struct RoundTripPair {
  std::string original;
  std::string round_trip;
};

inline ChannelSpec AllSafeChannel(const StrategyLexicon& lex) {
  ChannelSpec spec;
  spec.label = "builtin:all-safe";
  for (const Strategy& s : lex.strategies()) spec.safety[s.id] = true;
  return spec;
}

inline ChannelSpec ChannelWithAtRisk(const StrategyLexicon& lex, const StrategySet& at_risk,
                                     std::string label) {
  ChannelSpec spec;
  spec.label = std::move(label);
  for (const StrategyId& id : at_risk) lex.at(id);
  for (const Strategy& s : lex.strategies()) spec.safety[s.id] = !at_risk.count(s.id);
  return spec;
}

// English -> Chinese machine translation, estimated by back-translation.
inline ChannelSpec ExperimentAChannel(const StrategyLexicon& lex) {
  return ChannelWithAtRisk(lex, {"Subjunctive", "Please", "Filler", "Swearing"},
                           "builtin:experiment-a");
}

struct StrategySupport {
  std::size_t supporting = 0;  // pairs whose original uses the strategy
  std::size_t lost = 0;        // ... and whose round trip no longer does
  double loss_rate = 0.0;
};

struct ChannelProfile {
  ChannelSpec spec;
  std::map<StrategyId, StrategySupport> support;
  std::vector<StrategyId> unsupported;  // zero supporting pairs, defaulted safe
};

// A strategy is at risk iff strictly more than `threshold` of the pairs whose
// original uses it lose it in the round trip.
inline ChannelProfile ProfileChannel(const std::vector<RoundTripPair>& pairs,
                                     const StrategyLexicon& lex, double threshold = 0.5,
                                     std::string label = "profiled") {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyInput, "channel profiling needs at least one pair");
  ChannelProfile profile;
  for (const Strategy& s : lex.strategies()) profile.support[s.id] = {};
  for (const RoundTripPair& p : pairs) {
    StrategySet before = ExtractStrategies(p.original, lex).strategies;
    StrategySet after = ExtractStrategies(p.round_trip, lex).strategies;
    for (const StrategyId& s : before) {
      StrategySupport& sup = profile.support[s];
      ++sup.supporting;
      if (!after.count(s)) ++sup.lost;
    }
  }
  profile.spec.label = std::move(label);
  for (const Strategy& s : lex.strategies()) {
    StrategySupport& sup = profile.support[s.id];
    if (sup.supporting == 0) {
      profile.unsupported.push_back(s.id);
      profile.spec.safety[s.id] = true;
      continue;
    }
    sup.loss_rate = static_cast<double>(sup.lost) / static_cast<double>(sup.supporting);
    profile.spec.safety[s.id] = !(sup.loss_rate > threshold);
  }
  return profile;
}

// What the receiver sees: every at-risk marker removed per its delete mode.
inline Message SimulateChannel(const Message& m, const ChannelSpec& spec,
                               const StrategyLexicon& lex) {
  ExtractionResult ex = ExtractStrategies(m, lex);
  bool touched = false;
  for (const StrategyId& s : ex.strategies) touched = touched || !spec.IsSafe(s);
  if (!touched) return m;
  return DeleteMarkers(m, ex, spec.Safe(), lex).message;
}

// ---- files -----------------------------------------------------------------

inline constexpr const char* kChannelFileVersion = "tactful-channel/1";

inline nlohmann::json ToJson(const ChannelSpec& spec) {
  nlohmann::json safety = nlohmann::json::object();
  for (const auto& [id, safe] : spec.safety) safety[id] = safe ? 1 : 0;
  return {{"version", kChannelFileVersion}, {"label", spec.label}, {"safety", safety}};
}

inline ChannelSpec ChannelFromJson(const nlohmann::json& doc) {
  lexicon_detail::RejectUnknownKeys(doc, {"version", "label", "safety"}, "channel");
  ChannelSpec spec;
  spec.label = doc.value("label", std::string());
  auto it = doc.find("safety");
  if (it == doc.end() || !it->is_object()) {
    throw Error(ErrorCode::kValidation, "channel: missing object field 'safety'");
  }
  for (const auto& [id, bit] : it->items()) {
    if (bit.is_boolean()) {
      spec.safety[id] = bit.get<bool>();
    } else if (bit.is_number_integer() && (bit.get<int>() == 0 || bit.get<int>() == 1)) {
      spec.safety[id] = bit.get<int>() == 1;
    } else {
      throw Error(ErrorCode::kValidation, "channel: safety of '" + id + "' must be 0 or 1");
    }
  }
  return spec;
}

inline void ValidateChannel(const ChannelSpec& spec, const StrategyLexicon& lex) {
  for (const auto& [id, safe] : spec.safety) {
    if (!lex.contains(id)) {
      throw Error(ErrorCode::kUnknownStrategy, "channel entry for unknown strategy '" + id + "'");
    }
  }
  for (const Strategy& s : lex.strategies()) {
    if (!spec.safety.count(s.id)) {
      throw Error(ErrorCode::kValidation, "channel has no entry for strategy '" + s.id + "'");
    }
  }
}

inline ChannelSpec LoadChannel(const std::string& path) {
  return ChannelFromJson(ParseJson(ReadFile(path), "channel file '" + path + "'"));
}

inline void SaveChannel(const ChannelSpec& spec, const std::string& path) {
  WriteFile(path, ToJson(spec).dump(2) + "\n");
}

inline std::vector<RoundTripPair> ParsePairs(const std::string& text) {
  std::vector<RoundTripPair> out;
  for (const auto& rec : ParseJsonLines(text, "pair file")) {
    lexicon_detail::RejectUnknownKeys(rec, {"id", "original", "round_trip"}, "pair");
    RoundTripPair p;
    p.original = lexicon_detail::RequireString(rec, "original", "pair");
    p.round_trip = lexicon_detail::RequireString(rec, "round_trip", "pair");
    if (p.original.empty() || p.round_trip.empty()) {
      throw Error(ErrorCode::kValidation, "pair " + std::to_string(out.size() + 1) +
                                              ": original and round_trip must be non-empty");
    }
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<RoundTripPair> LoadPairs(const std::string& path) {
  return ParsePairs(ReadFile(path));
}

inline std::string SerializePairs(const std::vector<RoundTripPair>& pairs) {
  std::string out;
  for (const RoundTripPair& p : pairs) {
    out += nlohmann::json{{"original", p.original}, {"round_trip", p.round_trip}}.dump();
    out += '\n';
  }
  return out;
}

}  // namespace tactful
