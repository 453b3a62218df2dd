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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tactful/lexicon.hpp"
#include "tactful/message.hpp"

namespace tactful {

struct Occurrence {
  StrategyId strategy;
  TokenSpan span;

  bool operator==(const Occurrence&) const = default;
};

struct ExtractionResult {
  StrategySet strategies;
  std::vector<Occurrence> occurrences;  // left to right, non-overlapping
};

namespace extract_detail {

struct Pattern {
  std::size_t strategy;  // declaration index, doubles as tie-break rank
  std::vector<std::string> tokens;
  MarkerAnchor anchor;
};

inline std::vector<Pattern> CompilePatterns(const StrategyLexicon& lex) {
  std::vector<Pattern> out;
  for (std::size_t i = 0; i < lex.size(); ++i) {
    for (const Marker& m : lex[i].markers) {
      for (auto& seq : m.Expansions()) out.push_back({i, std::move(seq), m.anchor});
    }
  }
  return out;
}

inline bool MatchesAt(const Message& m, std::size_t pos, const Pattern& p) {
  if (pos + p.tokens.size() > m.size()) return false;
  if (p.anchor == MarkerAnchor::kSentenceStart && !m.IsSentenceInitial(pos)) return false;
  if (p.anchor == MarkerAnchor::kNonInitial && m.IsSentenceInitial(pos)) return false;
  for (std::size_t k = 0; k < p.tokens.size(); ++k) {
    if (m.tokens()[pos + k].lower != p.tokens[k]) return false;
  }
  return true;
}

}  // namespace extract_detail

// Left-to-right scan; at each position the longest matching marker wins,
// equal lengths go to the strategy declared first. Matched tokens are consumed.
inline ExtractionResult ExtractStrategies(const Message& m, const StrategyLexicon& lex) {
  using namespace extract_detail;
  const std::vector<Pattern> patterns = CompilePatterns(lex);
  ExtractionResult result;
  std::size_t pos = 0;
  while (pos < m.size()) {
    const Pattern* best = nullptr;
    for (const Pattern& p : patterns) {
      if (!MatchesAt(m, pos, p)) continue;
      if (best == nullptr || p.tokens.size() > best->tokens.size() ||
          (p.tokens.size() == best->tokens.size() && p.strategy < best->strategy)) {
        best = &p;
      }
    }
    if (best == nullptr) {
      ++pos;
      continue;
    }
    const StrategyId& id = lex[best->strategy].id;
    result.occurrences.push_back({id, {pos, pos + best->tokens.size()}});
    result.strategies.insert(id);
    pos += best->tokens.size();
  }
  return result;
}

inline ExtractionResult ExtractStrategies(const std::string& text, const StrategyLexicon& lex) {
  return ExtractStrategies(Message(text), lex);
}

// Token indices covered by some marker occurrence.
inline std::vector<bool> MarkerMask(const Message& m, const ExtractionResult& ex) {
  std::vector<bool> mask(m.size(), false);
  for (const Occurrence& o : ex.occurrences) {
    for (std::size_t i = o.span.begin; i < o.span.end; ++i) mask[i] = true;
  }
  return mask;
}

// Lowercased word tokens that are not part of any marker.
inline std::vector<std::string> NonMarkerWords(const Message& m, const StrategyLexicon& lex) {
  ExtractionResult ex = ExtractStrategies(m, lex);
  std::vector<bool> mask = MarkerMask(m, ex);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!mask[i] && m.tokens()[i].word) out.push_back(m.tokens()[i].lower);
  }
  return out;
}

}  // namespace tactful
