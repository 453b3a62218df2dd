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

// Token-level text edits: marker deletion (token / segment mode) and
// template splicing, with whitespace, punctuation and capitalization repair.

#pragma once

#include <cctype>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "tactful/extract.hpp"
#include "tactful/lexicon.hpp"
#include "tactful/message.hpp"

namespace tactful {

struct RemovedSpan {
  StrategyId strategy;
  std::string text;
  DeleteMode mode = DeleteMode::kToken;
};

struct PostDeletionContext {
  Message message;
  std::vector<RemovedSpan> removed;
  StrategySet removed_strategies;
};

namespace edit_detail {

inline bool StartsUpper(const std::string& s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])) != 0;
}

inline bool StartsLower(const std::string& s) {
  return !s.empty() && std::islower(static_cast<unsigned char>(s[0])) != 0;
}

inline void Capitalize(std::string& s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
}

// "I", "I'm" and all-caps words keep their case when displaced.
inline bool KeepsCase(const std::string& s) {
  if (s == "I" || s.rfind("I'", 0) == 0) return true;
  if (s.size() > 1 && std::isupper(static_cast<unsigned char>(s[1]))) return true;
  return false;
}

inline void Decapitalize(std::string& s) {
  if (!s.empty() && !KeepsCase(s)) {
    s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  }
}

struct Piece {
  std::string gap;
  std::string text;
  bool word = false;
};

inline std::string Render(const std::vector<Piece>& pieces, const std::string& trailing) {
  std::string out;
  for (const Piece& p : pieces) {
    out += p.gap;
    out += p.text;
  }
  out += trailing;
  return out;
}

// Removes the masked tokens of `m` and repairs the seams.
inline std::string ApplyDeletion(const Message& m, std::vector<bool> drop) {
  const auto& toks = m.tokens();
  const std::size_t n = toks.size();
  std::vector<bool> seam(n, false);  // survivor adjacent to a removed run
  auto mark_seams = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      if (!drop[i]) continue;
      std::size_t j = i;
      while (j > 0 && drop[j - 1]) --j;
      if (j > 0) seam[j - 1] = true;
      std::size_t k = i;
      while (k < n && drop[k]) ++k;
      if (k < n) seam[k] = true;
    }
  };
  mark_seams();

  // Dangling delimiters at a seam: sentence-initial, doubled, or before a
  // terminator / end of message.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (drop[i] || !seam[i] || !IsSegmentDelimiter(toks[i].text)) continue;
      std::size_t prev = i;
      bool has_prev = false;
      while (prev > 0) {
        --prev;
        if (!drop[prev]) {
          has_prev = true;
          break;
        }
      }
      std::size_t next = i + 1;
      while (next < n && drop[next]) ++next;
      bool initial = !has_prev || IsSentenceTerminator(toks[prev].text);
      bool before_end = next == n || IsSentenceTerminator(toks[next].text) ||
                        IsSegmentDelimiter(toks[next].text);
      if (initial || before_end) {
        drop[i] = true;
        changed = true;
        mark_seams();
      }
    }
  }

  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < n;) {
    if (!drop[i]) {
      pieces.push_back({std::string(m.GapBefore(i)), toks[i].text, toks[i].word});
      ++i;
      continue;
    }
    std::size_t run_begin = i;
    while (i < n && drop[i]) ++i;
    if (i == n) break;
    Piece next{std::string(m.GapBefore(i)), toks[i].text, toks[i].word};
    if (next.word) next.gap = std::string(m.GapBefore(run_begin));
    if (pieces.empty() && !next.word) next.gap = std::string(m.GapBefore(run_begin));
    // The run swallowed a sentence start: carry its capitalization over.
    bool took_initial = false;
    for (std::size_t k = run_begin; k < i; ++k) {
      if (m.IsSentenceInitial(k) && StartsUpper(toks[k].text) &&
          m.sentence_of(k) == m.sentence_of(i)) {
        took_initial = true;
      }
    }
    if (took_initial && next.word && StartsLower(next.text)) Capitalize(next.text);
    pieces.push_back(std::move(next));
    ++i;
  }
  return Render(pieces, std::string(m.GapBefore(n)));
}

// One pass: occurrences of strategies outside `keep` are masked.
inline std::string DeletePass(const Message& m, const ExtractionResult& ex,
                              const StrategySet& keep, const StrategyLexicon& lex,
                              std::vector<RemovedSpan>& removed) {
  std::set<std::size_t> protected_segments;
  for (const Occurrence& o : ex.occurrences) {
    if (keep.count(o.strategy)) {
      for (std::size_t i = o.span.begin; i < o.span.end; ++i) {
        protected_segments.insert(m.segment_of(i));
      }
    }
  }
  std::vector<bool> drop(m.size(), false);
  for (const Occurrence& o : ex.occurrences) {
    if (keep.count(o.strategy)) continue;
    const Strategy& s = lex.at(o.strategy);
    std::size_t seg_index = m.segment_of(o.span.begin);
    bool segment_mode = s.delete_mode == DeleteMode::kSegment &&
                        m.segment_of(o.span.end - 1) == seg_index &&
                        !protected_segments.count(seg_index);
    std::string text;
    if (segment_mode) {
      TokenSpan seg = m.segments()[seg_index];
      TokenSpan sentence = m.sentences()[m.sentence_of(seg.begin)];
      std::size_t last = seg.end - 1;
      bool ends_sentence = IsSentenceTerminator(m.tokens()[last].text);
      std::size_t end = seg.end;
      if (ends_sentence && seg.begin != sentence.begin) {
        // Keep the terminator; drop the delimiter that opened this segment.
        end = last;
        if (seg.begin > 0 && IsSegmentDelimiter(m.tokens()[seg.begin - 1].text) &&
            !protected_segments.count(m.segment_of(seg.begin - 1))) {
          drop[seg.begin - 1] = true;
        }
      }
      for (std::size_t i = seg.begin; i < end; ++i) {
        drop[i] = true;
        if (!text.empty()) text += ' ';
        text += m.tokens()[i].text;
      }
    } else {
      for (std::size_t i = o.span.begin; i < o.span.end; ++i) {
        drop[i] = true;
        if (!text.empty()) text += ' ';
        text += m.tokens()[i].text;
      }
    }
    removed.push_back({o.strategy, text, segment_mode ? DeleteMode::kSegment : DeleteMode::kToken});
  }
  return ApplyDeletion(m, std::move(drop));
}

}  // namespace edit_detail

// Removes every marker of every strategy not in `keep`. Repeats until the
// result extracts to a subset of `keep`, since a deletion can bring two
// tokens together into a new marker.
inline PostDeletionContext DeleteMarkers(const Message& m, const ExtractionResult& ex,
                                         const StrategySet& keep, const StrategyLexicon& lex) {
  PostDeletionContext ctx;
  ctx.message = m;
  ExtractionResult current = ex;
  for (std::size_t round = 0; round <= m.size(); ++round) {
    bool dirty = false;
    for (const StrategyId& s : current.strategies) {
      if (!keep.count(s)) {
        dirty = true;
        ctx.removed_strategies.insert(s);
      }
    }
    if (!dirty) break;
    std::string text = edit_detail::DeletePass(ctx.message, current, keep, lex, ctx.removed);
    ctx.message = Message(std::move(text));
    current = ExtractStrategies(ctx.message, lex);
  }
  return ctx;
}

inline PostDeletionContext DeleteMarkers(const Message& m, const StrategySet& keep,
                                         const StrategyLexicon& lex) {
  return DeleteMarkers(m, ExtractStrategies(m, lex), keep, lex);
}

// Splices `text` (space-separated tokens) in front of token `at` of `m`
// (at == m.size() appends). Sentence-initial capitalization moves to the
// inserted text.
inline std::string SpliceBefore(const Message& m, std::size_t at, const std::string& text) {
  using edit_detail::Piece;
  if (m.empty()) return text;
  Message inserted(text);
  std::vector<Piece> pieces;
  const auto& toks = m.tokens();
  for (std::size_t i = 0; i < at; ++i) {
    pieces.push_back({std::string(m.GapBefore(i)), toks[i].text, toks[i].word});
  }
  bool first_inserted_word = !inserted.empty() && inserted.tokens()[0].word;
  std::string lead_gap;
  if (at == 0) {
    lead_gap = std::string(m.GapBefore(0));
  } else if (first_inserted_word) {
    lead_gap = " ";
  }
  std::vector<Piece> middle;
  for (std::size_t k = 0; k < inserted.size(); ++k) {
    const Token& t = inserted.tokens()[k];
    middle.push_back({k == 0 ? lead_gap : std::string(inserted.GapBefore(k)), t.text, t.word});
  }
  bool shift_case = at < toks.size() && m.IsSentenceInitial(at) && toks[at].word &&
                    edit_detail::StartsUpper(toks[at].text) && first_inserted_word;
  if (shift_case) edit_detail::Capitalize(middle.front().text);
  pieces.insert(pieces.end(), middle.begin(), middle.end());
  for (std::size_t i = at; i < toks.size(); ++i) {
    Piece p{std::string(m.GapBefore(i)), toks[i].text, toks[i].word};
    if (i == at) {
      p.gap = p.word ? " " : "";
      if (shift_case) edit_detail::Decapitalize(p.text);
    }
    pieces.push_back(std::move(p));
  }
  std::string trailing(m.GapBefore(toks.size()));
  return edit_detail::Render(pieces, trailing);
}

}  // namespace tactful
