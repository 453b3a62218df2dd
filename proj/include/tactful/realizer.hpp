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

// Turning a plan into text: delete the markers of strategies the plan drops,
// then insert the strategies it adds one at a time, keeping a small beam of
// partial rewrites.

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tactful/channel.hpp"
#include "tactful/edit.hpp"
#include "tactful/error.hpp"
#include "tactful/extract.hpp"
#include "tactful/lexicon.hpp"
#include "tactful/message.hpp"
#include "tactful/perception.hpp"
#include "tactful/planner.hpp"

namespace tactful {

struct InsertionStep {
  StrategyId strategy;
  std::string template_text;
  TemplateAnchor anchor = TemplateAnchor::kMessageStart;
  std::size_t position = 0;  // token index the template was spliced before
};

struct GeneratedText {
  std::string text;
  InsertionStep step;
};

// (context, strategy) -> candidate rewrites that use the strategy.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::vector<GeneratedText> Insert(const Message& context, const StrategyId& strategy,
                                            std::size_t beam) const = 0;
};

namespace realizer_detail {

inline bool IsSubjectPronoun(const std::string& w) {
  static const std::set<std::string> kPronouns = {"i",  "you",     "we",     "they", "he",
                                                  "she", "someone", "anyone", "somebody"};
  return kPronouns.count(w) > 0;
}

// First token of the sentence after any leading marker and its comma, so
// "btw , fix it" offers the slot before "fix".
inline std::size_t ClauseStart(const Message& m, const TokenSpan& sentence, const ExtractionResult& ex) {
  std::size_t pos = sentence.begin;
  for (bool moved = true; moved && pos < sentence.end;) {
    moved = false;
    for (const Occurrence& o : ex.occurrences) {
      if (o.span.begin == pos && o.span.end <= sentence.end) {
        pos = o.span.end;
        moved = true;
        break;
      }
    }
    if (pos < sentence.end && IsSegmentDelimiter(m.tokens()[pos].text)) {
      ++pos;
      moved = true;
    }
  }
  return pos < sentence.end ? pos : sentence.begin;
}

// Token indices where a template with this anchor may be spliced, in
// preference order.
inline std::vector<std::size_t> AnchorPositions(const Message& m, TemplateAnchor anchor,
                                                const ExtractionResult& ex) {
  std::vector<std::size_t> out;
  auto push = [&out](std::size_t p) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  };
  const auto& toks = m.tokens();
  switch (anchor) {
    case TemplateAnchor::kMessageStart:
      push(0);
      break;
    case TemplateAnchor::kMessageEnd:
      push(m.size());
      break;
    case TemplateAnchor::kSentenceStart:
      for (const TokenSpan& s : m.sentences()) {
        push(ClauseStart(m, s, ex));
        push(s.begin);
      }
      break;
    case TemplateAnchor::kSentenceEnd:
      for (const TokenSpan& s : m.sentences()) {
        std::size_t end = s.end;
        while (end > s.begin && !toks[end - 1].word) --end;
        if (end > s.begin) push(end);
      }
      break;
    case TemplateAnchor::kBeforeMainVerbPhrase:
      for (const TokenSpan& s : m.sentences()) {
        for (std::size_t i = s.begin; i + 1 < s.end; ++i) {
          if (!IsSubjectPronoun(toks[i].lower) || !toks[i + 1].word) continue;
          if (toks[i].lower == "you" && i > s.begin && toks[i - 1].lower == "thank") continue;
          push(i + 1);
          break;
        }
      }
      break;
  }
  return out;
}

}  // namespace realizer_detail

// Splices the strategy's lexicon templates at their anchors. A candidate is
// kept only if its extraction still contains everything the context had plus
// the new strategy.
class TemplateGenerator : public Generator {
 public:
  explicit TemplateGenerator(const StrategyLexicon& lex) : lex_(&lex) {}

  std::vector<GeneratedText> Insert(const Message& context, const StrategyId& strategy,
                                    std::size_t beam) const override {
    const Strategy& s = lex_->at(strategy);
    ExtractionResult ex = ExtractStrategies(context, *lex_);
    StrategySet want = ex.strategies;
    want.insert(strategy);
    std::vector<std::vector<std::size_t>> positions;
    for (const InsertionTemplate& t : s.templates) {
      positions.push_back(context.empty() ? std::vector<std::size_t>{0}
                                          : realizer_detail::AnchorPositions(context, t.anchor, ex));
    }
    // Round robin: every template's first slot, then every second slot, ...
    std::vector<GeneratedText> out;
    std::set<std::string> seen;
    std::size_t longest = 0;
    for (const auto& p : positions) longest = std::max(longest, p.size());
    for (std::size_t k = 0; k < longest && out.size() < beam; ++k) {
      for (std::size_t t = 0; t < s.templates.size() && out.size() < beam; ++t) {
        if (k >= positions[t].size()) continue;
        std::string text = SpliceBefore(context, positions[t][k], s.templates[t].text);
        if (!seen.insert(text).second) continue;
        StrategySet got = ExtractStrategies(text, *lex_).strategies;
        if (!std::includes(got.begin(), got.end(), want.begin(), want.end())) continue;
        out.push_back({text, {strategy, s.templates[t].text, s.templates[t].anchor, positions[t][k]}});
      }
    }
    return out;
  }

 private:
  const StrategyLexicon* lex_;
};

// Up to `beam` rewrites of `context` that use `strategy`.
inline std::vector<GeneratedText> InsertStrategy(const Message& context, const StrategyId& strategy,
                                                 const StrategyLexicon& lex, std::size_t beam = 3,
                                                 const Generator* generator = nullptr) {
  if (ExtractStrategies(context, lex).strategies.count(strategy)) {
    throw Error(ErrorCode::kValidation, "context already uses '" + strategy + "'");
  }
  TemplateGenerator fallback(lex);
  const Generator& gen = generator ? *generator : fallback;
  std::vector<GeneratedText> out = gen.Insert(context, strategy, beam);
  if (out.empty()) {
    throw Error(ErrorCode::kNoApplicableTemplate, "no template for '" + strategy + "' fits this message");
  }
  return out;
}

struct RealizationCandidate {
  std::string text;
  StrategySet realized;   // extract(text)
  double predicted = 0.0;  // receiver perception after the channel
  double gap = 0.0;
  std::vector<InsertionStep> trace;
  bool shortfall = false;
  StrategySet missing;     // planned but not realized
  StrategySet unplanned;   // realized but not planned
  std::vector<std::string> diagnostics;
};

struct RealizeOptions {
  std::size_t beam = 3;
  const Generator* generator = nullptr;  // default: lexicon templates
};

// What the receiver perceives of `text` once it has crossed the channel.
inline double PredictedPerception(const std::string& text, const Circumstance& circ,
                                  const StrategyLexicon& lex) {
  Message received = SimulateChannel(Message(text), circ.channel, lex);
  return Perceive(circ.receiver, ExtractStrategies(received, lex).strategies);
}

namespace realizer_detail {

struct Partial {
  std::string text;
  std::vector<InsertionStep> trace;
  StrategySet realized;
  std::size_t distance = 0;  // symmetric difference to the plan so far
  double gap = 0.0;
};

inline std::size_t SymmetricDifference(const StrategySet& a, const StrategySet& b) {
  std::size_t n = 0;
  for (const auto& s : a) n += !b.count(s);
  for (const auto& s : b) n += !a.count(s);
  return n;
}

inline Partial Score(std::string text, std::vector<InsertionStep> trace, const StrategySet& goal,
                     double target, const Circumstance& circ, const StrategyLexicon& lex) {
  Partial p;
  p.realized = ExtractStrategies(text, lex).strategies;
  p.distance = SymmetricDifference(p.realized, goal);
  p.gap = std::abs(target - PredictedPerception(text, circ, lex));
  p.text = std::move(text);
  p.trace = std::move(trace);
  return p;
}

inline bool Ahead(const Partial& a, const Partial& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  if (a.gap != b.gap) return a.gap < b.gap;
  return false;
}

}  // namespace realizer_detail

// Deletes to plan.s_out ∩ S_in, then inserts the rest of plan.s_out in
// descending |receiver coefficient|. Partial rewrites are ranked first by how
// far their strategy set is from the plan so far, then by the gap the
// receiver would perceive after the channel. Returns every surviving beam
// state, best first.
inline std::vector<RealizationCandidate> RealizeAll(const Message& m, const Plan& plan, const Circumstance& circ,
                                                    const StrategyLexicon& lex, const RealizeOptions& opts = {}) {
  using realizer_detail::Partial;
  const std::size_t beam = std::max<std::size_t>(1, opts.beam);
  TemplateGenerator templates(lex);
  const Generator& gen = opts.generator ? *opts.generator : templates;

  ExtractionResult ex = ExtractStrategies(m, lex);
  StrategySet keep;
  for (const StrategyId& s : plan.s_out) {
    if (ex.strategies.count(s)) keep.insert(s);
  }
  PostDeletionContext ctx = DeleteMarkers(m, ex, keep, lex);
  StrategySet present = ExtractStrategies(ctx.message, lex).strategies;
  std::vector<StrategyId> to_insert;
  for (const StrategyId& s : lex.Ordered(plan.s_out)) {
    if (!present.count(s)) to_insert.push_back(s);
  }
  std::stable_sort(to_insert.begin(), to_insert.end(), [&](const StrategyId& a, const StrategyId& b) {
    return std::abs(circ.receiver.coefficient(a)) > std::abs(circ.receiver.coefficient(b));
  });

  std::vector<std::string> diagnostics;
  StrategySet goal = keep;
  std::vector<Partial> states = {
      realizer_detail::Score(ctx.message.raw(), {}, goal, plan.target, circ, lex)};
  for (const StrategyId& s : to_insert) {
    goal.insert(s);
    std::vector<Partial> next;
    std::set<std::string> seen;
    bool inserted_any = false;
    for (const Partial& st : states) {
      std::vector<std::pair<std::string, std::vector<InsertionStep>>> options;
      if (st.realized.count(s)) {
        options.push_back({st.text, st.trace});
      } else {
        for (GeneratedText& g : gen.Insert(Message(st.text), s, beam)) {
          std::vector<InsertionStep> trace = st.trace;
          trace.push_back(g.step);
          options.push_back({std::move(g.text), std::move(trace)});
          inserted_any = true;
        }
        if (options.empty()) options.push_back({st.text, st.trace});
      }
      for (auto& [text, trace] : options) {
        if (!seen.insert(text).second) continue;
        next.push_back(realizer_detail::Score(std::move(text), std::move(trace), goal, plan.target, circ, lex));
      }
    }
    if (!inserted_any) diagnostics.push_back("no template for '" + s + "' fits the message");
    std::stable_sort(next.begin(), next.end(), realizer_detail::Ahead);
    if (next.size() > beam) next.resize(beam);
    states = std::move(next);
  }

  std::vector<RealizationCandidate> all;
  for (const Partial& best : states) {
    RealizationCandidate out;
    out.text = best.text;
    out.realized = best.realized;
    out.predicted = PredictedPerception(out.text, circ, lex);
    out.gap = std::abs(plan.target - out.predicted);
    out.trace = best.trace;
    for (const StrategyId& s : plan.s_out) {
      if (!out.realized.count(s)) out.missing.insert(s);
    }
    for (const StrategyId& s : out.realized) {
      if (!plan.s_out.count(s)) out.unplanned.insert(s);
    }
    out.shortfall = !out.missing.empty() || !out.unplanned.empty();
    for (const StrategyId& s : out.missing) out.diagnostics.push_back("planned strategy '" + s + "' not realized");
    for (const StrategyId& s : out.unplanned) {
      out.diagnostics.push_back("strategy '" + s + "' realized but not planned");
    }
    out.diagnostics.insert(out.diagnostics.end(), diagnostics.begin(), diagnostics.end());
    all.push_back(std::move(out));
  }
  return all;
}

inline RealizationCandidate Realize(const Message& m, const Plan& plan, const Circumstance& circ,
                                    const StrategyLexicon& lex, const RealizeOptions& opts = {}) {
  return RealizeAll(m, plan, circ, lex, opts).front();
}

}  // namespace tactful
