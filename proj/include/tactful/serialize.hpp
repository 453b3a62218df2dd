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

// JSON views of results shared by the CLI, the HTTP service and reports.
// Reals are rounded to 6 decimals so every surface prints the same bytes.

#pragma once

#include <cmath>
#include <string>

#include "json.hpp"
#include "tactful/channel.hpp"
#include "tactful/extract.hpp"
#include "tactful/lexicon.hpp"
#include "tactful/planner.hpp"
#include "tactful/realizer.hpp"

namespace tactful {

inline double Round6(double x) {
  double r = std::round(x * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

// Strategy ids in lexicon order.
inline nlohmann::json StrategiesJson(const StrategySet& set, const StrategyLexicon& lex) {
  nlohmann::json out = nlohmann::json::array();
  for (const StrategyId& s : lex.Ordered(set)) out.push_back(s);
  return out;
}

inline nlohmann::json ToJson(const ExtractionResult& ex, const Message& m, const StrategyLexicon& lex) {
  nlohmann::json occ = nlohmann::json::array();
  for (const Occurrence& o : ex.occurrences) {
    std::string text;
    for (std::size_t i = o.span.begin; i < o.span.end; ++i) {
      if (i > o.span.begin) text += ' ';
      text += m.tokens()[i].text;
    }
    occ.push_back({{"strategy", o.strategy},
                   {"tokens", {o.span.begin, o.span.end}},
                   {"text", text}});
  }
  return {{"strategies", StrategiesJson(ex.strategies, lex)}, {"occurrences", occ}};
}

inline nlohmann::json ToJson(const Plan& plan, const StrategyLexicon& lex, bool with_stats = false) {
  nlohmann::json j = {{"method", plan.method},
                      {"s_out", StrategiesJson(plan.s_out, lex)},
                      {"added", StrategiesJson(plan.added, lex)},
                      {"removed", StrategiesJson(plan.removed, lex)},
                      {"target", Round6(plan.target)},
                      {"achieved", Round6(plan.achieved)},
                      {"gap", Round6(plan.gap)}};
  if (plan.retrieved) j["retrieved_index"] = *plan.retrieved;
  if (with_stats) j["stats"] = {{"nodes", plan.stats.nodes}, {"seconds", plan.stats.seconds}};
  return j;
}

inline nlohmann::json ToJson(const RealizationCandidate& c, const StrategyLexicon& lex, bool with_trace = true) {
  nlohmann::json j = {{"text", c.text},
                      {"realized", StrategiesJson(c.realized, lex)},
                      {"predicted", Round6(c.predicted)},
                      {"gap", Round6(c.gap)},
                      {"shortfall", c.shortfall},
                      {"missing", StrategiesJson(c.missing, lex)},
                      {"unplanned", StrategiesJson(c.unplanned, lex)},
                      {"diagnostics", c.diagnostics}};
  if (with_trace) {
    nlohmann::json trace = nlohmann::json::array();
    for (const InsertionStep& s : c.trace) {
      trace.push_back({{"strategy", s.strategy},
                       {"template", s.template_text},
                       {"anchor", std::string(ToString(s.anchor))},
                       {"position", s.position}});
    }
    j["trace"] = trace;
  }
  return j;
}

inline nlohmann::json ToJson(const ChannelProfile& p, const StrategyLexicon& lex) {
  nlohmann::json support = nlohmann::json::object();
  for (const Strategy& s : lex.strategies()) {
    auto it = p.support.find(s.id);
    if (it == p.support.end()) continue;
    support[s.id] = {{"supporting", it->second.supporting},
                     {"lost", it->second.lost},
                     {"loss_rate", Round6(it->second.loss_rate)},
                     {"safe", p.spec.safety.at(s.id)}};
  }
  return {{"channel", ToJson(p.spec)},
          {"at_risk", StrategiesJson(p.spec.AtRisk(), lex)},
          {"support", support},
          {"unsupported", p.unsupported}};
}

}  // namespace tactful
