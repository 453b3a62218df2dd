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

// End-to-end paraphrasing: analyse, plan with a chosen method, realize.

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "json.hpp"
#include "tactful/channel.hpp"
#include "tactful/error.hpp"
#include "tactful/extract.hpp"
#include "tactful/lexicon.hpp"
#include "tactful/planner.hpp"
#include "tactful/realizer.hpp"
#include "tactful/serialize.hpp"

namespace tactful {

inline const std::vector<std::string>& PlanMethods() {
  static const std::vector<std::string> kMethods = {"ilp", "greedy", "oracle", "retrieval"};
  return kMethods;
}

// `index` is only consulted for "retrieval".
inline Plan PlanWithMethod(const std::string& method, const PlanProblem& p, const Circumstance& circ,
                           const Message& m, const StrategyLexicon& lex, const RetrievalIndex* index = nullptr) {
  if (method == "ilp") return PlanIlp(p, circ, lex);
  if (method == "greedy") return PlanGreedy(p, circ, lex);
  if (method == "oracle") return PlanOracle(p, circ, lex);
  if (method == "retrieval") {
    if (index == nullptr) throw Error(ErrorCode::kConfig, "retrieval needs a retrieval corpus");
    return PlanRetrieval(p, circ, m, *index, lex);
  }
  throw Error(ErrorCode::kValidation, "unknown method '" + method + "' (ilp, greedy, oracle, retrieval)");
}

// {"max_added": 3 | null, "subj_ind": bool, "negativity": bool | "auto",
//  "forbidden": [...], "required": [...], "target": real}
inline BuildOptions BuildOptionsFromJson(const nlohmann::json& j) {
  BuildOptions o;
  if (j.is_null()) return o;
  lexicon_detail::RejectUnknownKeys(j, {"max_added", "subj_ind", "negativity", "forbidden", "required", "target"},
                                    "plan options");
  try {
    if (j.contains("max_added")) {
      if (j["max_added"].is_null()) {
        o.max_added_on = false;
      } else {
        o.max_added = j["max_added"].get<int>();
        if (o.max_added < 0) throw Error(ErrorCode::kValidation, "max_added must be non-negative");
      }
    }
    if (j.contains("subj_ind")) o.subj_ind = j["subj_ind"].get<bool>();
    if (j.contains("negativity")) {
      const auto& n = j["negativity"];
      if (n.is_boolean()) {
        o.negativity = n.get<bool>();
      } else if (!(n.is_string() && n.get<std::string>() == "auto")) {
        throw Error(ErrorCode::kValidation, "negativity must be true, false or \"auto\"");
      }
    }
    if (j.contains("forbidden")) {
      for (const auto& s : j["forbidden"]) o.forbidden.insert(s.get<std::string>());
    }
    if (j.contains("required")) {
      for (const auto& s : j["required"]) o.required.insert(s.get<std::string>());
    }
    if (j.contains("target") && !j["target"].is_null()) o.target = j["target"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("plan options: ") + e.what());
  }
  return o;
}

struct ParaphraseOptions {
  std::string method = "ilp";
  BuildOptions build;
  std::size_t beam = 3;
  std::size_t alternatives = 1;
};

struct ParaphraseResult {
  StrategySet s_in;
  double intended = 0.0;
  std::string no_intervention_view;  // the original after the channel
  double no_intervention_gap = 0.0;
  Plan plan;
  std::vector<RealizationCandidate> alternatives;  // ascending gap
};

inline ParaphraseResult Paraphrase(const std::string& text, const Circumstance& circ, const StrategyLexicon& lex,
                                   const ParaphraseOptions& opts = {}, const RetrievalIndex* index = nullptr) {
  if (opts.alternatives == 0) throw Error(ErrorCode::kValidation, "at least one alternative must be requested");
  Message m(text);
  PlanProblem p = BuildProblem(m, circ, lex, opts.build);
  ParaphraseResult r;
  r.s_in = p.s_in;
  r.intended = p.target;
  r.no_intervention_view = SimulateChannel(m, circ.channel, lex).raw();
  r.no_intervention_gap = std::abs(p.target - PredictedPerception(text, circ, lex));
  r.plan = PlanWithMethod(opts.method, p, circ, m, lex, index);
  RealizeOptions ro;
  ro.beam = std::max(opts.beam, opts.alternatives);
  r.alternatives = RealizeAll(m, r.plan, circ, lex, ro);
  std::stable_sort(r.alternatives.begin(), r.alternatives.end(),
                   [](const RealizationCandidate& a, const RealizationCandidate& b) { return a.gap < b.gap; });
  if (r.alternatives.size() > opts.alternatives) r.alternatives.resize(opts.alternatives);
  return r;
}

inline nlohmann::json ToJson(const ParaphraseResult& r, const StrategyLexicon& lex) {
  nlohmann::json alts = nlohmann::json::array();
  for (const RealizationCandidate& c : r.alternatives) alts.push_back(ToJson(c, lex));
  return {{"original", {{"s_in", StrategiesJson(r.s_in, lex)}, {"intended", Round6(r.intended)}}},
          {"no_intervention", {{"receiver_view", r.no_intervention_view}, {"gap", Round6(r.no_intervention_gap)}}},
          {"plan", ToJson(r.plan, lex)},
          {"alternatives", alts}};
}

}  // namespace tactful
