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

// Evaluation: perception-gap metrics, BLEU against the source message, and
// an experiment driver that runs every planning method over a corpus.
//
// Experiment config (JSON, paths relative to the config file):
//
//   {
//     "name": "experiment-a",
//     "style": "A",                        // A: lossy channel, B: divergent receiver
//     "corpus": "corpus/synthetic_a.jsonl",
//     "retrieval_corpus": "...",           // optional, default: corpus (leave-one-out)
//     "lexicon": "builtin:default",        // optional
//     "sender": "builtin:table-a1",
//     "receiver": "builtin:table-a1",
//     "channel": "builtin:experiment-a",
//     "round_trips": "pairs.jsonl",        // optional, A only
//     "methods": ["none", "retrieval", "greedy", "ilp"],
//     "max_added": 3, "subj_ind": true, "negativity": "auto",
//     "beam": 3,
//     "top_k": 100                         // optional
//   }

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tactful/channel.hpp"
#include "tactful/error.hpp"
#include "tactful/extract.hpp"
#include "tactful/lexicon.hpp"
#include "tactful/perception.hpp"
#include "tactful/planner.hpp"
#include "tactful/realizer.hpp"
#include "tactful/resources.hpp"
#include "tactful/serialize.hpp"

namespace tactful {

// ---- metrics -----------------------------------------------------------------

inline constexpr const char* kBleuSmoothing = "add-one on 2- to 4-gram precisions";

// Sentence BLEU (0-100) of `candidate` against one reference: clipped 1- to
// 4-gram precisions, add-one smoothing for n >= 2, brevity penalty. Tokens are
// the lowercased tokenizer output.
inline double Bleu(const std::string& candidate, const std::string& reference) {
  auto tokens = [](const std::string& text) {
    std::vector<std::string> out;
    for (const Token& t : Message(text).tokens()) out.push_back(t.lower);
    return out;
  };
  std::vector<std::string> c = tokens(candidate), r = tokens(reference);
  if (c.empty()) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    std::map<std::vector<std::string>, int> ref_counts;
    for (std::size_t i = 0; i + n <= r.size(); ++i) ++ref_counts[{r.begin() + i, r.begin() + i + n}];
    std::map<std::vector<std::string>, int> cand_counts;
    for (std::size_t i = 0; i + n <= c.size(); ++i) ++cand_counts[{c.begin() + i, c.begin() + i + n}];
    double matched = 0.0, total = 0.0;
    for (const auto& [gram, count] : cand_counts) {
      total += count;
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matched += std::min(count, it->second);
    }
    double p = n == 1 ? (total > 0 ? matched / total : 0.0) : (matched + 1.0) / (total + 1.0);
    if (p <= 0.0) return 0.0;
    log_sum += std::log(p);
  }
  double bp = c.size() > r.size() ? 1.0 : std::exp(1.0 - static_cast<double>(r.size()) / c.size());
  return 100.0 * bp * std::exp(log_sum / 4.0);
}

struct EvalInstance {
  std::string id;
  std::string text;
  StrategySet s_in;
  double target = 0.0;
  Plan plan;
  std::string candidate;      // text the sender transmits
  std::string receiver_view;  // what arrives
  double plan_gap = 0.0;
  double gen_gap = 0.0;
  double bleu = 0.0;
  int added = 0;
  bool shortfall = false;
  bool fallback = false;  // method failed; the no-intervention plan stands in
  std::string note;
};

inline int CountAdded(const EvalInstance& inst) {
  int n = 0;
  for (const StrategyId& s : inst.plan.s_out) n += !inst.s_in.count(s);
  return n;
}

inline double MaePlan(const std::vector<EvalInstance>& instances) {
  if (instances.empty()) throw Error(ErrorCode::kEmptyInput, "mae_plan of no instances");
  double sum = 0.0;
  for (const EvalInstance& i : instances) sum += std::abs(i.target - i.plan.achieved);
  return sum / static_cast<double>(instances.size());
}

inline double MaeGen(const std::vector<EvalInstance>& instances) {
  if (instances.empty()) throw Error(ErrorCode::kEmptyInput, "mae_gen of no instances");
  double sum = 0.0;
  for (const EvalInstance& i : instances) sum += i.gen_gap;
  return sum / static_cast<double>(instances.size());
}

struct EvalReport {
  std::string method;
  double mae_plan = 0.0;
  double mae_gen = 0.0;
  double bleu_s = 0.0;
  double mean_added = 0.0;
  std::size_t count = 0;
  std::size_t fallbacks = 0;
  std::size_t shortfalls = 0;
  std::vector<EvalInstance> instances;
};

inline EvalReport Summarize(std::string method, std::vector<EvalInstance> instances) {
  EvalReport r;
  r.method = std::move(method);
  r.count = instances.size();
  if (!instances.empty()) {
    r.mae_plan = MaePlan(instances);
    r.mae_gen = MaeGen(instances);
    double bleu = 0.0, added = 0.0;
    for (const EvalInstance& i : instances) {
      bleu += i.bleu;
      added += CountAdded(i);
      r.fallbacks += i.fallback;
      r.shortfalls += i.shortfall;
    }
    r.bleu_s = bleu / static_cast<double>(r.count);
    r.mean_added = added / static_cast<double>(r.count);
  }
  r.instances = std::move(instances);
  return r;
}

// ---- experiment config ------------------------------------------------------

enum class ExperimentStyle { kA, kB };

inline const std::vector<std::string>& AllMethods() {
  static const std::vector<std::string> kMethods = {"none", "retrieval", "greedy", "ilp"};
  return kMethods;
}

struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentStyle style = ExperimentStyle::kA;
  std::string corpus;
  std::optional<std::string> retrieval_corpus;
  std::string lexicon = "builtin:default";
  std::string sender = "builtin:table-a1";
  std::string receiver = "builtin:table-a1";
  std::string channel = "builtin:experiment-a";
  std::optional<std::string> round_trips;
  std::vector<std::string> methods = AllMethods();
  int max_added = 3;
  bool max_added_on = true;
  bool subj_ind = true;
  std::optional<bool> negativity;  // unset: automatic
  std::size_t beam = 3;
  std::optional<std::size_t> top_k;
  std::string base_dir;
};

inline ExperimentConfig ParseExperimentConfig(const nlohmann::json& doc, const std::string& base_dir = "") {
  lexicon_detail::RejectUnknownKeys(doc,
                                    {"name", "style", "corpus", "retrieval_corpus", "lexicon", "sender",
                                     "receiver", "channel", "round_trips", "methods", "max_added", "subj_ind",
                                     "negativity", "beam", "top_k"},
                                    "experiment config");
  ExperimentConfig c;
  c.base_dir = base_dir;
  try {
    if (doc.contains("name")) c.name = doc["name"].get<std::string>();
    std::string style = doc.value("style", std::string("A"));
    if (style == "A" || style == "a") {
      c.style = ExperimentStyle::kA;
    } else if (style == "B" || style == "b") {
      c.style = ExperimentStyle::kB;
    } else {
      throw Error(ErrorCode::kConfig, "experiment style must be \"A\" or \"B\"");
    }
    if (!doc.contains("corpus")) throw Error(ErrorCode::kConfig, "experiment config needs 'corpus'");
    c.corpus = doc["corpus"].get<std::string>();
    if (doc.contains("retrieval_corpus")) c.retrieval_corpus = doc["retrieval_corpus"].get<std::string>();
    if (doc.contains("lexicon")) c.lexicon = doc["lexicon"].get<std::string>();
    if (doc.contains("sender")) c.sender = doc["sender"].get<std::string>();
    if (doc.contains("receiver")) c.receiver = doc["receiver"].get<std::string>();
    if (doc.contains("channel")) c.channel = doc["channel"].get<std::string>();
    if (doc.contains("round_trips")) c.round_trips = doc["round_trips"].get<std::string>();
    if (doc.contains("methods")) {
      c.methods = doc["methods"].get<std::vector<std::string>>();
      if (c.methods.empty()) throw Error(ErrorCode::kConfig, "experiment config: 'methods' is empty");
      for (const std::string& m : c.methods) {
        if (std::find(AllMethods().begin(), AllMethods().end(), m) == AllMethods().end()) {
          throw Error(ErrorCode::kConfig, "unknown method '" + m + "' (none, retrieval, greedy, ilp)");
        }
      }
    }
    if (doc.contains("max_added")) {
      if (doc["max_added"].is_null()) {
        c.max_added_on = false;
      } else {
        c.max_added = doc["max_added"].get<int>();
        if (c.max_added < 0) throw Error(ErrorCode::kConfig, "max_added must be non-negative");
      }
    }
    if (doc.contains("subj_ind")) c.subj_ind = doc["subj_ind"].get<bool>();
    if (doc.contains("negativity")) {
      const auto& n = doc["negativity"];
      if (n.is_boolean()) {
        c.negativity = n.get<bool>();
      } else if (!(n.is_string() && n.get<std::string>() == "auto")) {
        throw Error(ErrorCode::kConfig, "negativity must be true, false or \"auto\"");
      }
    }
    if (doc.contains("beam")) {
      int beam = doc["beam"].get<int>();
      if (beam < 1) throw Error(ErrorCode::kConfig, "beam must be at least 1");
      c.beam = static_cast<std::size_t>(beam);
    }
    if (doc.contains("top_k") && !doc["top_k"].is_null()) {
      int k = doc["top_k"].get<int>();
      if (k < 1) throw Error(ErrorCode::kConfig, "top_k must be at least 1");
      c.top_k = static_cast<std::size_t>(k);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("experiment config: ") + e.what());
  }
  return c;
}

inline ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::string dir = std::filesystem::path(path).parent_path().string();
  return ParseExperimentConfig(ParseJson(ReadFile(path), "experiment config '" + path + "'"), dir);
}

// Everything an experiment needs, loaded and validated.
struct ExperimentSetup {
  ExperimentConfig config;
  StrategyLexicon lexicon;
  Circumstance circumstance;
  std::vector<CorpusEntry> corpus;
  std::vector<CorpusEntry> retrieval_corpus;
  bool leave_one_out = false;  // retrieval corpus is the evaluation corpus
  std::map<std::string, std::string> round_trips;
};

inline ExperimentSetup LoadExperiment(const ExperimentConfig& c) {
  StrategyLexicon lex = ResolveLexicon(c.lexicon, c.base_dir);
  Circumstance circ{ResolveModel(c.sender, lex, c.base_dir), ResolveModel(c.receiver, lex, c.base_dir),
                    ResolveChannel(c.channel, lex, c.base_dir)};
  ExperimentSetup s{c, std::move(lex), std::move(circ), {}, {}, false, {}};
  s.corpus = LoadCorpus(ResolvePath(c.corpus, c.base_dir));
  if (s.corpus.empty()) throw Error(ErrorCode::kEmptyInput, "experiment corpus is empty");
  if (c.retrieval_corpus) {
    s.retrieval_corpus = LoadCorpus(ResolvePath(*c.retrieval_corpus, c.base_dir));
  } else {
    s.retrieval_corpus = s.corpus;
    s.leave_one_out = true;
  }
  if (c.round_trips) {
    for (const RoundTripPair& p : LoadPairs(ResolvePath(*c.round_trips, c.base_dir))) {
      s.round_trips.emplace(p.original, p.round_trip);
    }
  }
  return s;
}

struct ExperimentResult {
  std::string name;
  ExperimentStyle style = ExperimentStyle::kA;
  std::vector<EvalReport> reports;  // in config method order
  std::vector<std::string> dropped;  // ids whose constraint system is infeasible
  std::size_t corpus_size = 0;

  const EvalReport& report(const std::string& method) const {
    for (const EvalReport& r : reports) {
      if (r.method == method) return r;
    }
    throw Error(ErrorCode::kValidation, "no report for method '" + method + "'");
  }
};

namespace eval_detail {

struct Prepared {
  std::size_t corpus_index = 0;
  const CorpusEntry* entry = nullptr;
  Message message;
  PlanProblem problem;
  double expected_gap = 0.0;  // no-intervention gap
};

inline Plan SafeSubsetPlan(const PlanProblem& p, const Circumstance& circ, const StrategyLexicon& lex,
                           bool style_a) {
  Plan plan;
  for (const StrategyId& s : p.s_in) {
    if (!style_a || circ.channel.IsSafe(s)) plan.s_out.insert(s);
  }
  for (const StrategyId& s : p.s_in) {
    if (!plan.s_out.count(s)) plan.removed.insert(s);
  }
  (void)lex;
  plan.target = p.target;
  plan.achieved = Perceive(circ.receiver, plan.s_out);
  plan.gap = std::abs(plan.target - plan.achieved);
  plan.method = "none";
  return plan;
}

}  // namespace eval_detail

inline ExperimentResult RunExperiment(const ExperimentSetup& setup) {
  using eval_detail::Prepared;
  const ExperimentConfig& c = setup.config;
  const StrategyLexicon& lex = setup.lexicon;
  const Circumstance& circ = setup.circumstance;
  const bool style_a = c.style == ExperimentStyle::kA;
  BuildOptions opts;
  opts.max_added = c.max_added;
  opts.max_added_on = c.max_added_on;
  opts.subj_ind = c.subj_ind;
  opts.negativity = c.negativity;

  ExperimentResult result;
  result.name = c.name;
  result.style = c.style;
  result.corpus_size = setup.corpus.size();

  // Instances whose constraint system has no solution are left out for every
  // method so all reports cover the same messages.
  std::vector<Prepared> prepared;
  for (std::size_t i = 0; i < setup.corpus.size(); ++i) {
    const CorpusEntry& e = setup.corpus[i];
    Prepared p{i, &e, Message(e.text), {}, 0.0};
    p.problem = BuildProblem(p.message, circ, lex, opts);
    try {
      PlanIlp(p.problem, circ, lex);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kInfeasible) throw;
      result.dropped.push_back(e.id);
      continue;
    }
    p.expected_gap = eval_detail::SafeSubsetPlan(p.problem, circ, lex, style_a).gap;
    prepared.push_back(std::move(p));
  }
  if (c.top_k && *c.top_k < prepared.size()) {
    std::stable_sort(prepared.begin(), prepared.end(),
                     [](const Prepared& a, const Prepared& b) { return a.expected_gap > b.expected_gap; });
    prepared.resize(*c.top_k);
    std::stable_sort(prepared.begin(), prepared.end(),
                     [](const Prepared& a, const Prepared& b) { return a.corpus_index < b.corpus_index; });
  }

  std::vector<std::string> retrieval_texts;
  for (const CorpusEntry& e : setup.retrieval_corpus) retrieval_texts.push_back(e.text);
  std::optional<RetrievalIndex> index;
  if (std::find(c.methods.begin(), c.methods.end(), "retrieval") != c.methods.end()) {
    index.emplace(retrieval_texts, circ.sender, lex);
  }
  RealizeOptions ropts;
  ropts.beam = c.beam;

  for (const std::string& method : c.methods) {
    std::vector<EvalInstance> rows;
    for (const Prepared& p : prepared) {
      EvalInstance inst;
      inst.id = p.entry->id;
      inst.text = p.entry->text;
      inst.s_in = p.problem.s_in;
      inst.target = p.problem.target;
      auto no_intervention = [&]() {
        inst.plan = eval_detail::SafeSubsetPlan(p.problem, circ, lex, style_a);
        inst.candidate = inst.text;
        if (!style_a) {
          inst.receiver_view = inst.text;
        } else if (auto it = setup.round_trips.find(inst.text); it != setup.round_trips.end()) {
          inst.receiver_view = it->second;
        } else {
          inst.receiver_view = SimulateChannel(p.message, circ.channel, lex).raw();
        }
        inst.gen_gap =
            std::abs(inst.target - Perceive(circ.receiver, ExtractStrategies(inst.receiver_view, lex).strategies));
      };
      if (method == "none") {
        no_intervention();
      } else {
        try {
          if (method == "ilp") {
            inst.plan = PlanIlp(p.problem, circ, lex);
          } else if (method == "greedy") {
            inst.plan = PlanGreedy(p.problem, circ, lex);
          } else {
            RetrievalOptions ro;
            if (setup.leave_one_out) ro.exclude.push_back(p.corpus_index);
            inst.plan = PlanRetrieval(p.problem, circ, p.message, *index, lex, ro);
          }
          RealizationCandidate r = Realize(p.message, inst.plan, circ, lex, ropts);
          inst.candidate = r.text;
          inst.receiver_view = SimulateChannel(Message(r.text), circ.channel, lex).raw();
          inst.gen_gap = r.gap;
          inst.shortfall = r.shortfall;
        } catch (const Error& err) {
          no_intervention();
          inst.fallback = true;
          inst.note = std::string(ToString(err.code())) + ": " + err.what();
        }
      }
      inst.plan_gap = std::abs(inst.target - inst.plan.achieved);
      inst.added = CountAdded(inst);
      inst.bleu = Bleu(inst.candidate, inst.text);
      rows.push_back(std::move(inst));
    }
    result.reports.push_back(Summarize(method, std::move(rows)));
  }
  return result;
}

inline ExperimentResult RunExperiment(const ExperimentConfig& config) {
  return RunExperiment(LoadExperiment(config));
}

// ---- reports -------------------------------------------------------------------

inline nlohmann::json ToJson(const EvalInstance& i, const StrategyLexicon& lex) {
  nlohmann::json j = {{"id", i.id},
                      {"text", i.text},
                      {"s_in", StrategiesJson(i.s_in, lex)},
                      {"target", Round6(i.target)},
                      {"s_out", StrategiesJson(i.plan.s_out, lex)},
                      {"achieved", Round6(i.plan.achieved)},
                      {"candidate", i.candidate},
                      {"receiver_view", i.receiver_view},
                      {"plan_gap", Round6(i.plan_gap)},
                      {"gen_gap", Round6(i.gen_gap)},
                      {"bleu", Round6(i.bleu)},
                      {"added", i.added},
                      {"shortfall", i.shortfall},
                      {"fallback", i.fallback}};
  if (!i.note.empty()) j["note"] = i.note;
  return j;
}

inline nlohmann::json ToJson(const ExperimentResult& r, const StrategyLexicon& lex) {
  nlohmann::json reports = nlohmann::json::array();
  for (const EvalReport& rep : r.reports) {
    nlohmann::json rows = nlohmann::json::array();
    for (const EvalInstance& i : rep.instances) rows.push_back(ToJson(i, lex));
    reports.push_back({{"method", rep.method},
                       {"mae_plan", Round6(rep.mae_plan)},
                       {"mae_gen", Round6(rep.mae_gen)},
                       {"bleu_s", Round6(rep.bleu_s)},
                       {"mean_added", Round6(rep.mean_added)},
                       {"count", rep.count},
                       {"fallbacks", rep.fallbacks},
                       {"shortfalls", rep.shortfalls},
                       {"instances", rows}});
  }
  return {{"name", r.name},
          {"style", r.style == ExperimentStyle::kA ? "A" : "B"},
          {"corpus_size", r.corpus_size},
          {"dropped_infeasible", r.dropped},
          {"bleu_smoothing", kBleuSmoothing},
          {"reports", reports}};
}

// Aligned columns, one row per method.
inline std::string FormatReportTable(const ExperimentResult& r) {
  std::string out = r.name + " (style " + (r.style == ExperimentStyle::kA ? "A" : "B") + ")\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %9s %9s %8s %8s %6s %9s\n", "method", "MAE_plan", "MAE_gen", "BLEU-s",
                "#-added", "n", "fallback");
  out += line;
  for (const EvalReport& rep : r.reports) {
    std::snprintf(line, sizeof line, "%-10s %9.4f %9.4f %8.2f %8.2f %6zu %9zu\n", rep.method.c_str(), rep.mae_plan,
                  rep.mae_gen, rep.bleu_s, rep.mean_added, rep.count, rep.fallbacks);
    out += line;
  }
  if (!r.dropped.empty()) out += "dropped (infeasible constraints): " + std::to_string(r.dropped.size()) + "\n";
  return out;
}

inline void WriteReport(const ExperimentResult& r, const StrategyLexicon& lex, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create report directory '" + dir + "': " + ec.message());
  WriteFile((std::filesystem::path(dir) / "report.json").string(), ToJson(r, lex).dump(2) + "\n");
  WriteFile((std::filesystem::path(dir) / "report.txt").string(), FormatReportTable(r));
}

}  // namespace tactful
