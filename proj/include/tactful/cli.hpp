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

// The `tactful` command line. RunCli is the whole program minus main(), so
// tests drive it with captured streams.
//
// Exit status: 0 success, 1 domain error, 2 usage error.

#pragma once

#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tactful/channel.hpp"
#include "tactful/error.hpp"
#include "tactful/eval.hpp"
#include "tactful/extract.hpp"
#include "tactful/lexicon.hpp"
#include "tactful/perception.hpp"
#include "tactful/pipeline.hpp"
#include "tactful/planner.hpp"
#include "tactful/resources.hpp"
#include "tactful/serialize.hpp"
#include "tactful/service.hpp"
#include "tactful/translator.hpp"

namespace tactful {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

namespace cli_detail {

inline std::string Join(const std::vector<StrategyId>& ids) {
  std::string out;
  for (const StrategyId& s : ids) out += (out.empty() ? "" : ", ") + s;
  return out.empty() ? "(none)" : out;
}

inline std::string Fixed(double x) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << Round6(x);
  return s.str();
}

// Options shared by `plan` and `rewrite`.
struct PlanFlags {
  std::string message;
  std::vector<std::string> strategies;
  std::string sender = "builtin:table-a1";
  std::string receiver = "builtin:table-a1";
  std::string channel = "builtin:all-safe";
  std::string method = "ilp";
  int max_added = 3;
  bool no_max_added = false;
  bool no_subj_ind = false;
  std::string negativity = "auto";
  std::vector<std::string> forbid;
  std::vector<std::string> require;
  std::optional<double> target;
  std::string corpus;

  void Register(CLI::App* cmd, bool allow_strategies) {
    auto* msg = cmd->add_option("-m,--message", message, "Message text");
    if (allow_strategies) {
      auto* strat = cmd->add_option("-s,--strategies", strategies, "Input strategy ids instead of a message")
                        ->delimiter(',');
      msg->excludes(strat);
    } else {
      msg->required();
    }
    cmd->add_option("--sender", sender, "Sender model (builtin:table-a1 or a model file)")->capture_default_str();
    cmd->add_option("--receiver", receiver, "Receiver model")->capture_default_str();
    cmd->add_option("--channel", channel, "Channel (builtin:experiment-a, builtin:all-safe or a file)")
        ->capture_default_str();
    cmd->add_option("--method", method, "ilp, greedy, oracle or retrieval")
        ->check(CLI::IsMember(PlanMethods()))
        ->capture_default_str();
    cmd->add_option("--max-added", max_added, "Most strategies that may be added")->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_flag("--no-max-added", no_max_added, "Lift the cap on added strategies");
    cmd->add_flag("--no-subj-ind", no_subj_ind, "Drop the Subjunctive/Indicative constraint");
    cmd->add_option("--negativity", negativity, "on, off or auto")
        ->check(CLI::IsMember({"on", "off", "auto"}))
        ->capture_default_str();
    cmd->add_option("--forbid", forbid, "Strategies the plan may not use")->delimiter(',');
    cmd->add_option("--require", require, "Strategies the plan must use")->delimiter(',');
    cmd->add_option("--target", target, "Override the intended level");
    cmd->add_option("--corpus", corpus, "Retrieval corpus (JSONL) for --method retrieval");
  }

  BuildOptions Build() const {
    BuildOptions o;
    o.max_added = max_added;
    o.max_added_on = !no_max_added;
    o.subj_ind = !no_subj_ind;
    if (negativity != "auto") o.negativity = negativity == "on";
    o.forbidden.insert(forbid.begin(), forbid.end());
    o.required.insert(require.begin(), require.end());
    o.target = target;
    return o;
  }
};

inline std::vector<std::string> CorpusTexts(const std::string& path) {
  std::vector<std::string> out;
  for (const CorpusEntry& e : LoadCorpus(path)) out.push_back(e.text);
  return out;
}

inline void PrintPlan(std::ostream& out, const Plan& plan, const StrategyLexicon& lex) {
  out << "method:   " << plan.method << "\n"
      << "s_out:    " << Join(lex.Ordered(plan.s_out)) << "\n"
      << "added:    " << Join(lex.Ordered(plan.added)) << "\n"
      << "removed:  " << Join(lex.Ordered(plan.removed)) << "\n"
      << "target:   " << Fixed(plan.target) << "\n"
      << "achieved: " << Fixed(plan.achieved) << "\n"
      << "gap:      " << Fixed(plan.gap) << "\n";
  if (plan.retrieved) out << "retrieved corpus entry: " << *plan.retrieved << "\n";
}

}  // namespace cli_detail

inline int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"Politeness-aware paraphrasing across lossy channels and divergent readers", "tactful"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  bool json = false;
  std::string lexicon_ref = "builtin:default";
  app.add_flag("--json", json, "Machine-readable output")->configurable(false);
  app.add_option("--lexicon", lexicon_ref, "Lexicon (builtin:default or a lexicon file)")->capture_default_str();
  auto flag_json = [&](CLI::App* cmd) { cmd->add_flag("--json", json, "Machine-readable output"); };

  // extract
  std::string message;
  auto* extract = app.add_subcommand("extract", "List the strategies a message uses");
  extract->add_option("-m,--message", message, "Message text")->required();
  flag_json(extract);

  // perceive
  std::vector<std::string> strategies;
  std::string model_ref = "builtin:table-a1";
  auto* perceive = app.add_subcommand("perceive", "Perceived politeness of a message or strategy set");
  auto* p_msg = perceive->add_option("-m,--message", message, "Message text");
  auto* p_str = perceive->add_option("-s,--strategies", strategies, "Strategy ids")->delimiter(',');
  p_msg->excludes(p_str);
  perceive->add_option("--model", model_ref, "Model (builtin:table-a1 or a model file)")->capture_default_str();
  flag_json(perceive);

  // plan / rewrite
  PlanFlags plan_flags;
  auto* plan = app.add_subcommand("plan", "Choose the strategy set that best preserves perceived politeness");
  plan_flags.Register(plan, true);
  flag_json(plan);

  PlanFlags rewrite_flags;
  std::size_t beam = 3;
  std::size_t alternatives = 1;
  auto* rewrite = app.add_subcommand("rewrite", "Plan and rewrite a message");
  rewrite_flags.Register(rewrite, false);
  rewrite->add_option("--beam", beam, "Beam width")->check(CLI::PositiveNumber)->capture_default_str();
  rewrite->add_option("-n,--alternatives", alternatives, "Number of rewrites to show")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  flag_json(rewrite);

  // channel profile / fetch
  auto* channel = app.add_subcommand("channel", "Channel estimation");
  channel->require_subcommand(1);
  std::string pairs_path, out_path, label = "profiled";
  double threshold = 0.5;
  auto* profile = channel->add_subcommand("profile", "Mark strategies a channel tends to lose");
  profile->add_option("--pairs", pairs_path, "Round-trip pairs (JSONL {original, round_trip})")->required();
  profile->add_option("--threshold", threshold, "At risk when the loss rate exceeds this")->capture_default_str();
  profile->add_option("--label", label, "Label stored in the channel file")->capture_default_str();
  profile->add_option("-o,--out", out_path, "Write the channel file here");
  flag_json(profile);

  std::string input_path, endpoint;
  std::size_t parallelism = 4;
  auto* fetch = channel->add_subcommand("fetch", "Collect round trips from a translation service");
  fetch->add_option("-i,--input", input_path, "Corpus (JSONL {id, text})")->required();
  fetch->add_option("-o,--out", out_path, "Pairs output (JSONL)")->required();
  fetch->add_option("--endpoint", endpoint, "Translator endpoint (default: TACTFUL_TRANSLATOR_ENDPOINT)");
  fetch->add_option("--parallelism", parallelism, "Requests in flight")->check(CLI::PositiveNumber)
      ->capture_default_str();
  flag_json(fetch);

  // model fit
  auto* model = app.add_subcommand("model", "Perception models");
  model->require_subcommand(1);
  std::string annotations_path, annotator, fallback_ref = "builtin:table-a1";
  std::size_t min_count = 15;
  auto* fit = model->add_subcommand("fit", "Fit a linear perception model to annotations");
  fit->add_option("--annotations", annotations_path, "Annotations (JSONL {id, text, score, annotator?})")
      ->required();
  fit->add_option("-o,--out", out_path, "Write the model file here");
  fit->add_option("--annotator", annotator, "Fit one annotator, backed by --fallback for rare strategies");
  fit->add_option("--fallback", fallback_ref, "Fallback model for --annotator")->capture_default_str();
  fit->add_option("--min-count", min_count, "Annotations a strategy needs before it is fitted")
      ->capture_default_str();
  flag_json(fit);

  // eval run
  auto* eval = app.add_subcommand("eval", "Experiments");
  eval->require_subcommand(1);
  std::string config_path, report_dir;
  auto* run = eval->add_subcommand("run", "Run an experiment config");
  run->add_option("-c,--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("-o,--out", report_dir, "Write report.json and report.txt into this directory");
  flag_json(run);

  // serve
  std::string service_config;
  std::optional<std::string> host;
  std::optional<int> port;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("-c,--config", service_config, "Service config (JSON); builtins only when omitted");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Bind port")->check(CLI::Range(0, 65535));

  // lexicon show
  auto* lexicon = app.add_subcommand("lexicon", "Strategy lexicon");
  lexicon->require_subcommand(1);
  auto* show = lexicon->add_subcommand("show", "Print the lexicon");
  flag_json(show);

  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    StrategyLexicon lex = ResolveLexicon(lexicon_ref);

    if (*extract) {
      Message m(message);
      ExtractionResult ex = ExtractStrategies(m, lex);
      if (json) {
        out << ToJson(ex, m, lex).dump(2) << "\n";
      } else {
        for (const StrategyId& s : lex.Ordered(ex.strategies)) out << s << "\n";
      }
      return kExitOk;
    }

    if (*perceive) {
      if (!*p_msg && !*p_str) {
        err << "perceive: give --message or --strategies\n";
        return kExitUsage;
      }
      PerceptionModel m = ResolveModel(model_ref, lex);
      StrategySet set = *p_str ? StrategySet(strategies.begin(), strategies.end())
                               : ExtractStrategies(message, lex).strategies;
      for (const StrategyId& s : set) lex.at(s);
      double level = Perceive(m, set);
      if (json) {
        out << nlohmann::json{{"model", model_ref},
                              {"strategies", StrategiesJson(set, lex)},
                              {"level", Round6(level)},
                              {"polarity", std::string(ToString(PolarityOf(m, set)))}}
                   .dump(2)
            << "\n";
      } else {
        out << "strategies: " << Join(lex.Ordered(set)) << "\n"
            << "level:      " << Fixed(level) << " (" << ToString(PolarityOf(m, set)) << ")\n";
      }
      return kExitOk;
    }

    if (*plan || *rewrite) {
      const PlanFlags& f = *plan ? plan_flags : rewrite_flags;
      if (*plan && f.message.empty() && f.strategies.empty() && !plan->count("--strategies")) {
        err << "plan: give --message or --strategies\n";
        return kExitUsage;
      }
      Circumstance circ{ResolveModel(f.sender, lex), ResolveModel(f.receiver, lex), ResolveChannel(f.channel, lex)};
      std::unique_ptr<RetrievalIndex> index;
      if (f.method == "retrieval") {
        if (f.corpus.empty()) {
          err << "--method retrieval needs --corpus\n";
          return kExitUsage;
        }
        index = std::make_unique<RetrievalIndex>(CorpusTexts(f.corpus), circ.sender, lex);
      }
      if (*plan) {
        bool from_message = plan->count("--message") > 0;
        if (!from_message && f.method == "retrieval") {
          err << "--method retrieval needs --message\n";
          return kExitUsage;
        }
        Message m(from_message ? f.message : "");
        PlanProblem p = from_message
                            ? BuildProblem(m, circ, lex, f.Build())
                            : BuildProblem(StrategySet(f.strategies.begin(), f.strategies.end()), circ, lex, f.Build());
        Plan result = PlanWithMethod(f.method, p, circ, m, lex, index.get());
        if (json) {
          out << ToJson(result, lex, true).dump(2) << "\n";
        } else {
          PrintPlan(out, result, lex);
        }
        return kExitOk;
      }
      ParaphraseOptions opts;
      opts.method = f.method;
      opts.build = f.Build();
      opts.beam = beam;
      opts.alternatives = alternatives;
      ParaphraseResult r = Paraphrase(f.message, circ, lex, opts, index.get());
      if (json) {
        out << ToJson(r, lex).dump(2) << "\n";
      } else {
        for (const RealizationCandidate& c : r.alternatives) {
          out << c.text << "\n"
              << "  strategies: " << Join(lex.Ordered(c.realized)) << "\n"
              << "  predicted:  " << Fixed(c.predicted) << "  gap: " << Fixed(c.gap)
              << (c.shortfall ? "  (shortfall)" : "") << "\n";
        }
        out << "intended: " << Fixed(r.intended) << "  no-intervention gap: " << Fixed(r.no_intervention_gap)
            << "\n";
      }
      return kExitOk;
    }

    if (*profile) {
      ChannelProfile prof = ProfileChannel(LoadPairs(pairs_path), lex, threshold, label);
      if (!out_path.empty()) SaveChannel(prof.spec, out_path);
      if (json) {
        out << ToJson(prof, lex).dump(2) << "\n";
      } else {
        out << "at risk: " << Join(lex.Ordered(prof.spec.AtRisk())) << "\n";
        for (const Strategy& s : lex.strategies()) {
          const StrategySupport& sup = prof.support.at(s.id);
          if (sup.supporting == 0) continue;
          out << "  " << std::left << std::setw(14) << s.id << " lost " << sup.lost << "/" << sup.supporting << "\n";
        }
        if (!prof.unsupported.empty()) out << "no evidence (kept safe): " << Join(prof.unsupported) << "\n";
      }
      return kExitOk;
    }

    if (*fetch) {
      HttpTranslatorConfig cfg = HttpTranslatorConfig::FromEnvironment();
      if (!endpoint.empty()) cfg.endpoint = endpoint;
      HttpTranslatorClient client(cfg);
      FetchReport report = FetchRoundTrips(CorpusTexts(input_path), client, parallelism);
      WriteFile(out_path, SerializePairs(report.pairs));
      if (json) {
        nlohmann::json failures = nlohmann::json::array();
        for (const FetchFailure& f : report.failures) {
          failures.push_back({{"index", f.index}, {"utterance", f.utterance}, {"message", f.message}});
        }
        out << nlohmann::json{{"written", report.pairs.size()}, {"failures", failures}}.dump(2) << "\n";
      } else {
        out << "wrote " << report.pairs.size() << " pairs to " << out_path << "\n";
        for (const FetchFailure& f : report.failures) err << "failed #" << f.index << ": " << f.message << "\n";
      }
      return report.failures.empty() ? kExitOk : kExitDomain;
    }

    if (*fit) {
      std::vector<AnnotatedUtterance> data = LoadAnnotations(annotations_path);
      PerceptionModel m;
      if (fit->count("--annotator")) {
        std::erase_if(data, [&](const AnnotatedUtterance& u) { return u.annotator != annotator; });
        m = FitIndividualModel(data, ResolveModel(fallback_ref, lex), lex, min_count);
      } else {
        m = FitModel(data, lex);
      }
      if (!out_path.empty()) SaveModel(m, out_path);
      if (json || out_path.empty()) {
        out << ToJson(m).dump(2) << "\n";
      } else {
        out << "wrote model to " << out_path << " (" << m.provenance << ")\n";
      }
      return kExitOk;
    }

    if (*run) {
      ExperimentSetup setup = LoadExperiment(LoadExperimentConfig(config_path));
      ExperimentResult result = RunExperiment(setup);
      if (!report_dir.empty()) WriteReport(result, setup.lexicon, report_dir);
      if (json) {
        out << ToJson(result, setup.lexicon).dump(2) << "\n";
      } else {
        out << FormatReportTable(result);
      }
      return kExitOk;
    }

    if (*serve) {
      ServiceConfig cfg = service_config.empty() ? ServiceConfig{} : LoadServiceConfig(service_config);
      ApplyEnvironment(cfg);
      if (host) cfg.host = *host;
      if (port) cfg.port = *port;
      Service service(cfg);
      HttpServer server(service);
      int bound = server.Bind(cfg.host, cfg.port);
      out << "listening on http://" << cfg.host << ":" << bound << std::endl;
      server.Run();
      return kExitOk;
    }

    if (*show) {
      if (json) {
        out << ToJson(lex).dump(2) << "\n";
      } else {
        out << "lexicon " << lex.version() << " (" << lex.size() << " strategies)\n";
        for (const Strategy& s : lex.strategies()) {
          out << "  " << std::left << std::setw(14) << s.id << " " << std::setw(8) << ToString(s.delete_mode)
              << " " << s.markers.size() << " markers, " << s.templates.size() << " templates\n";
        }
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error [" << ToString(e.code()) << "]: " << e.what() << "\n";
    return kExitDomain;
  }
  err << app.help();
  return kExitUsage;
}

inline int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return RunCli(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace tactful
