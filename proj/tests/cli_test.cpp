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

#include "tactful/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace tactful {
namespace {

const StrategyLexicon& Lex() { return DefaultLexicon(); }

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun Cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int status = RunCli(args, out, err);
  return {status, out.str(), err.str()};
}

std::filesystem::path TempDir(const std::string& name) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

TEST(CliTest, UsageErrors) {
  CliRun none = Cli({});
  EXPECT_EQ(none.status, 2);
  EXPECT_NE(none.err.find("extract"), std::string::npos);
  EXPECT_EQ(Cli({"frobnicate"}).status, 2);
  EXPECT_EQ(Cli({"extract"}).status, 2);
  EXPECT_EQ(Cli({"plan", "-m", "hi", "--method", "magic"}).status, 2);
  EXPECT_EQ(Cli({"plan", "-m", "hi", "--negativity", "sometimes"}).status, 2);
  EXPECT_EQ(Cli({"plan"}).status, 2);
  EXPECT_EQ(Cli({"--help"}).status, 0);
}

TEST(CliTest, Extract) {
  CliRun r = Cli({"extract", "--message", "could you please check? thanks"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "Gratitude\nPlease\nSubjunctive\n");  // lexicon order
  CliRun j = Cli({"extract", "--json", "-m", "could you please check? thanks"});
  nlohmann::json doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["strategies"], nlohmann::json({"Gratitude", "Please", "Subjunctive"}));
  EXPECT_EQ(doc["occurrences"][0]["text"], "could you");
}

TEST(CliTest, Perceive) {
  CliRun r = Cli({"perceive", "--json", "-s", "Gratitude,Please"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_DOUBLE_EQ(nlohmann::json::parse(r.out)["level"].get<double>(), 1.219);
  CliRun t = Cli({"perceive", "-m", "what the heck is this"});
  EXPECT_NE(t.out.find("negative"), std::string::npos);
  EXPECT_EQ(Cli({"perceive", "-s", "Sarcasm"}).status, 1);
  EXPECT_EQ(Cli({"perceive"}).status, 2);
}

TEST(CliTest, PlanWorkedExample) {
  CliRun r = Cli({"plan", "--json", "-m", "could you please proofread this article? thanks!", "--channel",
               "builtin:experiment-a"});
  ASSERT_EQ(r.status, 0) << r.err;
  nlohmann::json plan = nlohmann::json::parse(r.out);
  EXPECT_EQ(plan["method"], "ilp");
  EXPECT_DOUBLE_EQ(plan["gap"].get<double>(), 0.001);
  EXPECT_EQ(plan["added"], StrategiesJson({"Indicative", "By.The.Way", "Hedges"}, Lex()));
  CliRun text = Cli({"plan", "-s", "Subjunctive,Please,Gratitude", "--channel", "builtin:experiment-a", "--method",
                  "greedy"});
  ASSERT_EQ(text.status, 0) << text.err;
  EXPECT_NE(text.out.find("method:   greedy"), std::string::npos);
}

TEST(CliTest, PlanInfeasibleNamesConstraint) {
  CliRun r = Cli({"plan", "-s", "Subjunctive", "--channel", "builtin:experiment-a", "--forbid", "Indicative"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("infeasible"), std::string::npos);
  EXPECT_NE(r.err.find("subj_ind"), std::string::npos) << r.err;
  CliRun req = Cli({"plan", "-s", "Gratitude", "--channel", "builtin:experiment-a", "--require", "Please"});
  EXPECT_EQ(req.status, 1);
  EXPECT_NE(req.err.find("Please"), std::string::npos) << req.err;
}

TEST(CliTest, RewriteMatchesLibrary) {
  const std::string text = "could you please proofread this article? thanks!";
  CliRun r = Cli({"rewrite", "--json", "-m", text, "--channel", "builtin:experiment-a", "-n", "2"});
  ASSERT_EQ(r.status, 0) << r.err;
  Circumstance circ{TableA1Model(), TableA1Model(), ExperimentAChannel(Lex())};
  ParaphraseOptions opts;
  opts.alternatives = 2;
  EXPECT_EQ(r.out, ToJson(Paraphrase(text, circ, Lex(), opts), Lex()).dump(2) + "\n");
  CliRun plain = Cli({"rewrite", "-m", text, "--channel", "builtin:experiment-a"});
  EXPECT_EQ(plain.out.substr(0, plain.out.find('\n')), "btw , can you maybe proofread this article? thanks!");
}

TEST(CliTest, RetrievalNeedsCorpus) {
  EXPECT_EQ(Cli({"plan", "-m", "could you check?", "--method", "retrieval"}).status, 2);
  std::filesystem::path dir = TempDir("tactful_cli_retrieval");
  WriteFile((dir / "c.jsonl").string(), SerializeCorpus({{"1", "can you check the page?"}}));
  CliRun r = Cli({"plan", "--json", "-m", "could you check the page?", "--method", "retrieval", "--corpus",
               (dir / "c.jsonl").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["retrieved_index"], 0);
  std::filesystem::remove_all(dir);
}

TEST(CliTest, ChannelProfile) {
  std::filesystem::path dir = TempDir("tactful_cli_profile");
  std::vector<RoundTripPair> pairs;
  for (int i = 0; i < 8; ++i) pairs.push_back({"can you please check?", i < 6 ? "can you check?" : "can you please check?"});
  pairs.push_back({"hello", "hello"});
  pairs.push_back({"thanks!", "thanks!"});
  WriteFile((dir / "pairs.jsonl").string(), SerializePairs(pairs));
  CliRun r = Cli({"channel", "profile", "--pairs", (dir / "pairs.jsonl").string(), "-o", (dir / "ch.json").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("at risk: Please"), std::string::npos) << r.out;
  ChannelSpec spec = LoadChannel((dir / "ch.json").string());
  EXPECT_FALSE(spec.IsSafe("Please"));
  EXPECT_TRUE(spec.IsSafe("Gratitude"));
  EXPECT_EQ(Cli({"channel", "profile", "--pairs", (dir / "missing.jsonl").string()}).status, 1);
  EXPECT_EQ(Cli({"channel"}).status, 2);
  std::filesystem::remove_all(dir);
}

TEST(CliTest, ChannelFetch) {
  httplib::Server translator;
  translator.Post("/translate", [](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body = nlohmann::json::parse(req.body);
    std::string text = body["text"];
    if (text.find("fail") != std::string::npos) {
      res.status = 500;
      return;
    }
    res.set_content(nlohmann::json{{"translation", text}}.dump(), "application/json");
  });
  int port = translator.bind_to_any_port("127.0.0.1");
  std::thread th([&] { translator.listen_after_bind(); });
  translator.wait_until_ready();

  std::filesystem::path dir = TempDir("tactful_cli_fetch");
  WriteFile((dir / "in.jsonl").string(), SerializeCorpus({{"1", "thanks!"}, {"2", "please fail"}, {"3", "hi"}}));
  std::string endpoint = "http://127.0.0.1:" + std::to_string(port) + "/translate";
  CliRun r = Cli({"channel", "fetch", "-i", (dir / "in.jsonl").string(), "-o", (dir / "pairs.jsonl").string(),
               "--endpoint", endpoint});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("failed #1"), std::string::npos) << r.err;
  std::vector<RoundTripPair> pairs = LoadPairs((dir / "pairs.jsonl").string());
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].original, "thanks!");
  EXPECT_EQ(pairs[1].original, "hi");
  EXPECT_EQ(Cli({"channel", "fetch", "-i", (dir / "in.jsonl").string(), "-o", (dir / "p.jsonl").string(),
                 "--endpoint", "nowhere"})
                .status,
            1);
  translator.stop();
  th.join();
  std::filesystem::remove_all(dir);
}

TEST(CliTest, ModelFit) {
  std::filesystem::path dir = TempDir("tactful_cli_fit");
  const std::vector<std::string> pieces = {"hi ,", "could you", "please", "thanks !", "btw ,", "sorry ,"};
  std::mt19937 rng(3);
  std::string lines;
  for (int i = 0; i < 200; ++i) {
    std::string text;
    for (const std::string& p : pieces) {
      if (std::bernoulli_distribution(0.5)(rng)) text += (text.empty() ? "" : " ") + p;
    }
    text += (text.empty() ? "" : " ") + std::string("fix the link .");
    double score = Perceive(TableA1Model(), ExtractStrategies(text, Lex()).strategies);
    lines += nlohmann::json{{"id", std::to_string(i)}, {"text", text}, {"score", score}, {"annotator", "a"}}.dump() +
             "\n";
  }
  WriteFile((dir / "ann.jsonl").string(), lines);
  CliRun r = Cli({"model", "fit", "--annotations", (dir / "ann.jsonl").string(), "-o", (dir / "m.json").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  PerceptionModel m = LoadModel((dir / "m.json").string());
  EXPECT_NEAR(m.coefficient("Gratitude"), 0.989, 1e-6);
  EXPECT_NEAR(m.coefficient("Greeting"), 0.491, 1e-6);

  CliRun ind = Cli({"model", "fit", "--json", "--annotations", (dir / "ann.jsonl").string(), "--annotator", "a"});
  ASSERT_EQ(ind.status, 0) << ind.err;
  nlohmann::json doc = nlohmann::json::parse(ind.out);
  EXPECT_NEAR(doc["coefficients"]["Swearing"].get<double>(), -1.30, 1e-9);  // from the fallback
  std::filesystem::remove_all(dir);
}

TEST(CliTest, EvalRun) {
  std::filesystem::path dir = TempDir("tactful_cli_eval");
  WriteFile((dir / "corpus.jsonl").string(),
            SerializeCorpus({{"a", "could you please proofread this article? thanks!"},
                             {"b", "hi , can you please check the link ?"},
                             {"c", "um , would you fix the table ? thank you ."}}));
  WriteFile((dir / "exp.json").string(), R"({"name": "cli-eval", "corpus": "corpus.jsonl"})");
  CliRun r = Cli({"eval", "run", "-c", (dir / "exp.json").string(), "-o", (dir / "out").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("MAE_plan"), std::string::npos);
  EXPECT_NE(r.out.find("greedy"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "report.json"));
  CliRun j = Cli({"--json", "eval", "run", "-c", (dir / "exp.json").string()});
  ASSERT_EQ(j.status, 0) << j.err;
  EXPECT_EQ(nlohmann::json::parse(j.out)["reports"].size(), 4u);
  EXPECT_EQ(Cli({"eval", "run", "-c", (dir / "nope.json").string()}).status, 1);
  std::filesystem::remove_all(dir);
}

TEST(CliTest, LexiconShowAndCustomLexicon) {
  CliRun r = Cli({"lexicon", "show"});
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("18 strategies"), std::string::npos);
  CliRun j = Cli({"lexicon", "show", "--json"});
  EXPECT_EQ(nlohmann::json::parse(j.out), ToJson(Lex()));
  EXPECT_EQ(Cli({"--lexicon", "builtin:other", "lexicon", "show"}).status, 1);
}

TEST(CliTest, ServeRejectsBadConfig) {
  std::filesystem::path dir = TempDir("tactful_cli_serve");
  WriteFile((dir / "svc.json").string(), R"({"models": {"x": "missing.json"}})");
  EXPECT_EQ(Cli({"serve", "-c", (dir / "svc.json").string()}).status, 1);
  EXPECT_EQ(Cli({"serve", "--port", "99999"}).status, 2);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace tactful
