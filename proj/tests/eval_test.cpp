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

#include "tactful/eval.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "test_fixtures.hpp"

namespace tactful {
namespace {

const StrategyLexicon& Lex() { return DefaultLexicon(); }

TEST(BleuTest, FixedValues) {
  EXPECT_NEAR(Bleu("the cat sat", "the cat sat down"), 71.6531310574, 1e-8);
  EXPECT_NEAR(Bleu("the cat the cat on the mat", "the cat is on the mat"), 40.6149257993, 1e-8);
  EXPECT_NEAR(Bleu("a b c d e", "a b x d e f"), 36.6147523830, 1e-8);
  EXPECT_NEAR(Bleu("could you check? thanks!", "can you check? thanks!"), 80.3428418945, 1e-8);
}

TEST(BleuTest, EdgeCases) {
  EXPECT_NEAR(Bleu("Thanks for the fix .", "thanks for the fix ."), 100.0, 1e-9);
  EXPECT_EQ(Bleu("", "anything"), 0.0);
  EXPECT_EQ(Bleu("zebra", "the cat"), 0.0);
}

ExperimentSetup SetupFor(std::vector<std::string> texts, Circumstance circ, ExperimentStyle style) {
  ExperimentConfig config;
  config.style = style;
  config.name = "unit";
  ExperimentSetup s{config, Lex(), std::move(circ), {}, {}, true, {}};
  for (std::size_t i = 0; i < texts.size(); ++i) s.corpus.push_back({std::to_string(i + 1), texts[i]});
  s.retrieval_corpus = s.corpus;
  return s;
}

Circumstance ExperimentA() { return {TableA1Model(), TableA1Model(), ExperimentAChannel(Lex())}; }

TEST(MetricsTest, WorkedExample) {
  ExperimentSetup s = SetupFor({"could you please proofread this article? thanks!"}, ExperimentA(),
                               ExperimentStyle::kA);
  s.config.methods = {"none", "ilp"};
  ExperimentResult r = RunExperiment(s);
  EXPECT_NEAR(r.report("ilp").mae_plan, 0.001, 1e-9);
  EXPECT_NEAR(r.report("none").mae_plan, 0.684, 1e-9);
  const EvalInstance& ilp = r.report("ilp").instances.at(0);
  EXPECT_EQ(CountAdded(ilp), 3);
  EXPECT_EQ(ilp.added, 3);
  EXPECT_EQ(ilp.candidate, "btw , can you maybe proofread this article? thanks!");
  const EvalInstance& none = r.report("none").instances.at(0);
  EXPECT_EQ(none.receiver_view, "proofread this article? thanks!");
  EXPECT_NEAR(none.gen_gap, 0.684, 1e-9);
  EXPECT_NEAR(none.bleu, 100.0, 1e-9);
}

TEST(MetricsTest, EmptyInputsThrow) {
  EXPECT_THROW(MaePlan({}), Error);
  EXPECT_THROW(MaeGen({}), Error);
}

TEST(MetricsTest, RoundTripOverridesSimulation) {
  ExperimentSetup s = SetupFor({"could you please proofread this article? thanks!"}, ExperimentA(),
                               ExperimentStyle::kA);
  s.config.methods = {"none"};
  s.round_trips["could you please proofread this article? thanks!"] = "please proofread this article.";
  ExperimentResult r = RunExperiment(s);
  const EvalInstance& none = r.report("none").instances.at(0);
  EXPECT_EQ(none.receiver_view, "please proofread this article.");
  EXPECT_NEAR(none.gen_gap, 1.673 + 0.209, 1e-9);  // sentence-initial please
}

// Aggregates match a recomputation from the per-instance rows.
TEST(ExperimentTest, AggregatesMatchRows) {
  ExperimentSetup s =
      SetupFor(testing_fixtures::GeneratedMessages(60, 11), ExperimentA(), ExperimentStyle::kA);
  ExperimentResult r = RunExperiment(s);
  ASSERT_EQ(r.reports.size(), 4u);
  for (const EvalReport& rep : r.reports) {
    double plan = 0, gen = 0, bleu = 0, added = 0;
    for (const EvalInstance& i : rep.instances) {
      plan += std::abs(i.target - Perceive(s.circumstance.receiver, i.plan.s_out));
      gen += std::abs(i.target - Perceive(s.circumstance.receiver,
                                          ExtractStrategies(i.receiver_view, Lex()).strategies));
      bleu += Bleu(i.candidate, i.text);
      added += CountAdded(i);
    }
    double n = static_cast<double>(rep.count);
    EXPECT_EQ(rep.count + r.dropped.size(), 60u);
    EXPECT_NEAR(rep.mae_plan, plan / n, 1e-12) << rep.method;
    EXPECT_NEAR(rep.mae_gen, gen / n, 1e-12) << rep.method;
    EXPECT_NEAR(rep.bleu_s, bleu / n, 1e-9) << rep.method;
    EXPECT_NEAR(rep.mean_added, added / n, 1e-12) << rep.method;
  }
  nlohmann::json j = ToJson(r, Lex());
  EXPECT_EQ(j["bleu_smoothing"], kBleuSmoothing);
  EXPECT_EQ(j["reports"].size(), 4u);
  std::string table = FormatReportTable(r);
  EXPECT_NE(table.find("MAE_plan"), std::string::npos);
  EXPECT_NE(table.find("retrieval"), std::string::npos);
}

void ExpectOrdering(const ExperimentResult& r) {
  const EvalReport& ilp = r.report("ilp");
  const EvalReport& greedy = r.report("greedy");
  const EvalReport& none = r.report("none");
  EXPECT_LE(ilp.mae_plan, greedy.mae_plan + 1e-12);
  EXPECT_LE(greedy.mae_plan, none.mae_plan + 1e-12);
  // Per instance the optimum is never beaten by a baseline under the same
  // constraints. The no-intervention plan is not bound by them.
  for (const EvalReport& rep : r.reports) {
    if (rep.method == "none") continue;
    ASSERT_EQ(rep.instances.size(), ilp.instances.size());
    for (std::size_t k = 0; k < rep.instances.size(); ++k) {
      if (rep.instances[k].fallback) continue;
      EXPECT_LE(ilp.instances[k].plan_gap, rep.instances[k].plan_gap + 1e-9)
          << rep.method << " " << rep.instances[k].text;
    }
  }
}

TEST(ExperimentTest, LossyChannelOrdering) {
  std::vector<std::string> texts;
  for (unsigned block = 1; block <= 4; ++block) {
    for (const std::string& t : testing_fixtures::GeneratedMessages(50, block)) texts.push_back(t);
  }
  ExperimentResult r = RunExperiment(SetupFor(texts, ExperimentA(), ExperimentStyle::kA));
  ExpectOrdering(r);
  EXPECT_LT(r.report("ilp").mae_plan, r.report("none").mae_plan);
  EXPECT_EQ(r.report("none").mean_added, 0.0);
}

PerceptionModel DivergentReceiver() {
  PerceptionModel m = TableA1Model();
  m.coefficients["Please"] = -0.15;
  m.coefficients["Gratitude"] = 0.45;
  m.coefficients["Subjunctive"] = 0.05;
  m.coefficients["Hedges"] = 0.55;
  m.provenance = "divergent";
  return m;
}

TEST(ExperimentTest, DivergentReceiverOrdering) {
  Circumstance circ{TableA1Model(), DivergentReceiver(), AllSafeChannel(Lex())};
  ExperimentSetup s = SetupFor(testing_fixtures::GeneratedMessages(120, 5), circ, ExperimentStyle::kB);
  s.config.top_k = 40;
  ExperimentResult r = RunExperiment(s);
  EXPECT_EQ(r.report("ilp").count, 40u);
  ExpectOrdering(r);
  EXPECT_LT(r.report("ilp").mae_plan, r.report("none").mae_plan);
  // Identity plan with an all-safe channel leaves the text untouched.
  for (const EvalInstance& i : r.report("none").instances) {
    EXPECT_EQ(i.plan.s_out, i.s_in);
    EXPECT_EQ(i.receiver_view, i.text);
  }
}

TEST(ExperimentConfigTest, ParseAndResolve) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "tactful_eval_cfg";
  std::filesystem::create_directories(dir);
  WriteFile((dir / "corpus.jsonl").string(),
            SerializeCorpus({{"a", "could you please proofread this article? thanks!"},
                             {"b", "hi , can you check the link?"}}));
  WriteFile((dir / "exp.json").string(),
            R"({"name": "tiny", "style": "A", "corpus": "corpus.jsonl", "methods": ["none", "greedy", "ilp"],
                "negativity": "auto", "top_k": 1})");
  ExperimentConfig c = LoadExperimentConfig((dir / "exp.json").string());
  EXPECT_EQ(c.name, "tiny");
  EXPECT_FALSE(c.negativity.has_value());
  ExperimentResult r = RunExperiment(c);
  ASSERT_EQ(r.reports.size(), 3u);
  EXPECT_EQ(r.report("ilp").instances.at(0).id, "a");
  WriteReport(r, Lex(), (dir / "out").string());
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "report.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "report.txt"));

  EXPECT_THROW(ParseExperimentConfig(nlohmann::json{{"corpus", "x"}, {"methods", {"magic"}}}), Error);
  EXPECT_THROW(ParseExperimentConfig(nlohmann::json{{"corpus", "x"}, {"style", "C"}}), Error);
  EXPECT_THROW(ParseExperimentConfig(nlohmann::json{{"style", "A"}}), Error);
  EXPECT_THROW(ParseExperimentConfig(nlohmann::json{{"corpus", "x"}, {"colour", 1}}), Error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace tactful
