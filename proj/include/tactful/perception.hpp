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

// Linear politeness perception: level(S) = intercept + sum_{s in S} coef[s],
// on the [-3, 3] annotation scale.

#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "tactful/error.hpp"
#include "tactful/extract.hpp"
#include "tactful/lexicon.hpp"

namespace tactful {

struct PerceptionModel {
  std::map<StrategyId, double> coefficients;
  double intercept = 0.0;
  std::string provenance;

  double coefficient(const StrategyId& id) const {
    auto it = coefficients.find(id);
    if (it == coefficients.end()) {
      throw Error(ErrorCode::kUnknownStrategy, "model has no coefficient for strategy '" + id + "'");
    }
    return it->second;
  }

  bool covers(const StrategyLexicon& lex) const {
    for (const Strategy& s : lex.strategies()) {
      if (!coefficients.count(s.id)) return false;
    }
    return true;
  }
};

enum class Polarity { kPositive, kNegative };

inline std::string_view ToString(Polarity p) {
  return p == Polarity::kPositive ? "positive" : "negative";
}

struct AnnotatedUtterance {
  std::string id;
  std::string text;
  double score = 0.0;
  std::optional<std::string> annotator;
};

inline double Perceive(const PerceptionModel& model, const StrategySet& strategies) {
  double level = model.intercept;
  for (const StrategyId& s : strategies) level += model.coefficient(s);
  return level;
}

// Ties at exactly zero count as positive.
inline Polarity PolarityOf(const PerceptionModel& model, const StrategySet& strategies) {
  return Perceive(model, strategies) >= 0.0 ? Polarity::kPositive : Polarity::kNegative;
}

// Coefficients of the average-annotator regression, intercept 0.
inline PerceptionModel TableA1Model() {
  PerceptionModel m;
  m.coefficients = {
      {"Actually", -0.358},    {"Adverb.Just", -0.004}, {"Affirmation", 0.171},
      {"Apology", 0.429},      {"By.The.Way", 0.331},   {"Conj.Start", -0.245},
      {"Filler", -0.245},      {"For.Me", 0.128},       {"For.You", 0.197},
      {"Gratitude", 0.989},    {"Greeting", 0.491},     {"Hedges", 0.131},
      {"Indicative", 0.221},   {"Please", 0.230},       {"Please.Start", -0.209},
      {"Reassurance", 0.668},  {"Subjunctive", 0.454},  {"Swearing", -1.30},
  };
  m.intercept = 0.0;
  m.provenance = "builtin:table-a1 average-annotator model";
  return m;
}

inline void ValidateModel(const PerceptionModel& model, const StrategyLexicon& lex) {
  if (!std::isfinite(model.intercept)) {
    throw Error(ErrorCode::kValidation, "model intercept is not finite");
  }
  for (const auto& [id, value] : model.coefficients) {
    if (!lex.contains(id)) {
      throw Error(ErrorCode::kUnknownStrategy, "model coefficient for unknown strategy '" + id + "'");
    }
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::kValidation, "coefficient for '" + id + "' is not finite");
    }
  }
}

// One labelled observation in strategy-indicator space.
struct Observation {
  StrategySet strategies;
  double score = 0.0;
};

namespace perception_detail {

struct OlsSolution {
  std::map<StrategyId, double> coefficients;
  double intercept = 0.0;
  Eigen::Index rank = 0;
  Eigen::Index columns = 0;
};

// Ordinary least squares with an unpenalized intercept. Features are centred
// and the minimum-norm solution is taken, so coefficients of strategies that
// are constant across the data (or otherwise unidentifiable) shrink to zero
// and the intercept absorbs the mean.
inline OlsSolution SolveOls(const std::vector<Observation>& data,
                            const std::vector<StrategyId>& features) {
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto p = static_cast<Eigen::Index>(features.size());
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Observation& obs = data[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < p; ++c) {
      x(r, c) = obs.strategies.count(features[static_cast<std::size_t>(c)]) ? 1.0 : 0.0;
    }
    y(r) = obs.score;
  }
  Eigen::RowVectorXd x_mean = x.colwise().mean();
  double y_mean = y.mean();
  Eigen::MatrixXd xc = x.rowwise() - x_mean;
  Eigen::VectorXd yc = y.array() - y_mean;

  OlsSolution out;
  out.columns = p;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  if (p > 0) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(xc);
    cod.setThreshold(1e-10);
    beta = cod.solve(yc);
    out.rank = cod.rank();
  }
  for (Eigen::Index c = 0; c < p; ++c) {
    out.coefficients[features[static_cast<std::size_t>(c)]] = beta(c);
  }
  out.intercept = y_mean - (p > 0 ? x_mean.dot(beta) : 0.0);
  return out;
}

inline std::vector<StrategyId> PresentStrategies(const std::vector<Observation>& data,
                                                 const StrategyLexicon& lex) {
  StrategySet present;
  for (const Observation& o : data) present.insert(o.strategies.begin(), o.strategies.end());
  return lex.Ordered(present);
}

}  // namespace perception_detail

// OLS over strategy indicators. Strategies never observed get coefficient 0.
inline PerceptionModel FitObservations(const std::vector<Observation>& data,
                                       const StrategyLexicon& lex) {
  using namespace perception_detail;
  std::vector<StrategyId> features = PresentStrategies(data, lex);
  if (data.size() < features.size() + 1) {
    throw Error(ErrorCode::kInsufficientData,
                "need at least " + std::to_string(features.size() + 1) +
                    " annotations for " + std::to_string(features.size()) +
                    " observed strategies, got " + std::to_string(data.size()));
  }
  OlsSolution sol = SolveOls(data, features);
  PerceptionModel model;
  for (const Strategy& s : lex.strategies()) model.coefficients[s.id] = 0.0;
  for (const auto& [id, value] : sol.coefficients) model.coefficients[id] = value;
  model.intercept = sol.intercept;
  model.provenance = "ols n=" + std::to_string(data.size()) + " features=" +
                     std::to_string(features.size());
  if (sol.rank < sol.columns) {
    model.provenance += "; warning: degenerate design (rank " + std::to_string(sol.rank) +
                        " of " + std::to_string(sol.columns) + "), minimum-norm solution";
  }
  return model;
}

inline std::vector<Observation> ToObservations(const std::vector<AnnotatedUtterance>& data,
                                               const StrategyLexicon& lex) {
  std::vector<Observation> out;
  out.reserve(data.size());
  for (const AnnotatedUtterance& u : data) {
    out.push_back({ExtractStrategies(u.text, lex).strategies, u.score});
  }
  return out;
}

inline PerceptionModel FitModel(const std::vector<AnnotatedUtterance>& data,
                                const StrategyLexicon& lex) {
  return FitObservations(ToObservations(data, lex), lex);
}

// Per-annotator fit. Strategies the annotator saw in fewer than `min_count`
// utterances keep the fallback coefficient; their contribution is removed
// from the scores before the remaining coefficients are fitted.
inline PerceptionModel FitIndividualObservations(const std::vector<Observation>& data,
                                                 const PerceptionModel& fallback,
                                                 const StrategyLexicon& lex,
                                                 std::size_t min_count = 15) {
  if (!fallback.covers(lex)) {
    throw Error(ErrorCode::kValidation, "fallback model must cover every lexicon strategy");
  }
  if (data.empty()) {
    PerceptionModel copy = fallback;
    copy.provenance = "individual fit with no annotations; fallback: " + fallback.provenance;
    return copy;
  }
  std::map<StrategyId, std::size_t> counts;
  for (const Observation& o : data) {
    for (const StrategyId& s : o.strategies) ++counts[s];
  }
  StrategySet fitted;
  for (const Strategy& s : lex.strategies()) {
    if (counts[s.id] >= min_count) fitted.insert(s.id);
  }
  std::vector<Observation> adjusted;
  adjusted.reserve(data.size());
  for (const Observation& o : data) {
    Observation a;
    a.score = o.score;
    for (const StrategyId& s : o.strategies) {
      if (fitted.count(s)) {
        a.strategies.insert(s);
      } else {
        a.score -= fallback.coefficient(s);
      }
    }
    adjusted.push_back(std::move(a));
  }
  PerceptionModel fit = FitObservations(adjusted, lex);
  PerceptionModel model;
  model.intercept = fit.intercept;
  std::size_t copied = 0;
  for (const Strategy& s : lex.strategies()) {
    if (fitted.count(s.id)) {
      model.coefficients[s.id] = fit.coefficients.at(s.id);
    } else {
      model.coefficients[s.id] = fallback.coefficient(s.id);
      ++copied;
    }
  }
  model.provenance = "individual " + fit.provenance + "; min_count=" + std::to_string(min_count) +
                     "; " + std::to_string(copied) + " coefficients from fallback";
  return model;
}

inline PerceptionModel FitIndividualModel(const std::vector<AnnotatedUtterance>& data,
                                          const PerceptionModel& fallback,
                                          const StrategyLexicon& lex,
                                          std::size_t min_count = 15) {
  return FitIndividualObservations(ToObservations(data, lex), fallback, lex, min_count);
}

// ---- files -----------------------------------------------------------------
//
// Model file:      {"version", "intercept", "coefficients": {id: value}, "provenance"}
// Annotation file: one JSON object per line {"id", "text", "score", "annotator"?}

inline constexpr const char* kModelFileVersion = "tactful-model/1";

inline nlohmann::json ToJson(const PerceptionModel& model) {
  nlohmann::json coefs = nlohmann::json::object();
  for (const auto& [id, value] : model.coefficients) coefs[id] = value;
  return {{"version", kModelFileVersion},
          {"intercept", model.intercept},
          {"coefficients", coefs},
          {"provenance", model.provenance}};
}

inline PerceptionModel ModelFromJson(const nlohmann::json& doc) {
  lexicon_detail::RejectUnknownKeys(doc, {"version", "intercept", "coefficients", "provenance"},
                                    "model");
  PerceptionModel m;
  try {
    m.intercept = doc.value("intercept", 0.0);
    m.provenance = doc.value("provenance", std::string());
    const auto& coefs = doc.at("coefficients");
    if (!coefs.is_object()) throw Error(ErrorCode::kValidation, "model: 'coefficients' must be an object");
    for (const auto& [id, value] : coefs.items()) m.coefficients[id] = value.get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kValidation, std::string("model: ") + e.what());
  }
  return m;
}

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << content;
}

inline nlohmann::json ParseJson(const std::string& text, std::string_view what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
}

// Non-blank lines of a line-delimited JSON file.
inline std::vector<nlohmann::json> ParseJsonLines(const std::string& text, std::string_view what) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParse,
                  std::string(what) + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline PerceptionModel LoadModel(const std::string& path) {
  return ModelFromJson(ParseJson(ReadFile(path), "model file '" + path + "'"));
}

inline void SaveModel(const PerceptionModel& model, const std::string& path) {
  WriteFile(path, ToJson(model).dump(2) + "\n");
}

inline std::vector<AnnotatedUtterance> ParseAnnotations(const std::string& text) {
  std::vector<AnnotatedUtterance> out;
  for (const auto& rec : ParseJsonLines(text, "annotations")) {
    lexicon_detail::RejectUnknownKeys(rec, {"id", "text", "score", "annotator"}, "annotation");
    AnnotatedUtterance u;
    try {
      u.id = rec.contains("id") ? (rec["id"].is_string() ? rec["id"].get<std::string>()
                                                         : rec["id"].dump())
                                : std::to_string(out.size());
      u.text = rec.at("text").get<std::string>();
      u.score = rec.at("score").get<double>();
      if (rec.contains("annotator") && !rec["annotator"].is_null()) {
        u.annotator = rec["annotator"].is_string() ? rec["annotator"].get<std::string>()
                                                   : rec["annotator"].dump();
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kValidation, std::string("annotation: ") + e.what());
    }
    if (!(u.score >= -3.0 && u.score <= 3.0)) {
      throw Error(ErrorCode::kValidation,
                  "annotation '" + u.id + "': score outside [-3, 3]");
    }
    out.push_back(std::move(u));
  }
  return out;
}

inline std::vector<AnnotatedUtterance> LoadAnnotations(const std::string& path) {
  return ParseAnnotations(ReadFile(path));
}

}  // namespace tactful
