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

// Strategy universe: markers, delete modes and insertion templates.
//
// A lexicon file is a single JSON document:
//
//   {
//     "version": "tactful-lexicon/1",
//     "strategies": [
//       {
//         "id": "Gratitude",
//         "delete_mode": "segment",                      // "token" | "segment"
//         "markers": [
//           {"tokens": ["thanks"]},
//           {"tokens": ["[i]", "appreciate"]},           // [x] = optional token
//           {"tokens": ["please"], "anchor": "sentence_start"}
//         ],
//         "templates": [{"anchor": "message_end", "text": "thanks ."}]
//       }
//     ]
//   }
//
// Marker anchors: "anywhere" (default), "sentence_start", "non_initial".
// Template anchors: "message_start", "message_end", "sentence_start",
// "sentence_end", "before_main_verb_phrase".
// Unknown keys anywhere in the document are rejected.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "tactful/default_lexicon_data.hpp"
#include "tactful/error.hpp"

namespace tactful {

using StrategyId = std::string;
using StrategySet = std::set<StrategyId>;

enum class DeleteMode { kToken, kSegment };

enum class MarkerAnchor { kAnywhere, kSentenceStart, kNonInitial };

enum class TemplateAnchor {
  kMessageStart,
  kMessageEnd,
  kSentenceStart,
  kSentenceEnd,
  kBeforeMainVerbPhrase,
};

struct MarkerToken {
  std::string text;
  bool optional = false;

  bool operator==(const MarkerToken&) const = default;
};

struct Marker {
  std::vector<MarkerToken> tokens;
  MarkerAnchor anchor = MarkerAnchor::kAnywhere;

  // Every concrete token sequence this pattern matches, longest first.
  std::vector<std::vector<std::string>> Expansions() const {
    std::vector<std::vector<std::string>> out{{}};
    for (const MarkerToken& t : tokens) {
      std::vector<std::vector<std::string>> next;
      for (const auto& prefix : out) {
        auto with = prefix;
        with.push_back(t.text);
        next.push_back(std::move(with));
        if (t.optional) next.push_back(prefix);
      }
      out = std::move(next);
    }
    std::erase_if(out, [](const auto& seq) { return seq.empty(); });
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return a.size() > b.size();
    });
    return out;
  }

  bool operator==(const Marker&) const = default;
};

struct InsertionTemplate {
  TemplateAnchor anchor = TemplateAnchor::kMessageStart;
  // Space-separated tokens spliced in verbatim, e.g. "hi ,".
  std::string text;

  bool operator==(const InsertionTemplate&) const = default;
};

struct Strategy {
  StrategyId id;
  std::vector<Marker> markers;
  DeleteMode delete_mode = DeleteMode::kToken;
  std::vector<InsertionTemplate> templates;

  bool operator==(const Strategy&) const = default;
};

inline std::string_view ToString(DeleteMode mode) {
  return mode == DeleteMode::kToken ? "token" : "segment";
}

inline std::string_view ToString(MarkerAnchor anchor) {
  switch (anchor) {
    case MarkerAnchor::kAnywhere: return "anywhere";
    case MarkerAnchor::kSentenceStart: return "sentence_start";
    case MarkerAnchor::kNonInitial: return "non_initial";
  }
  return "anywhere";
}

inline std::string_view ToString(TemplateAnchor anchor) {
  switch (anchor) {
    case TemplateAnchor::kMessageStart: return "message_start";
    case TemplateAnchor::kMessageEnd: return "message_end";
    case TemplateAnchor::kSentenceStart: return "sentence_start";
    case TemplateAnchor::kSentenceEnd: return "sentence_end";
    case TemplateAnchor::kBeforeMainVerbPhrase: return "before_main_verb_phrase";
  }
  return "message_start";
}

// Immutable after construction.
class StrategyLexicon {
 public:
  StrategyLexicon(std::string version, std::vector<Strategy> strategies)
      : version_(std::move(version)), strategies_(std::move(strategies)) {
    if (strategies_.empty()) {
      throw Error(ErrorCode::kValidation, "lexicon must contain at least one strategy");
    }
    for (std::size_t i = 0; i < strategies_.size(); ++i) {
      const Strategy& s = strategies_[i];
      if (s.id.empty()) throw Error(ErrorCode::kValidation, "strategy id must be non-empty");
      if (!index_.emplace(s.id, i).second) {
        throw Error(ErrorCode::kValidation, "duplicate strategy id '" + s.id + "'");
      }
      if (s.markers.empty()) {
        throw Error(ErrorCode::kValidation, "strategy '" + s.id + "' has no markers");
      }
      for (const Marker& m : s.markers) {
        bool has_required = std::any_of(m.tokens.begin(), m.tokens.end(),
                                        [](const MarkerToken& t) { return !t.optional; });
        if (m.tokens.empty() || !has_required) {
          throw Error(ErrorCode::kValidation,
                      "strategy '" + s.id + "' has an empty marker");
        }
        for (const MarkerToken& t : m.tokens) {
          if (t.text.empty()) {
            throw Error(ErrorCode::kValidation,
                        "strategy '" + s.id + "' has an empty marker token");
          }
        }
      }
    }
  }

  const std::string& version() const { return version_; }
  std::size_t size() const { return strategies_.size(); }
  std::span<const Strategy> strategies() const { return strategies_; }

  bool contains(std::string_view id) const { return index_.count(std::string(id)) > 0; }

  std::optional<std::size_t> index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const Strategy& at(std::string_view id) const {
    auto idx = index_of(id);
    if (!idx) {
      throw Error(ErrorCode::kUnknownStrategy, "unknown strategy '" + std::string(id) + "'");
    }
    return strategies_[*idx];
  }

  const Strategy& operator[](std::size_t i) const { return strategies_[i]; }

  std::vector<StrategyId> ids() const {
    std::vector<StrategyId> out;
    out.reserve(strategies_.size());
    for (const Strategy& s : strategies_) out.push_back(s.id);
    return out;
  }

  // Set members in declaration order; unknown ids sort last, by name.
  std::vector<StrategyId> Ordered(const StrategySet& set) const {
    std::vector<StrategyId> out(set.begin(), set.end());
    std::stable_sort(out.begin(), out.end(), [this](const auto& a, const auto& b) {
      return index_of(a).value_or(size()) < index_of(b).value_or(size());
    });
    return out;
  }

 private:
  std::string version_;
  std::vector<Strategy> strategies_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace lexicon_detail {

inline void RejectUnknownKeys(const nlohmann::json& obj,
                              std::initializer_list<std::string_view> allowed,
                              std::string_view where) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::kParse, std::string(where) + ": expected an object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorCode::kValidation,
                  std::string(where) + ": unknown field '" + key + "'");
    }
  }
}

inline std::string RequireString(const nlohmann::json& obj, const char* key,
                                 std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw Error(ErrorCode::kValidation,
                std::string(where) + ": missing string field '" + key + "'");
  }
  return it->get<std::string>();
}

inline std::string Lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline MarkerAnchor ParseMarkerAnchor(const std::string& s, std::string_view where) {
  if (s == "anywhere") return MarkerAnchor::kAnywhere;
  if (s == "sentence_start") return MarkerAnchor::kSentenceStart;
  if (s == "non_initial") return MarkerAnchor::kNonInitial;
  throw Error(ErrorCode::kValidation, std::string(where) + ": unknown marker anchor '" + s + "'");
}

inline TemplateAnchor ParseTemplateAnchor(const std::string& s, std::string_view where) {
  if (s == "message_start") return TemplateAnchor::kMessageStart;
  if (s == "message_end") return TemplateAnchor::kMessageEnd;
  if (s == "sentence_start") return TemplateAnchor::kSentenceStart;
  if (s == "sentence_end") return TemplateAnchor::kSentenceEnd;
  if (s == "before_main_verb_phrase") return TemplateAnchor::kBeforeMainVerbPhrase;
  throw Error(ErrorCode::kValidation,
              std::string(where) + ": unknown template anchor '" + s + "'");
}

inline MarkerToken ParseMarkerToken(const std::string& raw) {
  if (raw.size() >= 2 && raw.front() == '[' && raw.back() == ']') {
    return {Lowercase(raw.substr(1, raw.size() - 2)), true};
  }
  return {Lowercase(raw), false};
}

}  // namespace lexicon_detail

inline StrategyLexicon ParseLexicon(const nlohmann::json& doc) {
  using namespace lexicon_detail;
  RejectUnknownKeys(doc, {"version", "strategies"}, "lexicon");
  std::string version = RequireString(doc, "version", "lexicon");
  auto sit = doc.find("strategies");
  if (sit == doc.end() || !sit->is_array()) {
    throw Error(ErrorCode::kValidation, "lexicon: missing array field 'strategies'");
  }
  std::vector<Strategy> strategies;
  for (const auto& js : *sit) {
    RejectUnknownKeys(js, {"id", "markers", "delete_mode", "templates"}, "strategy");
    Strategy s;
    s.id = RequireString(js, "id", "strategy");
    const std::string where = "strategy '" + s.id + "'";
    std::string mode = RequireString(js, "delete_mode", where);
    if (mode == "token") {
      s.delete_mode = DeleteMode::kToken;
    } else if (mode == "segment") {
      s.delete_mode = DeleteMode::kSegment;
    } else {
      throw Error(ErrorCode::kValidation, where + ": unknown delete_mode '" + mode + "'");
    }
    auto mit = js.find("markers");
    if (mit == js.end() || !mit->is_array()) {
      throw Error(ErrorCode::kValidation, where + ": missing array field 'markers'");
    }
    for (const auto& jm : *mit) {
      RejectUnknownKeys(jm, {"tokens", "anchor"}, where + " marker");
      Marker m;
      auto tit = jm.find("tokens");
      if (tit == jm.end() || !tit->is_array()) {
        throw Error(ErrorCode::kValidation, where + ": marker needs a 'tokens' array");
      }
      for (const auto& jt : *tit) {
        if (!jt.is_string()) {
          throw Error(ErrorCode::kValidation, where + ": marker tokens must be strings");
        }
        m.tokens.push_back(ParseMarkerToken(jt.get<std::string>()));
      }
      if (jm.contains("anchor")) {
        m.anchor = ParseMarkerAnchor(RequireString(jm, "anchor", where), where);
      }
      s.markers.push_back(std::move(m));
    }
    if (js.contains("templates")) {
      if (!js["templates"].is_array()) {
        throw Error(ErrorCode::kValidation, where + ": 'templates' must be an array");
      }
      for (const auto& jt : js["templates"]) {
        RejectUnknownKeys(jt, {"anchor", "text"}, where + " template");
        InsertionTemplate t;
        t.anchor = ParseTemplateAnchor(RequireString(jt, "anchor", where), where);
        t.text = RequireString(jt, "text", where);
        if (t.text.empty()) {
          throw Error(ErrorCode::kValidation, where + ": template text must be non-empty");
        }
        s.templates.push_back(std::move(t));
      }
    }
    strategies.push_back(std::move(s));
  }
  return StrategyLexicon(std::move(version), std::move(strategies));
}

inline StrategyLexicon ParseLexicon(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("lexicon: ") + e.what());
  }
  return ParseLexicon(doc);
}

inline StrategyLexicon LoadLexicon(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open lexicon file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseLexicon(std::string_view(buf.str()));
}

inline nlohmann::json ToJson(const StrategyLexicon& lex) {
  nlohmann::json strategies = nlohmann::json::array();
  for (const Strategy& s : lex.strategies()) {
    nlohmann::json markers = nlohmann::json::array();
    for (const Marker& m : s.markers) {
      nlohmann::json tokens = nlohmann::json::array();
      for (const MarkerToken& t : m.tokens) {
        tokens.push_back(t.optional ? "[" + t.text + "]" : t.text);
      }
      nlohmann::json jm = {{"tokens", tokens}};
      if (m.anchor != MarkerAnchor::kAnywhere) jm["anchor"] = ToString(m.anchor);
      markers.push_back(std::move(jm));
    }
    nlohmann::json templates = nlohmann::json::array();
    for (const InsertionTemplate& t : s.templates) {
      templates.push_back({{"anchor", ToString(t.anchor)}, {"text", t.text}});
    }
    strategies.push_back({{"id", s.id},
                          {"delete_mode", ToString(s.delete_mode)},
                          {"markers", std::move(markers)},
                          {"templates", std::move(templates)}});
  }
  return {{"version", lex.version()}, {"strategies", std::move(strategies)}};
}

inline std::string SerializeLexicon(const StrategyLexicon& lex) {
  return ToJson(lex).dump(2) + "\n";
}

inline void SaveLexicon(const StrategyLexicon& lex, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write lexicon file '" + path + "'");
  out << SerializeLexicon(lex);
}

// The 18-strategy built-in lexicon, version-tagged.
inline const StrategyLexicon& DefaultLexicon() {
  static const StrategyLexicon lexicon = ParseLexicon(std::string_view(kDefaultLexiconJson));
  return lexicon;
}

}  // namespace tactful
