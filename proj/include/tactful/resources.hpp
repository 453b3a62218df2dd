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

// Resolution of model, channel and lexicon references. A reference is either
// a builtin name or a file path; relative paths resolve against `base_dir`.
//
//   models:   builtin:table-a1
//   channels: builtin:experiment-a, builtin:all-safe
//   lexicon:  builtin:default

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tactful/channel.hpp"
#include "tactful/error.hpp"
#include "tactful/lexicon.hpp"
#include "tactful/perception.hpp"

namespace tactful {

inline constexpr std::string_view kBuiltinPrefix = "builtin:";

inline std::string ResolvePath(const std::string& path, const std::string& base_dir) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (std::filesystem::path(base_dir) / p).string();
}

inline StrategyLexicon ResolveLexicon(const std::string& ref, const std::string& base_dir = "") {
  if (ref.empty() || ref == "builtin:default") return DefaultLexicon();
  if (ref.starts_with(kBuiltinPrefix)) throw Error(ErrorCode::kConfig, "unknown builtin lexicon '" + ref + "'");
  return LoadLexicon(ResolvePath(ref, base_dir));
}

inline PerceptionModel ResolveModel(const std::string& ref, const StrategyLexicon& lex,
                                    const std::string& base_dir = "") {
  PerceptionModel model;
  if (ref == "builtin:table-a1") {
    model = TableA1Model();
  } else if (ref.starts_with(kBuiltinPrefix)) {
    throw Error(ErrorCode::kConfig, "unknown builtin model '" + ref + "'");
  } else {
    model = LoadModel(ResolvePath(ref, base_dir));
  }
  ValidateModel(model, lex);
  if (!model.covers(lex)) throw Error(ErrorCode::kValidation, "model '" + ref + "' does not cover the lexicon");
  return model;
}

inline ChannelSpec ResolveChannel(const std::string& ref, const StrategyLexicon& lex,
                                  const std::string& base_dir = "") {
  ChannelSpec spec;
  if (ref == "builtin:experiment-a") {
    spec = ExperimentAChannel(lex);
  } else if (ref == "builtin:all-safe") {
    spec = AllSafeChannel(lex);
  } else if (ref.starts_with(kBuiltinPrefix)) {
    throw Error(ErrorCode::kConfig, "unknown builtin channel '" + ref + "'");
  } else {
    spec = LoadChannel(ResolvePath(ref, base_dir));
  }
  ValidateChannel(spec, lex);
  return spec;
}

struct CorpusEntry {
  std::string id;
  std::string text;
};

// Line-delimited {"id": ..., "text": ...}; a missing id becomes the line
// number.
inline std::vector<CorpusEntry> ParseCorpus(const std::string& content) {
  std::vector<CorpusEntry> out;
  for (const nlohmann::json& rec : ParseJsonLines(content, "corpus")) {
    auto text = rec.find("text");
    if (text == rec.end() || !text->is_string()) {
      throw Error(ErrorCode::kParse, "corpus record " + std::to_string(out.size() + 1) + " needs a string 'text'");
    }
    CorpusEntry e;
    e.text = text->get<std::string>();
    auto id = rec.find("id");
    if (id == rec.end()) {
      e.id = std::to_string(out.size() + 1);
    } else {
      e.id = id->is_string() ? id->get<std::string>() : id->dump();
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<CorpusEntry> LoadCorpus(const std::string& path) { return ParseCorpus(ReadFile(path)); }

inline std::string SerializeCorpus(const std::vector<CorpusEntry>& corpus) {
  std::string out;
  for (const CorpusEntry& e : corpus) out += nlohmann::json{{"id", e.id}, {"text", e.text}}.dump() + "\n";
  return out;
}

}  // namespace tactful
