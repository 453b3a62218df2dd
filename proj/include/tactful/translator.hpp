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

// Round-trip (back-translation) collection for channel profiling.
//
// The HTTP client speaks a minimal translate protocol:
//
//   POST <endpoint>   {"text": "...", "from": "en", "to": "zh"}
//   200               {"translation": "..."}
//
// configured from TACTFUL_TRANSLATOR_ENDPOINT (e.g. http://host:8080/translate),
// TACTFUL_TRANSLATOR_KEY (sent as a bearer token) and TACTFUL_TRANSLATOR_PIVOT.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "tactful/channel.hpp"
#include "tactful/error.hpp"
#include "tactful/http.hpp"

namespace tactful {

class TranslatorClient {
 public:
  virtual ~TranslatorClient() = default;
  // Source -> pivot -> source. Throws Error(kTransport) on failure.
  virtual std::string RoundTrip(const std::string& text) = 0;
};

// Serves round trips recorded in a pair file.
class OfflinePairClient : public TranslatorClient {
 public:
  explicit OfflinePairClient(const std::vector<RoundTripPair>& pairs) {
    for (const RoundTripPair& p : pairs) table_.emplace(p.original, p.round_trip);
  }

  std::string RoundTrip(const std::string& text) override {
    auto it = table_.find(text);
    if (it == table_.end()) {
      throw Error(ErrorCode::kTransport, "no recorded round trip for '" + text + "'");
    }
    return it->second;
  }

 private:
  std::map<std::string, std::string> table_;
};

struct HttpTranslatorConfig {
  std::string endpoint;  // scheme://host[:port]/path
  std::string api_key;
  std::string source_language = "en";
  std::string pivot_language = "zh";
  double timeout_seconds = 10.0;

  static HttpTranslatorConfig FromEnvironment() {
    HttpTranslatorConfig c;
    if (const char* v = std::getenv("TACTFUL_TRANSLATOR_ENDPOINT")) c.endpoint = v;
    if (const char* v = std::getenv("TACTFUL_TRANSLATOR_KEY")) c.api_key = v;
    if (const char* v = std::getenv("TACTFUL_TRANSLATOR_PIVOT")) c.pivot_language = v;
    return c;
  }
};

class HttpTranslatorClient : public TranslatorClient {
 public:
  explicit HttpTranslatorClient(HttpTranslatorConfig config) : config_(std::move(config)) {
    auto scheme = config_.endpoint.find("://");
    if (config_.endpoint.empty() || scheme == std::string::npos) {
      throw Error(ErrorCode::kConfig,
                  "translator endpoint must look like http://host:port/path "
                  "(set TACTFUL_TRANSLATOR_ENDPOINT)");
    }
    auto slash = config_.endpoint.find('/', scheme + 3);
    base_ = config_.endpoint.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : config_.endpoint.substr(slash);
  }

  std::string RoundTrip(const std::string& text) override {
    std::string pivot = Translate(text, config_.source_language, config_.pivot_language);
    return Translate(pivot, config_.pivot_language, config_.source_language);
  }

 private:
  std::string Translate(const std::string& text, const std::string& from, const std::string& to) {
    httplib::Client client(base_);
    auto secs = static_cast<time_t>(config_.timeout_seconds);
    auto usecs = static_cast<time_t>((config_.timeout_seconds - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
    nlohmann::json body = {{"text", text}, {"from", from}, {"to", to}};
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) {
      throw Error(ErrorCode::kTransport, "translate request failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kTransport, "translate request returned HTTP " + std::to_string(res->status));
    }
    try {
      return nlohmann::json::parse(res->body).at("translation").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kTransport, std::string("malformed translate response: ") + e.what());
    }
  }

  HttpTranslatorConfig config_;
  std::string base_;
  std::string path_;
};

struct FetchFailure {
  std::size_t index = 0;
  std::string utterance;
  std::string message;
};

struct FetchReport {
  std::vector<RoundTripPair> pairs;  // input order, successes only
  std::vector<FetchFailure> failures;
};

// Collects one round trip per utterance with up to `parallelism` requests in
// flight. Per-item failures are recorded, not thrown.
inline FetchReport FetchRoundTrips(const std::vector<std::string>& utterances,
                                   TranslatorClient& client, std::size_t parallelism = 4) {
  std::vector<std::optional<std::string>> results(utterances.size());
  std::vector<std::string> errors(utterances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < utterances.size(); i = next++) {
      try {
        results[i] = client.RoundTrip(utterances[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::size_t threads = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(1, utterances.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  FetchReport report;
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    if (results[i]) {
      report.pairs.push_back({utterances[i], *results[i]});
    } else {
      report.failures.push_back({i, utterances[i], errors[i]});
    }
  }
  return report;
}

}  // namespace tactful
