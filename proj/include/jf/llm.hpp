// Copyright 2026 The JudgeFuse Authors
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
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>

namespace jf {

struct GenerationRequest {
  std::string system_instruction;
  std::string user_content;
  int max_tokens = 1024;
  double temperature = 0.0;
  std::optional<uint64_t> seed;
};

struct GenerationResponse {
  std::string text;
  int retries = 0;
  std::string backend_id;
};

// Fingerprint ignores max_tokens/temperature so recorded stubs survive
// benign config churn.
std::string request_fingerprint(const GenerationRequest& request);

class TextGenClient {
 public:
  virtual ~TextGenClient() = default;
  virtual GenerationResponse generate(const GenerationRequest& request) = 0;
  virtual std::string backend_id() const = 0;
};

// Canned transcript backend. File format: JSONL records with either
// {"fingerprint": ..., "response": ...} or
// {"instruction": ..., "content": ..., "response": ...}.
// strict_mode makes an unknown fingerprint an error instead of returning
// empty, which keeps recorded tests from drifting silently.
class StubClient : public TextGenClient {
 public:
  StubClient(const std::filesystem::path& transcript_file, bool strict_mode = true);
  GenerationResponse generate(const GenerationRequest& request) override;
  std::string backend_id() const override { return id_; }

 private:
  std::string id_;
  bool strict_;
  std::unordered_map<std::string, std::string> responses_;
};

struct RetryPolicy {
  int max_retries = 3;
  int base_delay_ms = 100;  // doubles per attempt
};

struct HttpResult {
  int status = 0;
  std::string body;
  std::string error;  // nonempty on transport failure
};

// POSTs a chat-style completion request to the endpoint named by the
// JF_LLM_URL env var (bearer key from JF_LLM_KEY; never from config
// files). Transport is injectable for tests.
class HttpClient : public TextGenClient {
 public:
  using Transport = std::function<HttpResult(const std::string& url, const std::string& auth_key,
                                             const std::string& json_body)>;

  HttpClient(std::string url, std::string api_key, RetryPolicy retry = {},
             Transport transport = nullptr);

  // Reads JF_LLM_URL / JF_LLM_KEY.
  static std::unique_ptr<HttpClient> from_env(RetryPolicy retry = {});

  GenerationResponse generate(const GenerationRequest& request) override;
  std::string backend_id() const override { return "endpoint:" + url_; }

 private:
  std::string url_;
  std::string api_key_;
  RetryPolicy retry_;
  Transport transport_;
};

// Parses a backend spec: "stub:<path>" (append ":lenient" to disable
// strict mode) or "env". Returns nullptr for the empty spec, which
// callers treat as "use the deterministic fallback".
std::unique_ptr<TextGenClient> make_client(const std::string& spec, RetryPolicy retry = {});

}  // namespace jf
