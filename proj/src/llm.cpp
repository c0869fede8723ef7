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
#include "jf/llm.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "jf/io.hpp"
#include "jf/util.hpp"

namespace jf {

std::string request_fingerprint(const GenerationRequest& request) {
  uint64_t h = fnv1a64(request.system_instruction);
  h = fnv1a64("\x1f", h);
  h = fnv1a64(request.user_content, h);
  return to_hex(h);
}

StubClient::StubClient(const std::filesystem::path& transcript_file, bool strict_mode)
    : id_("stub:" + transcript_file.filename().string()), strict_(strict_mode) {
  io::for_each_jsonl(transcript_file, [&](size_t lineno, const io::json& rec) {
    if (!rec.contains("response")) {
      throw ValidationError(transcript_file.string() + ":" + std::to_string(lineno) +
                            ": transcript record needs a response field");
    }
    std::string fp;
    if (rec.contains("fingerprint")) {
      fp = rec["fingerprint"].get<std::string>();
    } else if (rec.contains("instruction") && rec.contains("content")) {
      GenerationRequest req;
      req.system_instruction = rec["instruction"].get<std::string>();
      req.user_content = rec["content"].get<std::string>();
      fp = request_fingerprint(req);
    } else {
      throw ValidationError(transcript_file.string() + ":" + std::to_string(lineno) +
                            ": need fingerprint or instruction+content");
    }
    responses_[fp] = rec["response"].get<std::string>();
  });
}

GenerationResponse StubClient::generate(const GenerationRequest& request) {
  std::string fp = request_fingerprint(request);
  auto it = responses_.find(fp);
  if (it == responses_.end()) {
    if (strict_) {
      throw BackendError("stub transcript " + id_ + " has no response for fingerprint " + fp);
    }
    return {"", 0, id_};
  }
  return {it->second, 0, id_};
}

HttpClient::HttpClient(std::string url, std::string api_key, RetryPolicy retry,
                       Transport transport)
    : url_(std::move(url)), api_key_(std::move(api_key)), retry_(retry),
      transport_(std::move(transport)) {
  if (url_.empty()) throw ValidationError("llm endpoint url is empty");
  if (!transport_) {
    transport_ = [](const std::string& url, const std::string& key,
                    const std::string& body) -> HttpResult {
      // Split scheme://host[:port] from the path.
      auto scheme_end = url.find("://");
      if (scheme_end == std::string::npos) return {0, "", "malformed url: " + url};
      auto path_start = url.find('/', scheme_end + 3);
      std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
      std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
      httplib::Client client(base);
      client.set_connection_timeout(10);
      client.set_read_timeout(60);
      httplib::Headers headers;
      if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);
      auto res = client.Post(path, headers, body, "application/json");
      if (!res) return {0, "", httplib::to_string(res.error())};
      return {res->status, res->body, ""};
    };
  }
}

std::unique_ptr<HttpClient> HttpClient::from_env(RetryPolicy retry) {
  const char* url = std::getenv("JF_LLM_URL");
  if (url == nullptr || *url == '\0') {
    throw ValidationError("JF_LLM_URL is not set; cannot build the remote llm backend");
  }
  const char* key = std::getenv("JF_LLM_KEY");
  return std::make_unique<HttpClient>(url, key ? key : "", retry);
}

GenerationResponse HttpClient::generate(const GenerationRequest& request) {
  io::json body{{"messages",
                 io::json::array({io::json{{"role", "system"}, {"content", request.system_instruction}},
                                  io::json{{"role", "user"}, {"content", request.user_content}}})},
                {"max_tokens", request.max_tokens},
                {"temperature", request.temperature}};
  if (request.seed) body["seed"] = *request.seed;
  const std::string payload = body.dump();

  std::string last_error;
  for (int attempt = 0; attempt <= retry_.max_retries; ++attempt) {
    if (attempt > 0) {
      auto delay = std::chrono::milliseconds(retry_.base_delay_ms << (attempt - 1));
      std::this_thread::sleep_for(delay);
    }
    HttpResult res = transport_(url_, api_key_, payload);
    if (!res.error.empty()) {
      last_error = res.error;
      continue;  // transport failures are retryable
    }
    if (res.status == 429 || res.status >= 500) {
      last_error = "status " + std::to_string(res.status);
      continue;
    }
    if (res.status != 200) {
      throw BackendError("llm endpoint returned non-retryable status " +
                         std::to_string(res.status));
    }
    io::json parsed = io::json::parse(res.body, nullptr, false);
    if (parsed.is_discarded()) throw BackendError("llm endpoint returned malformed json");
    std::string text;
    if (parsed.contains("choices") && !parsed["choices"].empty()) {
      const auto& choice = parsed["choices"][0];
      if (choice.contains("message")) {
        text = choice["message"].value("content", "");
      } else {
        text = choice.value("text", "");
      }
    } else if (parsed.contains("text")) {
      text = parsed["text"].get<std::string>();
    } else {
      throw BackendError("llm endpoint response has no choices/text field");
    }
    return {text, attempt, backend_id()};
  }
  throw BackendError("llm endpoint failed after " + std::to_string(retry_.max_retries) +
                     " retries: " + last_error);
}

std::unique_ptr<TextGenClient> make_client(const std::string& spec, RetryPolicy retry) {
  if (spec.empty() || spec == "none") return nullptr;
  if (spec == "env") return HttpClient::from_env(retry);
  if (starts_with(spec, "stub:")) {
    std::string rest = spec.substr(5);
    bool strict = true;
    if (rest.size() > 8 && rest.substr(rest.size() - 8) == ":lenient") {
      strict = false;
      rest = rest.substr(0, rest.size() - 8);
    }
    return std::make_unique<StubClient>(rest, strict);
  }
  throw ValidationError("unknown llm backend spec: '" + spec + "' (expected stub:<path> or env)");
}

}  // namespace jf
