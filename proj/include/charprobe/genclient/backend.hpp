#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "charprobe/common/files.hpp"

namespace charprobe::genclient {

struct BackendHandle {
  std::string endpoint;   // "http://host:port", or "mock:<script.json>" for the in-process scripted backend
  std::string model_tag;  // which domain-adapted model answers (per media house / tweet corpus / vanilla)
  std::chrono::milliseconds timeout{30000};
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{200};
  bool reference = false;  // the unadapted model used as the comparison baseline

  void validate() const;
};

struct GenerationRequest {
  std::string prompt;
  int max_new_tokens = 40;
  double temperature = 0.9;
  double top_p = 0.95;
  std::optional<std::int64_t> seed;

  void validate() const;
  json to_json() const;
};

// One round trip to a generation backend. Implementations throw
// net::TransportFailure for retryable failures and
// Error(MalformedResponse) for replies that cannot be interpreted.
class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;
  virtual std::string request(const GenerationRequest& req) = 0;
};

// POST {endpoint}/generate with the request fields plus "model"; expects {"text": ...}.
class HttpGenerationBackend : public GenerationBackend {
 public:
  explicit HttpGenerationBackend(const BackendHandle& handle);
  std::string request(const GenerationRequest& req) override;

 private:
  std::string endpoint_;
  std::string model_tag_;
  std::chrono::milliseconds timeout_;
};

// "mock:<path>" -> ScriptedBackend, anything else -> HTTP.
std::unique_ptr<GenerationBackend> make_backend(const BackendHandle& handle);

// Removes an echoed prompt: the longest common prefix of response and prompt
// is dropped when it covers the whole prompt (ignoring trailing whitespace
// in the prompt). Leading/trailing whitespace of the continuation is trimmed.
std::string strip_prompt(std::string_view response, std::string_view prompt);

// Issues the request with up to handle.max_retries retries on transport
// failure (exponential backoff) and returns the continuation only.
// Throws Error(BackendUnreachable | Timeout | MalformedResponse).
std::string generate(GenerationBackend& backend, const BackendHandle& handle, const GenerationRequest& req);

}  // namespace charprobe::genclient
