#include "charprobe/genclient/backend.hpp"

#include <cmath>
#include <thread>

#include "charprobe/common/error.hpp"
#include "charprobe/common/http_json.hpp"
#include "charprobe/common/text.hpp"
#include "charprobe/genclient/scripted.hpp"

namespace charprobe::genclient {

void BackendHandle::validate() const {
  if (model_tag.empty()) throw Error(ErrorCode::InvalidConfig, "backend model_tag must be non-empty");
  if (endpoint.empty()) throw Error(ErrorCode::InvalidConfig, "backend '" + model_tag + "' has no endpoint");
  if (timeout.count() <= 0) throw Error(ErrorCode::InvalidConfig, "backend '" + model_tag + "' timeout must be > 0");
  if (max_retries < 0) throw Error(ErrorCode::InvalidConfig, "backend '" + model_tag + "' max_retries must be >= 0");
}

void GenerationRequest::validate() const {
  if (max_new_tokens < 1) throw Error(ErrorCode::InvalidArgument, "max_new_tokens must be >= 1");
  if (!(temperature >= 0.0)) throw Error(ErrorCode::InvalidArgument, "temperature must be >= 0");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "top_p must be in (0,1]");
}

json GenerationRequest::to_json() const {
  return {{"prompt", prompt},
          {"max_new_tokens", max_new_tokens},
          {"temperature", temperature},
          {"top_p", top_p},
          {"seed", seed ? json(*seed) : json(nullptr)}};
}

HttpGenerationBackend::HttpGenerationBackend(const BackendHandle& handle)
    : endpoint_(handle.endpoint), model_tag_(handle.model_tag), timeout_(handle.timeout) {}

std::string HttpGenerationBackend::request(const GenerationRequest& req) {
  json body = req.to_json();
  body["model"] = model_tag_;
  const json reply = net::post_json(net::parse_endpoint(endpoint_), "/generate", body, timeout_);
  auto it = reply.find("text");
  if (!reply.is_object() || it == reply.end() || !it->is_string()) {
    throw Error(ErrorCode::MalformedResponse, "generation reply lacks a string 'text' field");
  }
  return it->get<std::string>();
}

std::unique_ptr<GenerationBackend> make_backend(const BackendHandle& handle) {
  handle.validate();
  constexpr std::string_view kMock = "mock:";
  if (handle.endpoint.rfind(kMock, 0) == 0) {
    return std::make_unique<ScriptedBackend>(MockScript::load(handle.endpoint.substr(kMock.size())));
  }
  return std::make_unique<HttpGenerationBackend>(handle);
}

std::string strip_prompt(std::string_view response, std::string_view prompt) {
  std::size_t lcp = 0;
  while (lcp < response.size() && lcp < prompt.size() && response[lcp] == prompt[lcp]) ++lcp;
  const bool whole_prompt = !prompt.empty() && text::trim(prompt.substr(lcp)).empty() && lcp > 0;
  std::string_view rest = whole_prompt ? response.substr(lcp) : response;
  return text::trim(rest);
}

std::string generate(GenerationBackend& backend, const BackendHandle& handle, const GenerationRequest& req) {
  req.validate();
  for (int attempt = 0;; ++attempt) {
    try {
      return strip_prompt(backend.request(req), req.prompt);
    } catch (const net::TransportFailure& failure) {
      if (attempt >= handle.max_retries) {
        const auto code = failure.kind() == net::TransportFailure::Kind::Timeout ? ErrorCode::Timeout
                                                                                  : ErrorCode::BackendUnreachable;
        throw Error(code, "backend '" + handle.model_tag + "' after " + std::to_string(attempt + 1) +
                              " attempt(s): " + failure.what());
      }
      const auto delay = handle.backoff_base * (1LL << std::min(attempt, 16));
      std::this_thread::sleep_for(delay);
    }
  }
}

}  // namespace charprobe::genclient
