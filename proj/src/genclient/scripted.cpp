#include "charprobe/genclient/scripted.hpp"

#include "charprobe/common/error.hpp"
#include "charprobe/common/http_json.hpp"

namespace charprobe::genclient {

MockScript MockScript::load(const std::filesystem::path& path) {
  try {
    return from_json(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, "mock script " + path.string() + ": " + e.what());
  }
}

MockScript MockScript::from_json(const json& j) {
  MockScript s;
  for (const auto& r : j.value("rules", json::array())) {
    Rule rule{r.at("match").get<std::string>(), r.at("responses").get<std::vector<std::string>>()};
    if (rule.responses.empty()) throw Error(ErrorCode::InvalidConfig, "mock rule '" + rule.match + "' has no responses");
    s.rules.push_back(std::move(rule));
  }
  s.default_responses = j.value("default", std::vector<std::string>{});
  s.echo_prompt = j.value("echo_prompt", false);
  s.unreachable = j.value("unreachable", std::vector<std::string>{});
  return s;
}

ScriptedBackend::ScriptedBackend(MockScript script) : script_(std::move(script)) {
  try {
    for (const auto& r : script_.rules) rule_res_.emplace_back(r.match, std::regex::ECMAScript);
    for (const auto& u : script_.unreachable) unreachable_res_.emplace_back(u, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("mock script regex: ") + e.what());
  }
}

std::string ScriptedBackend::request(const GenerationRequest& req) {
  for (const auto& re : unreachable_res_) {
    if (std::regex_search(req.prompt, re)) {
      throw net::TransportFailure(net::TransportFailure::Kind::Unreachable, "scripted outage for prompt");
    }
  }
  const std::vector<std::string>* responses = &script_.default_responses;
  for (std::size_t i = 0; i < rule_res_.size(); ++i) {
    if (std::regex_search(req.prompt, rule_res_[i])) {
      responses = &script_.rules[i].responses;
      break;
    }
  }
  if (responses->empty()) throw Error(ErrorCode::MalformedResponse, "mock script has no response for prompt");

  std::size_t idx = 0;
  {
    std::lock_guard lock(mu_);
    ++calls_;
    idx = cursor_[req.prompt]++ % responses->size();
  }
  std::string out = (*responses)[idx];
  for (auto pos = out.find("{prompt}"); pos != std::string::npos; pos = out.find("{prompt}", pos + req.prompt.size())) {
    out.replace(pos, 8, req.prompt);
  }
  if (script_.echo_prompt) out = req.prompt + " " + out;
  return out;
}

std::size_t ScriptedBackend::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

}  // namespace charprobe::genclient
