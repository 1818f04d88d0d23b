#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <regex>
#include <string>
#include <vector>

#include "charprobe/genclient/backend.hpp"

namespace charprobe::genclient {

// Deterministic stand-in for a language model, driven by a script:
//
//   {"rules": [{"match": "<ECMAScript regex>", "responses": ["...", ...]}],
//    "default": ["..."],
//    "echo_prompt": false,
//    "unreachable": ["<regex>"]}
//
// The first rule whose regex matches the prompt answers; its responses are
// served in order per distinct prompt and cycle. "{prompt}" in a response is
// replaced by the prompt. Prompts matching an "unreachable" regex fail with a
// transport error.
struct MockScript {
  struct Rule {
    std::string match;
    std::vector<std::string> responses;
  };
  std::vector<Rule> rules;
  std::vector<std::string> default_responses;
  bool echo_prompt = false;
  std::vector<std::string> unreachable;

  static MockScript load(const std::filesystem::path& path);
  static MockScript from_json(const json& j);
};

class ScriptedBackend : public GenerationBackend {
 public:
  explicit ScriptedBackend(MockScript script);
  std::string request(const GenerationRequest& req) override;

  // Requests answered with a response.
  std::size_t calls() const;

 private:
  MockScript script_;
  std::vector<std::regex> rule_res_;
  std::vector<std::regex> unreachable_res_;
  mutable std::mutex mu_;
  std::map<std::string, std::size_t> cursor_;
  std::size_t calls_ = 0;
};

}  // namespace charprobe::genclient
