#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "charprobe/common/files.hpp"
#include "charprobe/genclient/validity.hpp"
#include "charprobe/promptkit/render.hpp"

namespace charprobe::genclient {

struct Entailment {
  std::string id;
  std::string prompt_key;
  std::string template_id;
  promptkit::PromptKind kind = promptkit::PromptKind::EntityPrefix;
  std::string entity;     // empty for tweet prompts
  std::string prefix_id;  // empty for tweet prompts
  std::string prompt;
  std::string model_tag;
  int attempt_index = 1;
  std::string text;  // continuation only
  bool valid = false;
  ValidityReason reason = ValidityReason::Empty;

  json to_json() const;
  static Entailment from_json(const json& j);
};

std::string make_entailment_id(const std::string& model_tag, const promptkit::PromptInstance& prompt, int attempt);

// Append-only line-delimited store. Appends are serialized.
class EntailmentStore {
 public:
  explicit EntailmentStore(std::filesystem::path path);

  void append(const std::vector<Entailment>& batch);
  const std::filesystem::path& path() const { return path_; }

  static std::vector<Entailment> load(const std::filesystem::path& path);

 private:
  std::filesystem::path path_;
  std::mutex mu_;
};

}  // namespace charprobe::genclient
