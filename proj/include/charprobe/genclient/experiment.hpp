#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "charprobe/genclient/collect.hpp"

namespace charprobe::genclient {

struct ModelBackend {
  BackendHandle handle;
  std::shared_ptr<GenerationBackend> backend;
};

enum class PromptStatus { Complete, Exhausted, Failed };
std::string_view to_string(PromptStatus s);

struct PromptOutcome {
  std::string prompt_key;
  std::string template_id;
  std::string model_tag;
  PromptStatus status = PromptStatus::Complete;
  std::size_t attempts = 0;
  std::size_t valid = 0;
  std::size_t fail_count = 0;
  std::string error;
};

struct RunManifest {
  std::string run_id;
  std::vector<BackendHandle> backends;
  GenerationRequest params;
  std::size_t n_target = 0;
  std::size_t max_attempts = 0;
  ValidityRules rules;
  std::string template_catalog_hash;
  std::string config_hash;
  std::vector<PromptOutcome> outcomes;

  json to_json() const;
  static RunManifest from_json(const json& j);
  std::size_t failed_count() const;
};

struct ExperimentOptions {
  CollectOptions collect;
  std::size_t parallelism = 1;
  std::string run_id;
  std::string template_catalog_hash;
  std::string config_hash;
};

struct ExperimentResult {
  RunManifest manifest;
  std::vector<Entailment> entailments;  // model order, then prompt order, then attempt order
};

// Runs every prompt against every backend. A prompt whose backend fails is
// marked Failed in the manifest; the rest of the run continues. When a
// store is given, each prompt's attempts are appended in deterministic order.
ExperimentResult run_experiment(const std::vector<ModelBackend>& backends,
                                const std::vector<promptkit::PromptInstance>& prompts,
                                const corpus::Dictionary& dictionary, const ExperimentOptions& opts,
                                EntailmentStore* store = nullptr);

}  // namespace charprobe::genclient
