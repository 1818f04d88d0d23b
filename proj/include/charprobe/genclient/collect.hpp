#pragma once

#include <vector>

#include "charprobe/genclient/backend.hpp"
#include "charprobe/genclient/store.hpp"
#include "charprobe/genclient/validity.hpp"

namespace charprobe::genclient {

struct CollectOptions {
  std::size_t n_target = 10;
  std::size_t max_attempts = 100;
  GenerationRequest defaults;  // prompt is overwritten; seed, when set, is offset by the attempt index
  ValidityRules rules;
};

struct CollectResult {
  std::vector<Entailment> attempts;  // every generation, in issue order
  std::size_t valid_count = 0;
  std::size_t fail_count = 0;  // attempts - valid
  bool exhausted = false;      // max_attempts reached before n_target valid outputs

  std::vector<Entailment> valid() const;
};

// Generates until n_target valid continuations are collected or
// max_attempts is reached. Transport errors propagate.
CollectResult collect_valid(GenerationBackend& backend, const BackendHandle& handle,
                            const promptkit::PromptInstance& prompt, const corpus::Dictionary& dictionary,
                            const CollectOptions& opts);

}  // namespace charprobe::genclient
