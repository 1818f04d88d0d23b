#include "charprobe/genclient/collect.hpp"

#include "charprobe/common/error.hpp"

namespace charprobe::genclient {

std::vector<Entailment> CollectResult::valid() const {
  std::vector<Entailment> out;
  for (const auto& e : attempts) {
    if (e.valid) out.push_back(e);
  }
  return out;
}

CollectResult collect_valid(GenerationBackend& backend, const BackendHandle& handle,
                            const promptkit::PromptInstance& prompt, const corpus::Dictionary& dictionary,
                            const CollectOptions& opts) {
  if (opts.n_target < 1) throw Error(ErrorCode::InvalidArgument, "n_target must be >= 1");
  if (opts.max_attempts < opts.n_target) throw Error(ErrorCode::InvalidArgument, "max_attempts must be >= n_target");

  CollectResult result;
  GenerationRequest req = opts.defaults;
  req.prompt = prompt.rendered;

  auto slot = [&](const char* name) {
    auto it = prompt.slots.find(name);
    return it == prompt.slots.end() ? std::string() : it->second;
  };
  std::string prefix_id;
  if (prompt.kind == promptkit::PromptKind::EntityPrefix) prefix_id = prompt.template_id.substr(prompt.template_id.find('.') + 1);

  while (result.valid_count < opts.n_target && result.attempts.size() < opts.max_attempts) {
    const int attempt = static_cast<int>(result.attempts.size()) + 1;
    if (opts.defaults.seed) req.seed = *opts.defaults.seed + attempt - 1;

    Entailment e;
    e.attempt_index = attempt;
    e.id = make_entailment_id(handle.model_tag, prompt, attempt);
    e.prompt_key = prompt.key();
    e.template_id = prompt.template_id;
    e.kind = prompt.kind;
    e.entity = slot("entity");
    e.prefix_id = prefix_id;
    e.prompt = prompt.rendered;
    e.model_tag = handle.model_tag;
    e.text = generate(backend, handle, req);
    const auto verdict = is_valid_entailment(e.text, dictionary, opts.rules);
    e.valid = verdict.valid;
    e.reason = verdict.reason;
    if (e.valid) ++result.valid_count;
    result.attempts.push_back(std::move(e));
  }
  result.fail_count = result.attempts.size() - result.valid_count;
  result.exhausted = result.valid_count < opts.n_target;
  return result;
}

}  // namespace charprobe::genclient
