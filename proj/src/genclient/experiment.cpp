#include "charprobe/genclient/experiment.hpp"

#include <atomic>
#include <condition_variable>
#include <optional>
#include <thread>

#include "charprobe/common/error.hpp"

namespace charprobe::genclient {

std::string_view to_string(PromptStatus s) {
  switch (s) {
    case PromptStatus::Complete: return "complete";
    case PromptStatus::Exhausted: return "exhausted";
    case PromptStatus::Failed: return "failed";
  }
  return "failed";
}

namespace {

PromptStatus status_from_string(std::string_view s) {
  if (s == "complete") return PromptStatus::Complete;
  if (s == "exhausted") return PromptStatus::Exhausted;
  if (s == "failed") return PromptStatus::Failed;
  throw Error(ErrorCode::MalformedRecord, "unknown prompt status '" + std::string(s) + "'");
}

}  // namespace

json RunManifest::to_json() const {
  json j;
  j["run_id"] = run_id;
  j["backends"] = json::array();
  for (const auto& b : backends) {
    j["backends"].push_back({{"model_tag", b.model_tag},
                             {"endpoint", b.endpoint},
                             {"reference", b.reference},
                             {"timeout_ms", b.timeout.count()},
                             {"max_retries", b.max_retries}});
  }
  json p = params.to_json();
  p.erase("prompt");
  j["params"] = p;
  j["n_target"] = n_target;
  j["max_attempts"] = max_attempts;
  j["validity"] = {{"min_word_tokens", rules.min_word_tokens},
                   {"min_english_ratio", rules.min_english_ratio},
                   {"token_floor", rules.token_floor}};
  j["template_catalog_hash"] = template_catalog_hash;
  j["config_hash"] = config_hash;
  j["prompts"] = json::array();
  for (const auto& o : outcomes) {
    j["prompts"].push_back({{"prompt_key", o.prompt_key},
                            {"template_id", o.template_id},
                            {"model_tag", o.model_tag},
                            {"status", std::string(to_string(o.status))},
                            {"attempts", o.attempts},
                            {"valid", o.valid},
                            {"fail_count", o.fail_count},
                            {"error", o.error}});
  }
  return j;
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  m.run_id = j.value("run_id", "");
  for (const auto& b : j.at("backends")) {
    BackendHandle h;
    h.model_tag = b.at("model_tag").get<std::string>();
    h.endpoint = b.at("endpoint").get<std::string>();
    h.reference = b.value("reference", false);
    h.timeout = std::chrono::milliseconds(b.value("timeout_ms", 30000));
    h.max_retries = b.value("max_retries", 3);
    m.backends.push_back(std::move(h));
  }
  const auto& p = j.at("params");
  m.params.max_new_tokens = p.at("max_new_tokens").get<int>();
  m.params.temperature = p.at("temperature").get<double>();
  m.params.top_p = p.at("top_p").get<double>();
  if (!p.at("seed").is_null()) m.params.seed = p.at("seed").get<std::int64_t>();
  m.n_target = j.at("n_target").get<std::size_t>();
  m.max_attempts = j.at("max_attempts").get<std::size_t>();
  if (j.contains("validity")) {
    const auto& v = j["validity"];
    m.rules.min_word_tokens = v.at("min_word_tokens").get<std::size_t>();
    m.rules.min_english_ratio = v.at("min_english_ratio").get<double>();
    m.rules.token_floor = v.at("token_floor").get<std::size_t>();
  }
  m.template_catalog_hash = j.value("template_catalog_hash", "");
  m.config_hash = j.value("config_hash", "");
  for (const auto& o : j.at("prompts")) {
    PromptOutcome out;
    out.prompt_key = o.at("prompt_key").get<std::string>();
    out.template_id = o.at("template_id").get<std::string>();
    out.model_tag = o.at("model_tag").get<std::string>();
    out.status = status_from_string(o.at("status").get<std::string>());
    out.attempts = o.at("attempts").get<std::size_t>();
    out.valid = o.at("valid").get<std::size_t>();
    out.fail_count = o.at("fail_count").get<std::size_t>();
    out.error = o.value("error", "");
    m.outcomes.push_back(std::move(out));
  }
  return m;
}

std::size_t RunManifest::failed_count() const {
  std::size_t n = 0;
  for (const auto& o : outcomes) n += o.status == PromptStatus::Failed;
  return n;
}

ExperimentResult run_experiment(const std::vector<ModelBackend>& backends,
                                const std::vector<promptkit::PromptInstance>& prompts,
                                const corpus::Dictionary& dictionary, const ExperimentOptions& opts,
                                EntailmentStore* store) {
  if (prompts.empty()) throw Error(ErrorCode::EmptyPromptList, "no prompts to run");
  if (backends.empty()) throw Error(ErrorCode::InvalidConfig, "no generation backends configured");
  opts.collect.defaults.validate();

  struct Job {
    const ModelBackend* model;
    const promptkit::PromptInstance* prompt;
  };
  std::vector<Job> jobs;
  for (const auto& b : backends) {
    for (const auto& p : prompts) jobs.push_back({&b, &p});
  }

  struct Done {
    PromptOutcome outcome;
    std::vector<Entailment> attempts;
  };
  std::vector<std::optional<Done>> done(jobs.size());
  std::mutex commit_mu;
  std::size_t next_commit = 0;

  // Commits finished jobs to the store strictly in job order so the file is
  // identical regardless of scheduling.
  auto commit_ready = [&] {
    while (next_commit < jobs.size() && done[next_commit]) {
      if (store) store->append(done[next_commit]->attempts);
      ++next_commit;
    }
  };

  auto run_job = [&](std::size_t i) {
    const auto& job = jobs[i];
    Done d;
    d.outcome.prompt_key = job.prompt->key();
    d.outcome.template_id = job.prompt->template_id;
    d.outcome.model_tag = job.model->handle.model_tag;
    try {
      auto r = collect_valid(*job.model->backend, job.model->handle, *job.prompt, dictionary, opts.collect);
      d.outcome.status = r.exhausted ? PromptStatus::Exhausted : PromptStatus::Complete;
      d.outcome.attempts = r.attempts.size();
      d.outcome.valid = r.valid_count;
      d.outcome.fail_count = r.fail_count;
      d.attempts = std::move(r.attempts);
    } catch (const std::exception& e) {
      d.outcome.status = PromptStatus::Failed;
      d.outcome.error = e.what();
    }
    std::lock_guard lock(commit_mu);
    done[i] = std::move(d);
    commit_ready();
  };

  const std::size_t width = std::max<std::size_t>(1, std::min(opts.parallelism, jobs.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(width);
  for (std::size_t w = 0; w < width; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(i);
    });
  }
  workers.clear();  // joins

  ExperimentResult result;
  auto& m = result.manifest;
  m.run_id = opts.run_id;
  for (const auto& b : backends) m.backends.push_back(b.handle);
  m.params = opts.collect.defaults;
  m.params.prompt.clear();
  m.n_target = opts.collect.n_target;
  m.max_attempts = opts.collect.max_attempts;
  m.rules = opts.collect.rules;
  m.template_catalog_hash = opts.template_catalog_hash;
  m.config_hash = opts.config_hash;
  for (auto& d : done) {
    m.outcomes.push_back(d->outcome);
    for (auto& e : d->attempts) result.entailments.push_back(std::move(e));
  }
  return result;
}

}  // namespace charprobe::genclient
