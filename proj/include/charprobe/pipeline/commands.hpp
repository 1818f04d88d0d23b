#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "charprobe/annotation/store.hpp"
#include "charprobe/embedkit/embedding.hpp"
#include "charprobe/genclient/experiment.hpp"
#include "charprobe/pipeline/config.hpp"
#include "charprobe/report/bundle.hpp"

namespace charprobe::pipeline {

// Every command validates its inputs before writing anything and throws
// charprobe::Error on failure. Progress lines go to `log`.

struct CleanSummary {
  std::size_t tweets_read = 0;
  std::size_t tweets_skipped = 0;  // unreadable or duplicate records
  std::size_t kept = 0;
  std::size_t rejected_empty = 0;
  std::size_t rejected_ratio = 0;
  std::size_t articles = 0;
  std::size_t articles_skipped = 0;
};

// Writes clean/tweets.jsonl, clean/articles.jsonl and clean/tally.json.
// Throws EmptySet when nothing survives.
CleanSummary cmd_clean(const RunConfig& cfg, std::ostream& log);

// Entity x prefix prompts (entity order, then prefix order), then cleaned
// tweet x template prompts when tweet templates are configured.
std::vector<promptkit::PromptInstance> build_prompts(const RunConfig& cfg);

std::vector<genclient::ModelBackend> make_backends(const RunConfig& cfg);

// Writes store/entailments.jsonl and store/manifest.json and prints the
// per-prompt fail counts. Throws BackendUnreachable when every prompt failed.
genclient::RunManifest cmd_generate(const RunConfig& cfg, std::ostream& log);

// "hash", "hash:<dim>" or "hash:<dim>:<seed>" give the in-process hash
// embedder; anything else is an HTTP endpoint.
std::unique_ptr<embedkit::EmbeddingBackend> make_embedder(const std::string& endpoint);

struct EvaluateSummary {
  std::size_t scored = 0;  // valid entity entailments
  bool embeddings = false;
  std::size_t chosen_k = 0;
  std::vector<std::string> notes;  // skipped steps and why
};

// Writes eval/metrics.jsonl and eval/evaluation.json.
EvaluateSummary cmd_evaluate(const RunConfig& cfg, std::ostream& log);

// Store over the run's valid entailments, replaying annotations/log.jsonl.
annotation::AnnotationStore open_annotation_store(const RunConfig& cfg);

// Submits every CSV row through the store (same checks as the service).
std::size_t cmd_import_annotations(const RunConfig& cfg, const fs::path& csv, std::ostream& log);

report::ReportInputs collect_report_inputs(const RunConfig& cfg);

// Writes reports/{run_id}/. Throws EmptySet when nothing was computed.
report::ReportBundle cmd_report(const RunConfig& cfg, std::ostream& log);

}  // namespace charprobe::pipeline
