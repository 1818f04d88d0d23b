#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "charprobe/annotation/record.hpp"
#include "charprobe/genclient/store.hpp"

namespace charprobe::annotation {

// Current labels keyed by (entailment, annotator), backed by an append-only
// jsonl log of every submission. Reopening the log replays it.
class AnnotationStore {
 public:
  // Replays log_path if it exists. With no path the store is memory-only.
  AnnotationStore(std::vector<genclient::Entailment> entailments, std::optional<std::filesystem::path> log_path = {});

  // Upserts; UnknownEntailment or InvariantViolation on bad input. A blank
  // timestamp is filled with the current UTC time.
  AnnotationRecord submit(AnnotationRecord record);

  // Current state, sorted by (entailment_id, annotator_id).
  std::vector<AnnotationRecord> records() const;
  std::vector<AnnotationRecord> history() const;
  std::vector<std::string> annotators() const;

  // Entailments in store order that the annotator has not labeled yet.
  std::vector<genclient::Entailment> tasks(const std::string& annotator, std::size_t limit) const;

  std::optional<genclient::Entailment> find(const std::string& entailment_id) const;
  const std::vector<genclient::Entailment>& entailments() const { return entailments_; }
  std::size_t size() const;

 private:
  void apply(const AnnotationRecord& r);
  void validate(const AnnotationRecord& r) const;

  std::vector<genclient::Entailment> entailments_;
  std::unordered_map<std::string, std::size_t> index_;
  std::optional<std::filesystem::path> log_path_;
  mutable std::shared_mutex mu_;
  std::map<std::pair<std::string, std::string>, AnnotationRecord> current_;
  std::vector<AnnotationRecord> history_;
};

}  // namespace charprobe::annotation
