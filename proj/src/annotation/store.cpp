#include "charprobe/annotation/store.hpp"

#include <fstream>
#include <mutex>
#include <set>

#include "charprobe/common/error.hpp"

namespace charprobe::annotation {

AnnotationStore::AnnotationStore(std::vector<genclient::Entailment> entailments,
                                 std::optional<std::filesystem::path> log_path)
    : entailments_(std::move(entailments)), log_path_(std::move(log_path)) {
  for (std::size_t i = 0; i < entailments_.size(); ++i) index_.emplace(entailments_[i].id, i);
  if (!log_path_ || !fs::exists(*log_path_)) return;
  auto log = read_jsonl(*log_path_);
  if (!log.errors.empty()) throw Error(ErrorCode::MalformedRecord, log.errors.front());
  for (const auto& line : log.records) {
    auto r = AnnotationRecord::from_json(line.value);
    validate(r);
    apply(r);
  }
}

void AnnotationStore::validate(const AnnotationRecord& r) const {
  if (!index_.count(r.entailment_id)) throw Error(ErrorCode::UnknownEntailment, "unknown entailment '" + r.entailment_id + "'");
  if (r.annotator_id.empty()) throw Error(ErrorCode::MalformedRecord, "empty annotator id");
  if (r.characterizing && !r.relevant) {
    throw Error(ErrorCode::InvariantViolation, "characterizing output must also be relevant");
  }
}

void AnnotationStore::apply(const AnnotationRecord& r) {
  current_[{r.entailment_id, r.annotator_id}] = r;
  history_.push_back(r);
}

AnnotationRecord AnnotationStore::submit(AnnotationRecord record) {
  validate(record);
  if (record.timestamp.empty()) record.timestamp = utc_timestamp_now();
  std::unique_lock lock(mu_);
  if (log_path_) {
    if (log_path_->has_parent_path()) fs::create_directories(log_path_->parent_path());
    std::ofstream f(*log_path_, std::ios::app | std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot append to " + log_path_->string());
    f << record.to_json().dump() << '\n';
    f.flush();
    if (!f) throw Error(ErrorCode::IoError, "write failed on " + log_path_->string());
  }
  apply(record);
  return record;
}

std::vector<AnnotationRecord> AnnotationStore::records() const {
  std::shared_lock lock(mu_);
  std::vector<AnnotationRecord> out;
  out.reserve(current_.size());
  for (const auto& [k, v] : current_) out.push_back(v);
  return out;
}

std::vector<AnnotationRecord> AnnotationStore::history() const {
  std::shared_lock lock(mu_);
  return history_;
}

std::vector<std::string> AnnotationStore::annotators() const {
  std::shared_lock lock(mu_);
  std::set<std::string> s;
  for (const auto& [k, v] : current_) s.insert(k.second);
  return {s.begin(), s.end()};
}

std::vector<genclient::Entailment> AnnotationStore::tasks(const std::string& annotator, std::size_t limit) const {
  std::shared_lock lock(mu_);
  std::vector<genclient::Entailment> out;
  for (const auto& e : entailments_) {
    if (out.size() >= limit) break;
    if (!current_.count({e.id, annotator})) out.push_back(e);
  }
  return out;
}

std::optional<genclient::Entailment> AnnotationStore::find(const std::string& entailment_id) const {
  auto it = index_.find(entailment_id);
  if (it == index_.end()) return std::nullopt;
  return entailments_[it->second];
}

std::size_t AnnotationStore::size() const {
  std::shared_lock lock(mu_);
  return current_.size();
}

}  // namespace charprobe::annotation
