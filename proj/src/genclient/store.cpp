#include "charprobe/genclient/store.hpp"

#include <fstream>

#include "charprobe/common/error.hpp"

namespace charprobe::genclient {

json Entailment::to_json() const {
  return {{"id", id},
          {"prompt_key", prompt_key},
          {"template_id", template_id},
          {"kind", std::string(promptkit::to_string(kind))},
          {"entity", entity},
          {"prefix_id", prefix_id},
          {"prompt", prompt},
          {"model_tag", model_tag},
          {"attempt_index", attempt_index},
          {"text", text},
          {"valid", valid},
          {"reason", std::string(to_string(reason))}};
}

Entailment Entailment::from_json(const json& j) {
  Entailment e;
  e.id = j.at("id").get<std::string>();
  e.prompt_key = j.at("prompt_key").get<std::string>();
  e.template_id = j.at("template_id").get<std::string>();
  e.kind = promptkit::kind_from_string(j.at("kind").get<std::string>());
  e.entity = j.value("entity", "");
  e.prefix_id = j.value("prefix_id", "");
  e.prompt = j.at("prompt").get<std::string>();
  e.model_tag = j.at("model_tag").get<std::string>();
  e.attempt_index = j.at("attempt_index").get<int>();
  e.text = j.at("text").get<std::string>();
  e.valid = j.at("valid").get<bool>();
  e.reason = validity_reason_from_string(j.at("reason").get<std::string>());
  if (e.attempt_index < 1) throw Error(ErrorCode::MalformedRecord, "attempt_index must be >= 1");
  return e;
}

namespace {

std::string slug(std::string_view s) {
  std::string out;
  bool sep = false;
  for (unsigned char c : s) {
    if (std::isalnum(c)) {
      if (sep && !out.empty()) out.push_back('_');
      sep = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      sep = true;
    }
  }
  return out.empty() ? "x" : out;
}

}  // namespace

std::string make_entailment_id(const std::string& model_tag, const promptkit::PromptInstance& prompt, int attempt) {
  std::string subject;
  if (prompt.kind == promptkit::PromptKind::EntityPrefix) {
    subject = slug(prompt.slots.at("entity"));
  } else {
    const auto key = prompt.key();
    subject = key.substr(key.find('|') + 1);
  }
  return model_tag + "/" + prompt.template_id + "/" + subject + "/" + std::to_string(attempt);
}

EntailmentStore::EntailmentStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream touch(path_, std::ios::binary | std::ios::app);
  if (!touch) throw Error(ErrorCode::IoError, "cannot open store " + path_.string());
}

void EntailmentStore::append(const std::vector<Entailment>& batch) {
  std::string chunk;
  for (const auto& e : batch) {
    chunk += e.to_json().dump();
    chunk += '\n';
  }
  std::lock_guard lock(mu_);
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  out.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "append to " + path_.string() + " failed");
}

std::vector<Entailment> EntailmentStore::load(const std::filesystem::path& path) {
  auto read = read_jsonl(path);
  if (!read.errors.empty()) throw Error(ErrorCode::MalformedRecord, read.errors.front());
  std::vector<Entailment> out;
  out.reserve(read.records.size());
  for (const auto& rec : read.records) {
    try {
      out.push_back(Entailment::from_json(rec.value));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedRecord, path.string() + ":" + std::to_string(rec.line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace charprobe::genclient
