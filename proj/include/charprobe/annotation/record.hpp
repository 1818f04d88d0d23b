#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "charprobe/common/files.hpp"

namespace charprobe::annotation {

struct AnnotationRecord {
  std::string entailment_id;
  std::string annotator_id;
  bool relevant = false;
  bool characterizing = false;
  std::optional<bool> correct;  // expert correctness judgment; not used by any table
  std::string timestamp;        // ISO 8601 UTC

  json to_json() const;
  // Throws MalformedRecord on missing or mistyped fields.
  static AnnotationRecord from_json(const json& j);
};

// "2026-01-31T12:00:00Z"
std::string utc_timestamp_now();

// CSV with header entailment_id,annotator_id,relevant,characterizing,timestamp.
// Booleans accept true/false, 1/0, yes/no.
std::vector<AnnotationRecord> read_annotations_csv(const std::filesystem::path& path);
std::vector<AnnotationRecord> parse_annotations_csv(std::string_view body, const std::string& origin = "<csv>");
std::string annotations_csv(const std::vector<AnnotationRecord>& records);

}  // namespace charprobe::annotation
