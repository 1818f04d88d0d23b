#include "charprobe/annotation/record.hpp"

#include <chrono>
#include <ctime>

#include "charprobe/common/csv.hpp"
#include "charprobe/common/error.hpp"
#include "charprobe/common/text.hpp"

namespace charprobe::annotation {

json AnnotationRecord::to_json() const {
  json j{{"entailment_id", entailment_id},
         {"annotator_id", annotator_id},
         {"relevant", relevant},
         {"characterizing", characterizing},
         {"timestamp", timestamp}};
  if (correct) j["correct"] = *correct;
  return j;
}

AnnotationRecord AnnotationRecord::from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::MalformedRecord, "annotation must be a JSON object");
  auto str = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string() || j[key].get<std::string>().empty()) {
      throw Error(ErrorCode::MalformedRecord, std::string("annotation needs a non-empty string '") + key + "'");
    }
    return j[key].get<std::string>();
  };
  auto flag = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_boolean()) {
      throw Error(ErrorCode::MalformedRecord, std::string("annotation needs a boolean '") + key + "'");
    }
    return j[key].get<bool>();
  };
  AnnotationRecord r;
  r.entailment_id = str("entailment_id");
  r.annotator_id = str("annotator_id");
  r.relevant = flag("relevant");
  r.characterizing = flag("characterizing");
  if (j.contains("correct") && !j["correct"].is_null()) r.correct = flag("correct");
  if (j.contains("timestamp") && !j["timestamp"].is_null()) {
    if (!j["timestamp"].is_string()) throw Error(ErrorCode::MalformedRecord, "timestamp must be a string");
    r.timestamp = j["timestamp"].get<std::string>();
  }
  return r;
}

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

bool parse_bool(const std::string& raw, const std::string& where) {
  const auto v = text::to_lower(text::trim(raw));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::MalformedRecord, where + ": not a boolean: '" + raw + "'");
}

}  // namespace

std::vector<AnnotationRecord> parse_annotations_csv(std::string_view body, const std::string& origin) {
  const auto rows = parse_csv(body);
  if (rows.empty()) return {};
  const std::vector<std::string> expected{"entailment_id", "annotator_id", "relevant", "characterizing", "timestamp"};
  std::vector<std::size_t> col(expected.size(), SIZE_MAX);
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    const auto name = text::trim(rows[0][i]);
    for (std::size_t e = 0; e < expected.size(); ++e) {
      if (name == expected[e]) col[e] = i;
    }
  }
  for (std::size_t e = 0; e < expected.size(); ++e) {
    if (col[e] == SIZE_MAX) throw Error(ErrorCode::MalformedRecord, origin + ": missing column '" + expected[e] + "'");
  }
  std::vector<AnnotationRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto where = origin + ":" + std::to_string(r + 1);
    const auto& row = rows[r];
    auto cell = [&](std::size_t e) -> std::string {
      if (col[e] >= row.size()) throw Error(ErrorCode::MalformedRecord, where + ": short row");
      return text::trim(row[col[e]]);
    };
    AnnotationRecord rec;
    rec.entailment_id = cell(0);
    rec.annotator_id = cell(1);
    rec.relevant = parse_bool(cell(2), where);
    rec.characterizing = parse_bool(cell(3), where);
    rec.timestamp = cell(4);
    if (rec.entailment_id.empty() || rec.annotator_id.empty()) {
      throw Error(ErrorCode::MalformedRecord, where + ": empty id");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<AnnotationRecord> read_annotations_csv(const std::filesystem::path& path) {
  return parse_annotations_csv(read_file(path), path.string());
}

std::string annotations_csv(const std::vector<AnnotationRecord>& records) {
  std::string out = csv_row({"entailment_id", "annotator_id", "relevant", "characterizing", "timestamp"});
  for (const auto& r : records) {
    out += csv_row({r.entailment_id, r.annotator_id, r.relevant ? "true" : "false",
                    r.characterizing ? "true" : "false", r.timestamp});
  }
  return out;
}

}  // namespace charprobe::annotation
