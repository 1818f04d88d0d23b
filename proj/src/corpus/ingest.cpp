#include "charprobe/corpus/ingest.hpp"

#include <algorithm>
#include <set>

#include "charprobe/common/error.hpp"
#include "charprobe/common/files.hpp"
#include "charprobe/common/text.hpp"

namespace charprobe::corpus {

namespace {

std::vector<fs::path> list_inputs(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error(ErrorCode::UnreadablePath, path.string());
  if (!fs::is_directory(path, ec)) return {path};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().filename().string().front() != '.') files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return files;
}

std::string where(const fs::path& file, std::size_t line) {
  return file.string() + ":" + std::to_string(line) + ": ";
}

// Splits into lines without validating encoding; each record is checked
// individually so one bad record does not poison the file.
std::vector<std::string> raw_lines(const fs::path& file) {
  std::vector<std::string> lines;
  const std::string content = read_file(file);
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    std::string line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::optional<std::string> string_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw std::invalid_argument(std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

}  // namespace

IngestResult<ArticleDoc> ingest_articles(const fs::path& path, std::string_view media_house) {
  IngestResult<ArticleDoc> result;
  for (const auto& file : list_inputs(path)) {
    if (file.extension() == ".jsonl") {
      const auto lines = raw_lines(file);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto skip = [&](const std::string& why) {
          ++result.skipped;
          result.diagnostics.push_back(where(file, i + 1) + why);
        };
        if (!text::is_valid_utf8(line)) {
          skip("record is not valid UTF-8");
          continue;
        }
        try {
          const json j = json::parse(line);
          ArticleDoc doc;
          doc.id = string_field(j, "id").value_or("");
          doc.text = string_field(j, "text").value_or("");
          doc.url = string_field(j, "url");
          doc.media_house = string_field(j, "media_house").value_or(std::string(media_house));
          if (doc.id.empty()) {
            skip("missing id");
          } else if (text::trim(doc.text).empty()) {
            skip("empty text");
          } else if (doc.media_house != media_house) {
            skip("media_house '" + doc.media_house + "' not in the configured source '" + std::string(media_house) + "'");
          } else {
            result.items.push_back(std::move(doc));
          }
        } catch (const std::exception& e) {
          skip(std::string("malformed record: ") + e.what());
        }
      }
    } else {
      const std::string content = read_file(file);
      if (!text::is_valid_utf8(content)) {
        ++result.skipped;
        result.diagnostics.push_back(where(file, 1) + "file is not valid UTF-8");
        continue;
      }
      if (text::trim(content).empty()) {
        ++result.skipped;
        result.diagnostics.push_back(where(file, 1) + "empty text");
        continue;
      }
      result.items.push_back({file.stem().string(), std::string(media_house), content, std::nullopt});
    }
  }
  return result;
}

IngestResult<RawTweet> read_tweets(const fs::path& path) {
  IngestResult<RawTweet> result;
  std::set<std::string> seen;
  for (const auto& file : list_inputs(path)) {
    const auto lines = raw_lines(file);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto& line = lines[i];
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      auto skip = [&](const std::string& why) {
        ++result.skipped;
        result.diagnostics.push_back(where(file, i + 1) + why);
      };
      if (!text::is_valid_utf8(line)) {
        skip("record is not valid UTF-8");
        continue;
      }
      try {
        const json j = json::parse(line);
        RawTweet t{string_field(j, "id").value_or(""), string_field(j, "text").value_or(""),
                   string_field(j, "corpus_tag").value_or("")};
        if (t.id.empty()) {
          skip("missing id");
        } else if (!seen.insert(t.id).second) {
          skip("duplicate id '" + t.id + "'");
        } else {
          result.items.push_back(std::move(t));
        }
      } catch (const std::exception& e) {
        skip(std::string("malformed record: ") + e.what());
      }
    }
  }
  return result;
}

std::string clean_corpus_jsonl(const std::vector<CleanTweet>& tweets) {
  std::vector<json> rows;
  rows.reserve(tweets.size());
  for (const auto& t : tweets) rows.push_back({{"id", t.id}, {"text", t.text}, {"english_ratio", t.english_ratio}});
  return to_jsonl(rows);
}

std::string articles_jsonl(const std::vector<ArticleDoc>& docs) {
  std::vector<json> rows;
  rows.reserve(docs.size());
  for (const auto& d : docs) {
    json j = {{"id", d.id}, {"media_house", d.media_house}, {"text", d.text}};
    j["url"] = d.url ? json(*d.url) : json(nullptr);
    rows.push_back(std::move(j));
  }
  return to_jsonl(rows);
}

}  // namespace charprobe::corpus
