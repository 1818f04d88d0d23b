#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "charprobe/corpus/types.hpp"

namespace charprobe::corpus {

template <typename T>
struct IngestResult {
  std::vector<T> items;
  std::size_t skipped = 0;
  std::vector<std::string> diagnostics;  // "file:line: reason" per skipped record
};

// Reads one article per plain-text file, or {id, media_house, url, text}
// records from *.jsonl files. Directories are walked (non-recursively) in
// lexicographic filename order. Records that are not valid UTF-8, fail to
// parse, have empty text, or name a different media house are skipped.
IngestResult<ArticleDoc> ingest_articles(const std::filesystem::path& path, std::string_view media_house);

// Line-delimited {id, text, corpus_tag} records. Duplicate ids are skipped.
IngestResult<RawTweet> read_tweets(const std::filesystem::path& path);

std::string clean_corpus_jsonl(const std::vector<CleanTweet>& tweets);
std::string articles_jsonl(const std::vector<ArticleDoc>& docs);

}  // namespace charprobe::corpus
