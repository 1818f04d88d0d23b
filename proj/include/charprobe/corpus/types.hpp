#pragma once

#include <optional>
#include <string>

namespace charprobe::corpus {

struct ArticleDoc {
  std::string id;
  std::string media_house;
  std::string text;
  std::optional<std::string> url;
};

struct RawTweet {
  std::string id;
  std::string text;
  std::string corpus_tag;
};

struct CleanTweet {
  std::string id;
  std::string text;  // lowercase, no mentions/hashtags/URLs/punctuation
  double english_ratio = 0.0;
  std::string corpus_tag;
};

}  // namespace charprobe::corpus
