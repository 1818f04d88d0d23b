#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "charprobe/corpus/lexicons.hpp"
#include "charprobe/corpus/types.hpp"

namespace charprobe::corpus {

// URL tokens: contain "://" or start with "www." (case-insensitive).
bool is_url_token(std::string_view token);

// Normalizes one tweet: drop URLs, lowercase, drop @mentions, drop #hashtags,
// replace emoji with ":name:", strip punctuation, collapse whitespace.
// An empty result is legal; filtering decides what to do with it.
std::string clean_tweet(std::string_view raw_text, const EmojiMap& emoji, const PunctuationSet& punct);

inline std::string clean_tweet(const RawTweet& raw, const EmojiMap& emoji, const PunctuationSet& punct) {
  return clean_tweet(raw.text, emoji, punct);
}

// |tokens in dictionary| / |tokens| over whitespace tokens, ignoring
// ":emoji_name:" tokens. Throws EmptyText when no tokens remain.
double english_ratio(std::string_view text, const Dictionary& dictionary);

struct RejectionTally {
  std::size_t empty = 0;
  std::size_t ratio = 0;
  std::size_t total() const { return empty + ratio; }
};

struct FilterResult {
  std::vector<CleanTweet> kept;
  RejectionTally rejected;
};

struct CleaningResources {
  const EmojiMap& emoji;
  const PunctuationSet& punct;
  const Dictionary& dictionary;
};

// Keeps tweets whose cleaned text is non-empty and whose english ratio is
// strictly greater than the threshold. Input order is preserved.
FilterResult filter_tweets(const std::vector<RawTweet>& raws, const CleaningResources& res,
                           double threshold = 0.70);

}  // namespace charprobe::corpus
