#include "charprobe/corpus/clean.hpp"

#include <optional>

#include "charprobe/common/error.hpp"
#include "charprobe/common/text.hpp"

namespace charprobe::corpus {

bool is_url_token(std::string_view token) {
  return token.find("://") != std::string_view::npos || text::starts_with_ascii_ci(token, "www.");
}

namespace {

std::vector<std::string> drop_tokens_starting_with(const std::vector<std::string>& tokens, char marker) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!t.empty() && t.front() == marker) continue;
    out.push_back(t);
  }
  return out;
}

std::string replace_emoji(std::string_view s, const EmojiMap& emoji) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : text::decode(s)) {
    if (!text::is_emoji(c)) {
      text::append_utf8(out, c);
      continue;
    }
    if (auto name = emoji.name_of(c)) {
      out += " :";
      out += *name;
      out += ": ";
    }
  }
  return out;
}

std::string strip_punctuation(std::string_view token, const PunctuationSet& punct) {
  const auto cps = text::decode(token);
  std::string out;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (punct.keep_word_internal_apostrophe && text::is_apostrophe(c) && i > 0 && i + 1 < cps.size() &&
        text::is_alnum(cps[i - 1]) && text::is_alnum(cps[i + 1])) {
      text::append_utf8(out, c);
      continue;
    }
    if (punct.removable(c)) continue;
    text::append_utf8(out, c);
  }
  return out;
}

}  // namespace

std::string clean_tweet(std::string_view raw_text, const EmojiMap& emoji, const PunctuationSet& punct) {
  // (0) URLs
  std::vector<std::string> tokens;
  for (auto& t : text::split_whitespace(raw_text)) {
    if (!is_url_token(t)) tokens.push_back(std::move(t));
  }
  // (1) lowercase
  tokens = text::split_whitespace(text::to_lower(text::join(tokens, " ")));
  // (2) mentions, (3) hashtags
  tokens = drop_tokens_starting_with(tokens, '@');
  tokens = drop_tokens_starting_with(tokens, '#');
  // (4) emoji -> :name:
  tokens = text::split_whitespace(replace_emoji(text::join(tokens, " "), emoji));
  // (5) punctuation
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto stripped = strip_punctuation(t, punct);
    if (!stripped.empty()) out.push_back(std::move(stripped));
  }
  return text::collapse_whitespace(text::join(out, " "));
}

double english_ratio(std::string_view text_in, const Dictionary& dictionary) {
  std::size_t total = 0, hits = 0;
  for (const auto& tok : text::split_whitespace(text_in)) {
    if (is_emoji_name_token(tok)) continue;
    ++total;
    if (dictionary.contains(tok)) ++hits;
  }
  if (total == 0) throw Error(ErrorCode::EmptyText, "no word tokens");
  return static_cast<double>(hits) / static_cast<double>(total);
}

FilterResult filter_tweets(const std::vector<RawTweet>& raws, const CleaningResources& res, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold must be in [0,1]");
  }
  enum class Verdict { Keep, Empty, Ratio };
  struct Slot {
    Verdict verdict = Verdict::Empty;
    std::string text;
    double ratio = 0.0;
  };
  std::vector<Slot> slots(raws.size());

  // Per-tweet work is independent; results land in input order.
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(raws.size()); ++i) {
    auto& slot = slots[static_cast<std::size_t>(i)];
    slot.text = clean_tweet(raws[static_cast<std::size_t>(i)].text, res.emoji, res.punct);
    if (slot.text.empty()) {
      slot.verdict = Verdict::Empty;
      continue;
    }
    try {
      slot.ratio = english_ratio(slot.text, res.dictionary);
    } catch (const Error&) {
      slot.verdict = Verdict::Empty;  // only emoji names left: nothing to judge
      continue;
    }
    slot.verdict = slot.ratio > threshold ? Verdict::Keep : Verdict::Ratio;
  }

  FilterResult result;
  for (std::size_t i = 0; i < raws.size(); ++i) {
    auto& slot = slots[i];
    switch (slot.verdict) {
      case Verdict::Keep:
        result.kept.push_back({raws[i].id, std::move(slot.text), slot.ratio, raws[i].corpus_tag});
        break;
      case Verdict::Empty: ++result.rejected.empty; break;
      case Verdict::Ratio: ++result.rejected.ratio; break;
    }
  }
  return result;
}

}  // namespace charprobe::corpus
