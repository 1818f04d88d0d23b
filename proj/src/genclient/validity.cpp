#include "charprobe/genclient/validity.hpp"

#include "charprobe/common/error.hpp"
#include "charprobe/common/text.hpp"
#include "charprobe/corpus/clean.hpp"

namespace charprobe::genclient {

std::string_view to_string(ValidityReason r) {
  switch (r) {
    case ValidityReason::Valid: return "valid";
    case ValidityReason::Empty: return "empty";
    case ValidityReason::ResidualMarkup: return "residual_markup";
    case ValidityReason::TooFewTokens: return "too_few_tokens";
    case ValidityReason::LowEnglishRatio: return "low_english_ratio";
    case ValidityReason::NoSentenceBoundary: return "no_sentence_boundary";
  }
  return "empty";
}

ValidityReason validity_reason_from_string(std::string_view s) {
  for (auto r : {ValidityReason::Valid, ValidityReason::Empty, ValidityReason::ResidualMarkup,
                 ValidityReason::TooFewTokens, ValidityReason::LowEnglishRatio, ValidityReason::NoSentenceBoundary}) {
    if (to_string(r) == s) return r;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown validity reason '" + std::string(s) + "'");
}

Verdict is_valid_entailment(std::string_view raw, const corpus::Dictionary& dictionary, const ValidityRules& rules) {
  const std::string trimmed = text::trim(raw);
  if (trimmed.empty()) return {false, ValidityReason::Empty};

  const auto cps = text::decode(trimmed);
  for (char32_t c : cps) {
    if (text::is_emoji(c)) return {false, ValidityReason::ResidualMarkup};
  }
  for (const auto& tok : text::split_whitespace(trimmed)) {
    if (tok.size() > 1 && (tok.front() == '@' || tok.front() == '#')) return {false, ValidityReason::ResidualMarkup};
  }

  // Word tokens: lowercase, punctuation stripped, at least one letter.
  static const corpus::PunctuationSet kPunct{};
  static const corpus::EmojiMap kNoEmoji{};
  std::vector<std::string> words;
  for (const auto& tok : text::split_whitespace(corpus::clean_tweet(trimmed, kNoEmoji, kPunct))) {
    bool has_letter = false;
    for (char32_t c : text::decode(tok)) has_letter = has_letter || (text::is_alnum(c) && !(c >= U'0' && c <= U'9'));
    if (has_letter) words.push_back(tok);
  }
  if (words.size() < rules.min_word_tokens) return {false, ValidityReason::TooFewTokens};

  if (!(corpus::english_ratio(text::join(words, " "), dictionary) > rules.min_english_ratio)) {
    return {false, ValidityReason::LowEnglishRatio};
  }

  bool terminal = false;
  for (char32_t c : cps) terminal = terminal || c == U'.' || c == U'!' || c == U'?';
  if (!terminal && words.size() < rules.token_floor) return {false, ValidityReason::NoSentenceBoundary};

  return {true, ValidityReason::Valid};
}

}  // namespace charprobe::genclient
